import math

import numpy as np

GAMMA_PLUS = np.array([1.0, 1.0, 1.0]) / math.sqrt(3.0)
GAMMA_MINUS1 = np.array([1.0, -2.0, 1.0]) / math.sqrt(6.0)
GAMMA_MINUS2 = np.array([1.0, 0.0, -1.0]) / math.sqrt(2.0)


def random_amplitudes(rng: np.random.Generator) -> np.ndarray:
    """Normalized complex 3-vector."""
    g = rng.normal(size=3) + 1j * rng.normal(size=3)
    return g / np.linalg.norm(g)


def gamma_to_standard(g: np.ndarray) -> np.ndarray:
    """Assemble a standard-basis state from gamma-basis amplitudes."""
    return g[0] * GAMMA_PLUS + g[1] * GAMMA_MINUS1 + g[2] * GAMMA_MINUS2


def sigma_basis(rho: float) -> np.ndarray:
    """Columns are the rho-family coin eigenvectors in the standard basis."""
    wing = math.sqrt((1.0 - rho * rho) / 2.0)
    plus = np.array([wing, rho, wing])
    minus1 = np.array([rho / math.sqrt(2.0), -math.sqrt(1.0 - rho * rho),
                       rho / math.sqrt(2.0)])
    return np.column_stack([plus, minus1, GAMMA_MINUS2])
