"""Coin operators of the two walk families and their eigenvector bases.

Both families act on a three-dimensional coin space with standard basis
(L, S, R).  The first family is parameterized by rho in (0, 1), the second
by phi in [0, pi/2); the two share the Grover coin at rho = 1/sqrt(3),
phi = 0.  Every coin has a +1 eigenvector; expressing initial states in the
coin eigenbasis is what makes the limit formulas in the asymptotics modules
tractable.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import BasisMismatch, NormalizationError, ParameterOutOfRange

NORM_TOL = 1e-12


class Family(enum.Enum):
    RHO = "rho"
    PHI = "phi"


class Basis(enum.Enum):
    STANDARD = "standard"
    EIGEN = "eigen"


@dataclass(frozen=True)
class CoinSpec:
    """Family tag plus coin parameter.

    Rejects rho outside the open interval (0, 1) and phi outside [0, pi/2):
    the excluded values produce non-mixing walks and the limit densities
    divide by rho**2 and by cos(phi)-derived quantities.
    """

    family: Family
    parameter: float

    def __post_init__(self) -> None:
        p = float(self.parameter)
        object.__setattr__(self, "parameter", p)
        if self.family is Family.RHO:
            if not 0.0 < p < 1.0:
                raise ParameterOutOfRange(
                    f"rho must lie strictly inside (0, 1), got {p}")
        elif not 0.0 <= p < math.pi / 2:
            raise ParameterOutOfRange(
                f"phi must lie in [0, pi/2), got {p}")


@dataclass(frozen=True, eq=False)
class CoinState:
    """Three complex coin amplitudes with a basis tag."""

    amplitudes: np.ndarray
    basis: Basis = Basis.STANDARD

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex).reshape(3)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def require_normalized(self, tol: float = NORM_TOL) -> None:
        dev = abs(self.norm_squared() - 1.0)
        if dev > tol:
            raise NormalizationError(
                f"coin state has |amplitudes|^2 = {self.norm_squared()}, "
                f"off unity by {dev:.3e} (tolerance {tol})")


@dataclass(frozen=True, eq=False)
class EigenBasis:
    """Orthonormal coin eigenvectors, expressed in the standard basis."""

    plus: CoinState
    minus1: CoinState
    minus2: CoinState
    eigenvalues: tuple[complex, complex, complex]

    def matrix(self) -> np.ndarray:
        """Unitary change-of-basis matrix with the eigenvectors as columns."""
        return np.column_stack([
            self.plus.amplitudes,
            self.minus1.amplitudes,
            self.minus2.amplitudes,
        ])


def build_coin(spec: CoinSpec) -> np.ndarray:
    """3x3 unitary coin matrix of the given family member."""
    if spec.family is Family.RHO:
        rho = spec.parameter
        off = rho * math.sqrt(2.0 - 2.0 * rho * rho)
        return np.array([
            [-rho * rho, off, 1.0 - rho * rho],
            [off, 2.0 * rho * rho - 1.0, off],
            [1.0 - rho * rho, off, -rho * rho],
        ], dtype=complex)
    phase = np.exp(2j * spec.parameter)
    return np.array([
        [-1.0 - phase, 2.0 * (1.0 + phase), 5.0 - phase],
        [2.0 * (1.0 + phase), 2.0 * (1.0 - 2.0 * phase), 2.0 * (1.0 + phase)],
        [5.0 - phase, 2.0 * (1.0 + phase), -1.0 - phase],
    ]) / 6.0


_GAMMA_PLUS = np.array([1.0, 1.0, 1.0]) / math.sqrt(3.0)
_GAMMA_MINUS1 = np.array([1.0, -2.0, 1.0]) / math.sqrt(6.0)
_GAMMA_MINUS2 = np.array([1.0, 0.0, -1.0]) / math.sqrt(2.0)


def eigenbasis(spec: CoinSpec) -> EigenBasis:
    """Coin eigenvectors and eigenvalues.

    The rho family has eigenvalues (+1, -1, -1) with rho-dependent vectors;
    the phi family has eigenvalues (+1, -exp(2i*phi), -1) with vectors that
    do not depend on phi at all.
    """
    if spec.family is Family.RHO:
        rho = spec.parameter
        wing = math.sqrt((1.0 - rho * rho) / 2.0)
        plus = np.array([wing, rho, wing])
        minus1 = np.array([rho / math.sqrt(2.0),
                           -math.sqrt(1.0 - rho * rho),
                           rho / math.sqrt(2.0)])
        minus2 = _GAMMA_MINUS2
        eigenvalues = (1.0 + 0j, -1.0 + 0j, -1.0 + 0j)
    else:
        plus, minus1, minus2 = _GAMMA_PLUS, _GAMMA_MINUS1, _GAMMA_MINUS2
        eigenvalues = (1.0 + 0j, -np.exp(2j * spec.parameter), -1.0 + 0j)
    return EigenBasis(
        CoinState(plus, Basis.STANDARD),
        CoinState(minus1, Basis.STANDARD),
        CoinState(minus2, Basis.STANDARD),
        eigenvalues,
    )


def to_standard(state: CoinState, spec: CoinSpec) -> CoinState:
    """Re-express an eigenbasis coin state in the standard (L, S, R) basis."""
    if state.basis is Basis.STANDARD:
        raise BasisMismatch("state is already in the standard basis")
    state.require_normalized()
    return CoinState(eigenbasis(spec).matrix() @ state.amplitudes,
                     Basis.STANDARD)


def to_eigen(state: CoinState, spec: CoinSpec) -> CoinState:
    """Decompose a standard-basis coin state over the coin eigenvectors."""
    if state.basis is Basis.EIGEN:
        raise BasisMismatch("state is already in the eigenvector basis")
    state.require_normalized()
    return CoinState(eigenbasis(spec).matrix().conj().T @ state.amplitudes,
                     Basis.EIGEN)
