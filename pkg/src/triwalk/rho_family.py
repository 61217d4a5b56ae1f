"""Weak-limit asymptotics for the rho family.

All quantities are parameterized by the coin parameter rho and the initial
coin state written in the coin eigenbasis, g = (g_plus, g_1, g_2).  The
limit distribution of m/t splits into a continuous group-velocity density
supported on (-rho, rho) and a time-independent localization profile that
decays geometrically in |m| with ratio nu**2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NormalizationError, OutsideSupport, ParameterOutOfRange
from .quadrature import EndpointSingularity, QuadratureSpec, integrate

_SINGULAR = QuadratureSpec(
    rel_tol=1e-10, abs_tol=1e-14,
    endpoint_singularity=EndpointSingularity.INVERSE_SQRT_BOTH)


def delta1(rho: float) -> float:
    """Closed-form coefficient (1 + rho^2 - sqrt(1-rho^2)) / (2 + 2 sqrt(1-rho^2))."""
    u = math.sqrt(1.0 - rho * rho)
    return (1.0 + rho * rho - u) / (2.0 + 2.0 * u)


def delta2(rho: float) -> float:
    """Closed-form coefficient (2 - rho^2 - 2 sqrt(1-rho^2)) / rho^2.

    Evaluated as (1-u)/(1+u) with u = sqrt(1-rho^2), which is algebraically
    identical and free of the small-rho cancellation.
    """
    u = math.sqrt(1.0 - rho * rho)
    return (1.0 - u) / (1.0 + u)


@dataclass(frozen=True, eq=False)
class RhoAsymptotics:
    """Limit quantities for one coin parameter and one eigenbasis state."""

    rho: float
    g: np.ndarray
    nu: float = field(init=False)

    def __post_init__(self) -> None:
        if not 0.0 < self.rho < 1.0:
            raise ParameterOutOfRange(
                f"rho must lie strictly inside (0, 1), got {self.rho}")
        g = np.array(self.g, dtype=complex).reshape(3)
        g.setflags(write=False)
        object.__setattr__(self, "g", g)
        dev = abs(float(np.sum(np.abs(g) ** 2)) - 1.0)
        if dev > 1e-12:
            raise NormalizationError(
                f"eigenbasis amplitudes have |g|^2 off unity by {dev:.3e}")
        # nu = -(2 - rho^2 - 2 sqrt(1-rho^2)) / rho^2 = -(1-u)/(1+u)
        u = math.sqrt(1.0 - self.rho * self.rho)
        object.__setattr__(self, "nu", -(1.0 - u) / (1.0 + u))

    @property
    def v_peak(self) -> float:
        return self.rho

    def _bracket_coefficients(self) -> tuple[float, float, float]:
        gp, g1, g2 = self.g
        even0 = 1.0 - abs(g2) ** 2
        odd1 = 2.0 * (g1 * np.conj(g2)).real  # g1 conj(g2) + conj(g1) g2
        even2 = abs(g1) ** 2 + 2.0 * abs(g2) ** 2 - 1.0
        return even0, odd1, even2

    def density_grid(self, v: np.ndarray) -> np.ndarray:
        """Group-velocity density on an array of interior velocities."""
        v = np.asarray(v, dtype=float)
        if np.any(np.abs(v) >= self.rho):
            raise OutsideSupport(
                f"density is defined on the open interval (-{self.rho}, {self.rho})")
        return self._density_unchecked(v)

    def _density_unchecked(self, v: np.ndarray) -> np.ndarray:
        rho = self.rho
        c0, c1, c2 = self._bracket_coefficients()
        pref = math.sqrt(1.0 - rho * rho) / (
            np.pi * (1.0 - v * v) * np.sqrt(rho * rho - v * v))
        return pref * (c0 - c1 * (v / rho) + c2 * (v / rho) ** 2)

    def density(self, v: float) -> float:
        """Group-velocity density w(v) for |v| < rho."""
        return float(self.density_grid(np.asarray([v]))[0])

    def continuous_weight(self) -> float:
        """Total mass of the continuous density, integral of w over (-rho, rho)."""
        _, _, c2 = self._bracket_coefficients()
        gp, g1, g2 = self.g
        u = math.sqrt(1.0 - self.rho * self.rho)
        # (sqrt(1-rho^2) - 1)/rho^2 = -1/(1 + sqrt(1-rho^2))
        return 1.0 - abs(g2) ** 2 + c2 / (1.0 + u)

    def continuous_weight_quadrature(self,
                                     spec: QuadratureSpec = _SINGULAR) -> float:
        """Same mass recomputed by quadrature of the density."""
        value, _ = integrate(self._density_unchecked, -self.rho, self.rho, spec)
        return value

    def localization(self, m: int) -> float:
        """Trapped probability p_inf(m)."""
        gp, g1, g2 = self.g
        rho2 = self.rho * self.rho
        if m == 0:
            return abs(self.nu) / rho2 * (
                abs(gp) ** 2 + (1.0 - rho2) * abs(g2) ** 2)
        coh = gp + g2 if m > 0 else gp - g2
        return (2.0 - 2.0 * rho2) / rho2 ** 2 * self.nu ** (2 * abs(m)) * abs(coh) ** 2

    def localization_total(self) -> float:
        """Total trapped probability, complement of the continuous weight."""
        gp, g1, g2 = self.g
        u = math.sqrt(1.0 - self.rho * self.rho)
        return abs(g2) ** 2 - (abs(g2) ** 2 - abs(gp) ** 2) / (1.0 + u)

    def second_moment(self) -> float:
        """Limit of the rescaled second moment <(m/t)^2>."""
        gp, g1, g2 = self.g
        return ((abs(g1) ** 2 + 1.0) * delta1(self.rho)
                + (abs(g2) ** 2 - 1.0) * delta2(self.rho))

    def odd_moment(self, n: int) -> float:
        """Limit of <v^(2n+1)>; proportional to the g1/g2 coherence factor."""
        if n < 0:
            raise ValueError(f"odd-moment index must be non-negative, got {n}")
        _, coherence, _ = self._bracket_coefficients()
        if coherence == 0.0:
            return 0.0
        return self.odd_moment_prefactor(n) * coherence

    def odd_moment_prefactor(self, n: int) -> float:
        """The state-independent factor multiplying the coherence term."""
        rho = self.rho

        def f(v: np.ndarray) -> np.ndarray:
            return v ** (2 * n + 2) / (
                np.pi * (1.0 - v * v) * np.sqrt(rho * rho - v * v))

        value, _ = integrate(f, -rho, rho, _SINGULAR)
        return -math.sqrt(1.0 - rho * rho) / rho * value

    def moment(self, n: int, spec: QuadratureSpec = _SINGULAR) -> float:
        """Limit of <v^n> for any order n >= 1.

        Order 2 uses the closed form; other even orders integrate
        v^n * w(v), odd orders route through odd_moment.
        """
        if n < 1:
            raise ValueError(f"moment order must be at least 1, got {n}")
        if n == 2:
            return self.second_moment()
        if n % 2 == 1:
            return self.odd_moment((n - 1) // 2)
        value, _ = integrate(lambda v: v ** n * self._density_unchecked(v),
                             -self.rho, self.rho, spec)
        return value
