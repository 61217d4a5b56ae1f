"""Weak-limit asymptotics for the phi family.

The continuous density lives on (-eta, eta) where eta is the peak velocity;
it is assembled from auxiliary functions (Theta, Phi+-, Lambda+-, Omega, Xi)
that are all even in v.  The localization profile carries no phi dependence
at all, so it coincides with the rho-family profile at the shared Grover
point rho = 1/sqrt(3).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import (NegativeRadicand, NormalizationError, OutsideSupport,
                     ParameterOutOfRange)
from .quadrature import EndpointSingularity, QuadratureSpec, integrate

_SINGULAR = QuadratureSpec(
    rel_tol=1e-10, abs_tol=1e-14,
    endpoint_singularity=EndpointSingularity.INVERSE_SQRT_BOTH)

# Square-root arguments this far below zero are treated as roundoff and
# clamped; anything lower is a genuine domain violation.
RADICAND_CLAMP = 1e-9

_SQRT6 = math.sqrt(6.0)
_LOC_BASE = 5.0 - 2.0 * _SQRT6  # |nu| at the Grover point


def _check_phi(phi: float) -> None:
    if not 0.0 <= phi < math.pi / 2:
        raise ParameterOutOfRange(f"phi must lie in [0, pi/2), got {phi}")


def peak_velocity(phi: float) -> float:
    """Maximal group velocity eta(phi); the ballistic fronts sit at +-eta*t."""
    _check_phi(phi)
    c2 = math.cos(phi) ** 2
    return math.sqrt((3.0 - c2 - math.sin(phi) * math.sqrt(9.0 - c2)) / 6.0)


@dataclass(frozen=True)
class PhiDensityTerms:
    """Auxiliary functions of the density, evaluated at one velocity."""

    theta: float
    phi_plus: float
    phi_minus: float
    lambda_plus: float
    lambda_minus: float
    omega: float
    xi: float


def _clamped_sqrt(arg: np.ndarray) -> np.ndarray:
    low = float(np.min(arg))
    if low < -RADICAND_CLAMP:
        raise NegativeRadicand(
            f"radicand {low:.3e} is below the clamping window "
            f"-{RADICAND_CLAMP}; velocity outside the valid domain")
    return np.sqrt(np.maximum(arg, 0.0))


def _term_arrays(phi: float, v: np.ndarray):
    """Vectorized (theta, lambda_plus, lambda_minus, omega, xi) on interior v.

    phi_minus and lambda_minus are evaluated through the product identities

        phi_plus * phi_minus   = 3 sin(phi) (1 - v^2) sqrt(9 - cos^2(phi)),
        lambda_plus * lambda_minus = 24 Theta cos(phi),

    which are algebraically exact and avoid the catastrophic cancellation of
    the direct radicand near the support edges and at phi = 0 (where the
    direct form subtracts two equal quantities).  They also show the
    phi_minus radicand is non-negative on the whole open support.
    """
    eta = peak_velocity(phi)
    c = math.cos(phi)
    s = math.sin(phi)
    gap = eta * eta - v * v
    theta = _clamped_sqrt(gap * (gap + s * math.sqrt(1.0 - c * c / 9.0)))
    base = 9.0 * (1.0 - v * v) - (5.0 + 3.0 * v * v) * c * c
    phi_plus = _clamped_sqrt(base + 12.0 * theta * c)
    phi_minus = 3.0 * s * (1.0 - v * v) * math.sqrt(9.0 - c * c) / phi_plus
    lam_plus = phi_plus + phi_minus
    lam_minus = 24.0 * theta * c / lam_plus
    denom = 8.0 * c * c + 3.0 * v * v * s * s
    omega = 4.0 * c * ((5.0 - 3.0 * v * v) * c * lam_plus
                       + 3.0 * theta * lam_minus) / denom
    xi = 3.0 * _SQRT6 * math.tan(phi) * ((v * v + c * c) * lam_plus
                                         - theta * c * lam_minus) / denom
    return theta, phi_plus, phi_minus, lam_plus, lam_minus, omega, xi


def density_terms(phi: float, v: float) -> PhiDensityTerms:
    """Evaluate the auxiliary functions at one interior velocity."""
    _check_phi(phi)
    if abs(v) >= peak_velocity(phi):
        raise OutsideSupport(
            f"|v| = {abs(v)} is outside the open support "
            f"(-{peak_velocity(phi)}, {peak_velocity(phi)})")
    arrays = _term_arrays(phi, np.asarray([float(v)]))
    return PhiDensityTerms(*(float(a[0]) for a in arrays))


_DELTA_CACHE: dict[float, tuple[float, float]] = {}
_DELTA_LOCK = threading.Lock()


def delta_coefficients(phi: float) -> tuple[float, float]:
    """The two quadrature coefficients of the second moment, memoized per phi.

    delta1 integrates v^2 Lambda+ / (6 pi (1-v^2) Theta), delta2 the same
    with Omega in place of Lambda+, both over (-eta, eta).
    """
    _check_phi(phi)
    cached = _DELTA_CACHE.get(phi)
    if cached is not None:
        return cached
    eta = peak_velocity(phi)

    def make(which: int):
        def f(v: np.ndarray) -> np.ndarray:
            theta, _, _, lam_plus, _, omega, _ = _term_arrays(phi, v)
            numer = lam_plus if which == 0 else omega
            return v * v * numer / (6.0 * np.pi * (1.0 - v * v) * theta)
        return f

    d1, _ = integrate(make(0), -eta, eta, _SINGULAR)
    d2, _ = integrate(make(1), -eta, eta, _SINGULAR)
    with _DELTA_LOCK:
        _DELTA_CACHE.setdefault(phi, (d1, d2))
    return _DELTA_CACHE[phi]


@dataclass(frozen=True, eq=False)
class PhiAsymptotics:
    """Limit quantities for one coin parameter and one eigenbasis state."""

    phi: float
    g: np.ndarray
    eta: float = field(init=False)

    def __post_init__(self) -> None:
        _check_phi(self.phi)
        g = np.array(self.g, dtype=complex).reshape(3)
        g.setflags(write=False)
        object.__setattr__(self, "g", g)
        dev = abs(float(np.sum(np.abs(g) ** 2)) - 1.0)
        if dev > 1e-12:
            raise NormalizationError(
                f"eigenbasis amplitudes have |g|^2 off unity by {dev:.3e}")
        object.__setattr__(self, "eta", peak_velocity(self.phi))

    @property
    def v_peak(self) -> float:
        return self.eta

    def _bracket_coefficients(self):
        gp, g1, g2 = self.g
        even_lam = 3.0 * abs(g1) ** 2 + 5.0 * abs(g2) ** 2 - 2.0
        even_omega = 1.0 - abs(g1) ** 2 - 2.0 * abs(g2) ** 2
        # The two odd terms multiply purely imaginary combinations, so the
        # bracket is assembled from real coherence factors directly.
        coh_re = 2.0 * (g1 * np.conj(g2)).real
        coh_im = -2.0 * (g1 * np.conj(g2)).imag
        coh_xi = -2.0 * (g2 * np.conj(gp)).imag
        return even_lam, even_omega, coh_re, coh_im, coh_xi

    def density_grid(self, v: np.ndarray) -> np.ndarray:
        """Group-velocity density on an array of interior velocities."""
        v = np.asarray(v, dtype=float)
        if np.any(np.abs(v) >= self.eta):
            raise OutsideSupport(
                f"density is defined on the open interval (-{self.eta}, {self.eta})")
        return self._density_unchecked(v)

    def _density_unchecked(self, v: np.ndarray) -> np.ndarray:
        theta, _, _, lam_plus, _, omega, xi = _term_arrays(self.phi, v)
        a_lam, a_omega, coh_re, coh_im, coh_xi = self._bracket_coefficients()
        bracket = (a_lam * lam_plus + a_omega * omega
                   - math.sqrt(3.0) * v * (coh_re + coh_im * math.tan(self.phi)) * lam_plus
                   + v * coh_xi * xi)
        return bracket / (6.0 * np.pi * (1.0 - v * v) * theta)

    def density(self, v: float) -> float:
        """Group-velocity density w(v) for |v| < eta."""
        return float(self.density_grid(np.asarray([v]))[0])

    def continuous_weight(self) -> float:
        """Total mass of the continuous density."""
        gp, g1, g2 = self.g
        return (_SQRT6 - 2.0 + (3.0 - _SQRT6) * abs(g1) ** 2
                + (5.0 - 2.0 * _SQRT6) * abs(g2) ** 2)

    def continuous_weight_quadrature(self,
                                     spec: QuadratureSpec = _SINGULAR) -> float:
        """Same mass recomputed by quadrature of the density."""
        value, _ = integrate(self._density_unchecked, -self.eta, self.eta, spec)
        return value

    def localization(self, m: int) -> float:
        """Trapped probability p_inf(m); carries no phi dependence."""
        gp, g1, g2 = self.g
        if m == 0:
            return _LOC_BASE * (3.0 * abs(gp) ** 2 + 2.0 * abs(g2) ** 2)
        coh = gp + g2 if m > 0 else gp - g2
        return 12.0 * _LOC_BASE ** (2 * abs(m)) * abs(coh) ** 2

    def localization_total(self) -> float:
        """Total trapped probability, complement of the continuous weight."""
        gp, g1, g2 = self.g
        return (_SQRT6 - 2.0) * abs(g2) ** 2 + (3.0 - _SQRT6) * abs(gp) ** 2

    def second_moment(self) -> float:
        """Limit of the rescaled second moment <(m/t)^2>."""
        d1, d2 = delta_coefficients(self.phi)
        a_lam, a_omega, _, _, _ = self._bracket_coefficients()
        return a_lam * d1 + a_omega * d2

    def moment(self, n: int, spec: QuadratureSpec = _SINGULAR) -> float:
        """Limit of <v^n> for any order n >= 1; order 2 reuses the deltas.

        Odd orders are exactly zero whenever all three coherence factors
        vanish (the odd part of the density is a multiple of them).
        """
        if n < 1:
            raise ValueError(f"moment order must be at least 1, got {n}")
        if n == 2:
            return self.second_moment()
        if n % 2 == 1:
            _, _, coh_re, coh_im, coh_xi = self._bracket_coefficients()
            if coh_re == 0.0 and coh_im == 0.0 and coh_xi == 0.0:
                return 0.0
        value, _ = integrate(lambda v: v ** n * self._density_unchecked(v),
                             -self.eta, self.eta, spec)
        return value
