"""Momentum-space oracle for the walk evolution.

The evolution operator is diagonal in quasi-momentum k, where it acts as a
3x3 unitary with eigenvalues (1, exp(i(phi+omega)), exp(i(phi-omega))) and
a k-dependent eigenbasis.  Everything the simulator and the asymptotics
modules produce can be recomputed from integrals over k: finite-time
amplitudes, the stationary (trapped) amplitudes, and the weak-limit
moments.  All k-integrals run on equispaced grids offset by half a cell;
the offset keeps spectral accuracy and never samples k = 0, where the
eigenvector parametrization below degenerates for every phi.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .coins import Basis, CoinState
from .errors import (BasisMismatch, DegenerateNormalization,
                     OracleRegimeExceeded, ParameterOutOfRange,
                     QuadratureFailure)

DEFAULT_GRID = 4096
ORACLE_MAX_STEPS = 50
_DEGENERACY_FLOOR = 1e-14


def _check_phi(phi: float) -> None:
    if not 0.0 <= phi < math.pi / 2:
        raise ParameterOutOfRange(f"phi must lie in [0, pi/2), got {phi}")


def dispersion(k, phi: float):
    """Dispersion branch omega(k) in [-pi, 0]; 2*pi periodic in k."""
    _check_phi(phi)
    return -np.arccos(-(2.0 + np.cos(k)) * math.cos(phi) / 3.0)


def _dispersion_radicand(k, phi: float):
    """9 - (2 + cos k)^2 cos^2(phi), in a form stable near k = 0.

    Written as (1 - cos k)(5 + cos k) + (2 + cos k)^2 sin^2(phi) with
    1 - cos k = 2 sin^2(k/2); the naive difference loses all precision
    where the radicand vanishes.
    """
    ck = np.cos(k)
    s = math.sin(phi)
    return (2.0 * np.sin(k / 2.0) ** 2 * (5.0 + ck)
            + (2.0 + ck) ** 2 * s * s)


def group_velocity(k, phi: float):
    """d(omega)/dk, the velocity carried by quasi-momentum k."""
    _check_phi(phi)
    return math.cos(phi) * np.sin(k) / np.sqrt(_dispersion_radicand(k, phi))


def _normalizations(k: np.ndarray, phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Squared norms of the two raw time-dependent eigenvectors.

    Equal to (4/3) cos^2(phi) (R^2 +- (2+cos k) sin(phi) R) with
    R = sqrt(9 - (2+cos k)^2 cos^2(phi)).  Both vanish only at k = 0
    (n3 for every phi, n2 additionally needs phi = 0).
    """
    ck = np.cos(k)
    c = math.cos(phi)
    s = math.sin(phi)
    r = np.sqrt(_dispersion_radicand(k, phi))
    pref = (4.0 / 3.0) * c * c
    lead = r + (2.0 + ck) * s
    # r^2 - ((2+ck) s)^2 = 2 sin^2(k/2) (5 + ck) exactly, so the second
    # factor is evaluated as a quotient instead of a cancelling difference
    tail = 2.0 * np.sin(k / 2.0) ** 2 * (5.0 + ck)
    with np.errstate(invalid="ignore", divide="ignore"):
        n3 = np.where(lead > 0.0, pref * r * tail / lead, 0.0)
    return pref * r * lead, n3


def _eigendata(k: np.ndarray, phi: float):
    """omega plus the three normalized eigenvectors on an array of k."""
    ck = np.cos(k)
    c = math.cos(phi)
    eik = np.exp(1j * k)
    omega = -np.arccos(-(2.0 + ck) * c / 3.0)

    v1 = np.sqrt(2.0 / (5.0 + ck))[:, None] * np.stack(
        [np.ones_like(k, dtype=complex), (1.0 + eik) / 2.0, eik], axis=1)

    n2, n3 = _normalizations(k, phi)
    vectors = [v1]
    for sign, norm2 in ((+1.0, n2), (-1.0, n3)):
        branch = phi + sign * omega
        raw = np.stack([
            (np.conj(eik) + np.exp(-1j * branch)) * c,
            np.cos(omega) + np.exp(1j * sign * omega)
            - np.exp(-1j * (2.0 * phi + sign * omega)) + ck * c,
            (eik + np.exp(-1j * branch)) * c,
        ], axis=1)
        vectors.append(raw / np.sqrt(norm2)[:, None])
    return omega, vectors[0], vectors[1], vectors[2]


@dataclass(frozen=True, eq=False)
class BlochSystem:
    """Eigensystem of the momentum-space step operator at one k."""

    k: float
    omega: float
    eigenvalues: np.ndarray   # (1, exp(i(phi+omega)), exp(i(phi-omega)))
    eigenvectors: np.ndarray  # columns v1, v2, v3


def bloch_eigensystem(k: float, phi: float) -> BlochSystem:
    """Eigenvalues and normalized eigenvectors at one quasi-momentum."""
    _check_phi(phi)
    ks = np.asarray([float(k)])
    n2, n3 = _normalizations(ks, phi)
    if min(float(n2[0]), float(n3[0])) < _DEGENERACY_FLOOR:
        raise DegenerateNormalization(
            f"eigenvector normalization vanishes at k = {k} (phi = {phi}); "
            "the eigenvalue branches coalesce there")
    omega, v1, v2, v3 = _eigendata(ks, phi)
    w = float(omega[0])
    eigenvalues = np.array([1.0, np.exp(1j * (phi + w)), np.exp(1j * (phi - w))])
    return BlochSystem(float(k), w, eigenvalues,
                       np.column_stack([v1[0], v2[0], v3[0]]))


def _require_standard(psi_c: CoinState) -> np.ndarray:
    if psi_c.basis is not Basis.STANDARD:
        raise BasisMismatch("spectral routines take standard-basis coin states")
    psi_c.require_normalized()
    return psi_c.amplitudes


def overlaps(k: float, phi: float, psi_c: CoinState
             ) -> tuple[complex, complex, complex]:
    """Components of the coin state on the Bloch eigenbasis at one k.

    Quasi-momenta where the eigenvector parametrization degenerates (k = 0
    modulo 2*pi) are nudged by half a default grid cell; the projections
    remain complete there.
    """
    _check_phi(phi)
    psi = _require_standard(psi_c)
    ks = np.asarray([float(k)])
    n2, n3 = _normalizations(ks, phi)
    if min(float(n2[0]), float(n3[0])) < _DEGENERACY_FLOOR:
        ks = ks + math.pi / DEFAULT_GRID
    _, v1, v2, v3 = _eigendata(ks, phi)
    return (complex(np.vdot(v1[0], psi)),
            complex(np.vdot(v2[0], psi)),
            complex(np.vdot(v3[0], psi)))


_EIGEN_CACHE: dict[tuple[float, int], tuple] = {}
_EIGEN_CACHE_CAP = 48
_EIGEN_LOCK = threading.Lock()


def _grid_eigendata(phi: float, n: int):
    """Eigendata over the offset grid k_i = (i + 1/2) * 2*pi / n, cached."""
    key = (phi, n)
    hit = _EIGEN_CACHE.get(key)
    if hit is not None:
        return hit
    ks = (np.arange(n) + 0.5) * (2.0 * math.pi / n)
    n2, n3 = _normalizations(ks, phi)
    tiny = np.minimum(n2, n3) < _DEGENERACY_FLOOR
    if np.any(tiny):
        ks = np.where(tiny, ks + math.pi / n, ks)
    data = (ks,) + _eigendata(ks, phi)
    with _EIGEN_LOCK:
        while len(_EIGEN_CACHE) >= _EIGEN_CACHE_CAP:
            _EIGEN_CACHE.pop(next(iter(_EIGEN_CACHE)))
        _EIGEN_CACHE.setdefault(key, data)
    return data


def _doubling_mean(build, rel_tol: float, abs_tol: float,
                   initial_points: int, max_doublings: int):
    """Grid mean of a periodic field, doubled until two estimates agree."""
    n = initial_points
    prev = build(n)
    diff = math.inf
    for _ in range(max_doublings):
        n *= 2
        cur = build(n)
        diff = float(np.max(np.abs(cur - prev)))
        if diff <= max(abs_tol, rel_tol * float(np.max(np.abs(cur)))):
            return cur, diff
        prev = cur
    raise QuadratureFailure(
        f"k-grid mean did not converge by {n} points (last change {diff:.3g})")


def amplitude_integral(m: int, t: int, phi: float, psi_c: CoinState, *,
                       max_steps: int = ORACLE_MAX_STEPS,
                       rel_tol: float = 1e-10, abs_tol: float = 1e-12,
                       initial_points: int = DEFAULT_GRID) -> np.ndarray:
    """Finite-time amplitude vector at position m after t steps.

    Momentum-space route, independent of the real-space simulator.  The
    integrand oscillates like exp(i*omega*t), so t is capped at the oracle
    budget where the default grids stay comfortably converged.
    """
    _check_phi(phi)
    if t < 0:
        raise ValueError(f"step count must be non-negative, got {t}")
    if t > max_steps:
        raise OracleRegimeExceeded(
            f"t = {t} exceeds the oracle budget of {max_steps} steps")
    psi = _require_standard(psi_c)

    def build(n: int) -> np.ndarray:
        ks, omega, v1, v2, v3 = _grid_eigendata(phi, n)
        f1 = v1.conj() @ psi
        f2 = v2.conj() @ psi
        f3 = v3.conj() @ psi
        field = (f1[:, None] * v1
                 + (np.exp(1j * (phi + omega) * t) * f2)[:, None] * v2
                 + (np.exp(1j * (phi - omega) * t) * f3)[:, None] * v3)
        return (np.exp(-1j * m * ks)[:, None] * field).mean(axis=0)

    value, _ = _doubling_mean(build, rel_tol, abs_tol, initial_points, 5)
    return value


def stationary_amplitude(m: int, phi: float, psi_c: CoinState, *,
                         rel_tol: float = 1e-11, abs_tol: float = 1e-13,
                         initial_points: int = DEFAULT_GRID) -> np.ndarray:
    """Trapped amplitude vector at position m in the infinite-time limit.

    Only the stationary Bloch branch contributes, and that branch does not
    involve phi, so the result is the same for the whole family.
    """
    _check_phi(phi)
    psi = _require_standard(psi_c)

    def build(n: int) -> np.ndarray:
        ks = (np.arange(n) + 0.5) * (2.0 * math.pi / n)
        eik = np.exp(1j * ks)
        v1 = np.sqrt(2.0 / (5.0 + np.cos(ks)))[:, None] * np.stack(
            [np.ones_like(ks, dtype=complex), (1.0 + eik) / 2.0, eik], axis=1)
        f1 = v1.conj() @ psi
        return ((np.exp(-1j * m * ks) * f1)[:, None] * v1).mean(axis=0)

    value, _ = _doubling_mean(build, rel_tol, abs_tol, initial_points, 5)
    return value


def limit_moment(n: int, phi: float, psi_c: CoinState, *,
                 rel_tol: float = 1e-10, abs_tol: float = 1e-13,
                 initial_points: int = DEFAULT_GRID) -> float:
    """Weak-limit moment of the rescaled position, n-th order.

    The branch paired with exp(i(phi+omega)t) propagates at +d(omega)/dk
    and the other at -d(omega)/dk (validated against the simulator and the
    closed-form densities), so the alternating sign sits on the second
    overlap.
    """
    _check_phi(phi)
    if n < 1:
        raise ValueError(f"moment order must be at least 1, got {n}")
    psi = _require_standard(psi_c)
    sign = -1.0 if n % 2 else 1.0

    def build(points: int) -> np.ndarray:
        ks, omega, _, v2, v3 = _grid_eigendata(phi, points)
        f2 = v2.conj() @ psi
        f3 = v3.conj() @ psi
        gv = group_velocity(ks, phi)
        return np.asarray((gv ** n * (np.abs(f2) ** 2
                                      + sign * np.abs(f3) ** 2)).mean())

    value, _ = _doubling_mean(build, rel_tol, abs_tol, initial_points, 5)
    return float(value)


def velocity_split_point(phi: float) -> float:
    """Quasi-momentum k0 in (0, pi) where the group velocity peaks.

    Closed form for phi > 0; the formula degenerates to arccos(1) at
    phi = 0, where a bracketed numerical maximization takes over.
    """
    _check_phi(phi)
    if phi == 0.0:
        result = minimize_scalar(lambda k: -group_velocity(k, 0.0),
                                 bounds=(1e-12, math.pi - 1e-9),
                                 method="bounded",
                                 options={"xatol": 1e-10})
        return float(result.x)
    c2 = math.cos(phi) ** 2
    arg = (9.0 - 5.0 * c2 - 3.0 * math.sin(phi) * math.sqrt(9.0 - c2)) / (4.0 * c2)
    return math.acos(min(1.0, max(-1.0, arg)))
