"""Exact finite-time evolution of the three-state walk on the integer line.

One step multiplies every cell by the coin matrix and then shifts the L
component one site down, keeps S in place, and shifts R one site up.  That
real-space convention is the transcription of the momentum-space evolution
operator Diag(exp(-ik), 1, exp(ik)) . C under the transform
psi~(k) = sum_m exp(imk) psi(m); the spectral module's amplitude integral
cross-checks it to 1e-8 per amplitude.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coins import Basis, CoinSpec, CoinState, to_standard
from .errors import StepBudgetExceeded, ZeroSteps

MAX_STEPS_DEFAULT = 100_000


@dataclass(frozen=True, eq=False)
class WalkState:
    """Amplitude field after t steps; row i holds position m = i - t."""

    t: int
    amplitudes: np.ndarray  # shape (2t+1, 3), columns are (L, S, R)

    def positions(self) -> np.ndarray:
        return np.arange(-self.t, self.t + 1)

    def total_probability(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


@dataclass(frozen=True, eq=False)
class PositionDistribution:
    """Site occupation probabilities p(m, t) for m in [-t, t]."""

    t: int
    probabilities: np.ndarray

    def positions(self) -> np.ndarray:
        return np.arange(-self.t, self.t + 1)

    def probability_at(self, m: int) -> float:
        if abs(m) > self.t:
            return 0.0
        return float(self.probabilities[m + self.t])


def initial_state(coin_state: CoinState, spec: CoinSpec) -> WalkState:
    """Walker at the origin carrying the given coin state."""
    coin_state.require_normalized()
    if coin_state.basis is Basis.EIGEN:
        coin_state = to_standard(coin_state, spec)
    amps = np.zeros((1, 3), dtype=complex)
    amps[0] = coin_state.amplitudes
    return WalkState(0, amps)


def step(state: WalkState, coin: np.ndarray) -> WalkState:
    """Apply coin then shift; support grows by one site on each side."""
    mixed = state.amplitudes @ coin.T
    grown = np.zeros((state.amplitudes.shape[0] + 2, 3), dtype=complex)
    grown[:-2, 0] = mixed[:, 0]
    grown[1:-1, 1] = mixed[:, 1]
    grown[2:, 2] = mixed[:, 2]
    return WalkState(state.t + 1, grown)


def evolve(initial: WalkState, coin: np.ndarray, t: int,
           max_steps: int = MAX_STEPS_DEFAULT) -> WalkState:
    """Iterate `step` t times."""
    if t < 0:
        raise ValueError(f"step count must be non-negative, got {t}")
    if t > max_steps:
        raise StepBudgetExceeded(
            f"requested {t} steps exceeds the budget of {max_steps}")
    state = initial
    for _ in range(t):
        state = step(state, coin)
    return state


def distribution(state: WalkState) -> PositionDistribution:
    """Site probabilities p(m, t) = sum_c |a(m, c)|^2."""
    return PositionDistribution(state.t,
                                np.sum(np.abs(state.amplitudes) ** 2, axis=1))


def empirical_moment(dist: PositionDistribution, n: int) -> float:
    """Finite-time rescaled moment sum_m (m/t)^n p(m, t)."""
    if n < 1:
        raise ValueError(f"moment order must be at least 1, got {n}")
    if dist.t == 0:
        raise ZeroSteps("rescaled moments are undefined at t = 0")
    v = dist.positions() / dist.t
    return float(np.sum(v ** n * dist.probabilities))
