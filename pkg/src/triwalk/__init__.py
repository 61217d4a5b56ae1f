"""Three-state quantum walks on the integer line.

Exact finite-time simulation of two one-parameter coin families together
with their weak-limit distributions: closed-form group-velocity densities,
geometric localization profiles, moment formulas, and an independent
momentum-space oracle that cross-validates all of it.
"""

from .coins import (Basis, CoinSpec, CoinState, EigenBasis, Family,
                    build_coin, eigenbasis, to_eigen, to_standard)
from .errors import (BasisMismatch, ConfigError, DegenerateNormalization,
                     NegativeRadicand, NormalizationError,
                     OracleRegimeExceeded, OutsideSupport,
                     ParameterOutOfRange, QuadratureFailure,
                     StepBudgetExceeded, TriwalkError, ZeroSteps)
from .phi_family import (PhiAsymptotics, PhiDensityTerms, density_terms,
                         peak_velocity)
from .quadrature import (EndpointSingularity, QuadratureSpec, integrate,
                         integrate_periodic)
from .rho_family import RhoAsymptotics
from .spectral import (BlochSystem, amplitude_integral, bloch_eigensystem,
                       dispersion, group_velocity, limit_moment, overlaps,
                       stationary_amplitude, velocity_split_point)
from .walk import (PositionDistribution, WalkState, distribution,
                   empirical_moment, evolve, initial_state, step)

__version__ = "0.1.0"

__all__ = [
    "Basis", "BasisMismatch", "BlochSystem", "CoinSpec", "CoinState",
    "ConfigError", "DegenerateNormalization", "EigenBasis",
    "EndpointSingularity", "Family", "NegativeRadicand",
    "NormalizationError", "OracleRegimeExceeded", "OutsideSupport",
    "ParameterOutOfRange", "PhiAsymptotics", "PhiDensityTerms",
    "PositionDistribution", "QuadratureFailure", "QuadratureSpec",
    "RhoAsymptotics", "StepBudgetExceeded", "TriwalkError", "WalkState",
    "ZeroSteps", "amplitude_integral", "bloch_eigensystem", "build_coin",
    "density_terms", "dispersion", "distribution", "eigenbasis",
    "empirical_moment", "evolve", "group_velocity", "initial_state",
    "integrate", "integrate_periodic", "limit_moment", "overlaps",
    "peak_velocity", "stationary_amplitude", "step", "to_eigen",
    "to_standard", "velocity_split_point",
]
