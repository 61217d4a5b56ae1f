"""Exception types shared across the package."""


class TriwalkError(Exception):
    """Base class for all triwalk errors."""


class ParameterOutOfRange(TriwalkError):
    """Coin parameter outside the admissible interval of its family."""


class BasisMismatch(TriwalkError):
    """Coin state is already expressed in the requested basis."""


class NormalizationError(TriwalkError):
    """State vector is not normalized within tolerance."""


class OutsideSupport(TriwalkError):
    """Velocity lies outside the open support of the limit density."""


class NegativeRadicand(TriwalkError):
    """Square-root argument more negative than the roundoff clamping window."""


class QuadratureFailure(TriwalkError):
    """Integration budget exhausted before the tolerance was met."""


class StepBudgetExceeded(TriwalkError):
    """Requested evolution is longer than the configured step budget."""


class ZeroSteps(TriwalkError):
    """Rescaled moment requested for a zero-step walk."""


class DegenerateNormalization(TriwalkError):
    """Bloch eigenvector normalization factor vanishes at this quasi-momentum."""


class OracleRegimeExceeded(TriwalkError):
    """Amplitude integral requested beyond the oracle step budget."""


class ConfigError(TriwalkError):
    """Invalid run configuration."""
