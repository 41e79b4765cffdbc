"""Exception types raised at module boundaries."""


class PpbnbError(Exception):
    """Base class for all package errors."""


class DimensionError(PpbnbError, ValueError):
    """Vector dimensions are incompatible or below the required minimum."""


class DegenerateBoxError(PpbnbError, ValueError):
    """Operation requires a box with positive diameter."""


class DegenerateRangeError(PpbnbError, ValueError):
    """Normalization range nadir - ideal collapsed to zero."""


class DomainError(PpbnbError, ValueError):
    """Point lies outside the problem domain."""


class EvaluationError(PpbnbError, RuntimeError):
    """Objective or constraint evaluation produced a non-finite value."""


class UnknownProblemError(PpbnbError, KeyError):
    """Requested problem name is not registered."""


class ConfigError(PpbnbError, ValueError):
    """Invalid solver or run configuration."""


class BoxBudgetError(PpbnbError, RuntimeError):
    """Live box count exceeded the configured memory cap."""


class EmptySetError(PpbnbError, ValueError):
    """Set-distance operation received an empty set."""
