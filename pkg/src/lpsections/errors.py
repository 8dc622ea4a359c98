"""Exception hierarchy shared by all modules."""


class LpSectionsError(Exception):
    """Base class for library errors."""


class DomainError(LpSectionsError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ValidationError(DomainError):
    """Malformed user input (directions, configs, ranges)."""


class RegimeError(DomainError):
    """Evaluator used outside the exponent regime it supports."""


class QuadratureError(LpSectionsError, ArithmeticError):
    """Quadrature failed to reach the requested tolerance.

    The achieved error bound is kept on the exception so callers can decide
    whether a degraded value is still usable.
    """

    def __init__(self, message, error_bound=float("nan"), value=float("nan")):
        super().__init__(message)
        self.error_bound = error_bound
        self.value = value


class ResolutionError(LpSectionsError, ArithmeticError):
    """A sign-change scan was too coarse to resolve a feature."""


class SolverError(LpSectionsError, ArithmeticError):
    """Root finder could not bracket or converge."""
