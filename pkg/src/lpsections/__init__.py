"""Hyperplane sections of l_p^n balls and Ball-type integral inequalities."""

from .errors import (
    DomainError,
    LpSectionsError,
    QuadratureError,
    RegimeError,
    ResolutionError,
    SolverError,
    ValidationError,
)
from .gamma_p import DEFAULT_SPEC, PExponent, QuadratureSpec, gamma_p

__all__ = [
    "DEFAULT_SPEC",
    "DomainError",
    "LpSectionsError",
    "PExponent",
    "QuadratureError",
    "QuadratureSpec",
    "RegimeError",
    "ResolutionError",
    "SolverError",
    "ValidationError",
    "gamma_p",
]

__version__ = "0.1.0"
