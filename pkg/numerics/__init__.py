"""
Numerical kernels shared by every solver stage: Gauss-Legendre quadrature,
bracketed root finding, central differences and monotone-grid helpers.
"""

from .differences import derivative, derivative_many
from .errors import (
    AssumptionViolationError,
    BracketError,
    DomainError,
    EvaluationError,
    ExcludedPointError,
    PreconditionError,
    ScreeningError,
    UndefinedDensityError,
    UnsupportedModelError,
)
from .grids import Grid, as_points, is_monotone
from .quadrature import QuadratureRule, default_rule, integrate, integrate_many
from .roots import find_root

__all__ = [
    "AssumptionViolationError",
    "BracketError",
    "DomainError",
    "EvaluationError",
    "ExcludedPointError",
    "Grid",
    "PreconditionError",
    "QuadratureRule",
    "ScreeningError",
    "UndefinedDensityError",
    "UnsupportedModelError",
    "as_points",
    "default_rule",
    "derivative",
    "derivative_many",
    "find_root",
    "integrate",
    "integrate_many",
    "is_monotone",
]
