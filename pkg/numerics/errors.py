"""
Exception hierarchy for the screening solver.

Diagnostics (FOSD, regularity, incentive checks) report violations as data.
Exceptions are reserved for inputs a computation cannot proceed with.
"""

from typing import Any, Optional


class ScreeningError(Exception):
    """Base class for every error raised by the solver."""


class EvaluationError(ScreeningError):
    """A function returned a non-finite value during a numerical kernel."""

    def __init__(self, message: str, abscissa: Optional[float] = None):
        super().__init__(message)
        self.abscissa = abscissa


class BracketError(ScreeningError):
    """The root bracket does not contain a sign change."""


class UndefinedDensityError(ScreeningError):
    """A density vanished where the caller needed to divide by it."""

    def __init__(
        self, message: str, theta: Optional[float] = None, v: Optional[float] = None
    ):
        super().__init__(message)
        self.theta = theta
        self.v = v


class ExcludedPointError(ScreeningError):
    """The requested quantity is undefined at an excluded (φ ≤ 0) point."""


class DomainError(ScreeningError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class PreconditionError(ScreeningError, ValueError):
    """A documented precondition of the operation does not hold."""


class UnsupportedModelError(ScreeningError):
    """The operation needs a model family the caller did not supply."""


class AssumptionViolationError(ScreeningError):
    """A regularity assumption the solver relies on failed its diagnostic."""

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report
