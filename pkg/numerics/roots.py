"""
Bracketed scalar root finding.

Brent's method (bisection safeguarded by secant / inverse-quadratic steps)
from scipy; the bracket is validated up front so the bisection fallback
always has a sign change to work with.
"""

import math
from typing import Callable

from scipy.optimize import brentq

from .errors import BracketError, EvaluationError, PreconditionError

DEFAULT_ROOT_TOL = 1e-10


def _finite(f: Callable[[float], float]) -> Callable[[float], float]:
    def wrapped(x: float) -> float:
        y = float(f(x))
        if not math.isfinite(y):
            raise EvaluationError(f"function is not finite at x={x:.12g}", abscissa=x)
        return y

    return wrapped


def find_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = DEFAULT_ROOT_TOL,
    max_iter: int = 200,
) -> float:
    """Return x in [lo, hi] with f(x) ≈ 0 given f(lo)·f(hi) ≤ 0."""
    if tol <= 0:
        raise PreconditionError(f"root tolerance must be positive: {tol}")
    if hi < lo:
        raise PreconditionError(f"root bracket reversed: [{lo}, {hi}]")

    g = _finite(f)
    f_lo, f_hi = g(lo), g(hi)
    if f_lo == 0.0:
        return float(lo)
    if f_hi == 0.0:
        return float(hi)
    if f_lo * f_hi > 0:
        raise BracketError(
            f"no sign change on [{lo:.12g}, {hi:.12g}]: f={f_lo:.6g}, {f_hi:.6g}"
        )

    root = brentq(g, lo, hi, xtol=tol, maxiter=max_iter)
    return float(root)
