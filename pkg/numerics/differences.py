"""Central finite differences."""

import math
from typing import Callable, Optional

import numpy as np

from .errors import EvaluationError, PreconditionError


def default_step(x: float) -> float:
    return 1e-5 * max(1.0, abs(x))


def derivative(
    f: Callable[[float], float], x: float, h: Optional[float] = None
) -> float:
    """(f(x + h) - f(x - h)) / 2h with h = 1e-5·max(1, |x|) by default."""
    h = default_step(x) if h is None else h
    if h <= 0:
        raise PreconditionError(f"finite-difference step must be positive: {h}")

    upper, lower = float(f(x + h)), float(f(x - h))
    for point, value in ((x + h, upper), (x - h, lower)):
        if not math.isfinite(value):
            raise EvaluationError(
                f"function is not finite at x={point:.12g}", abscissa=point
            )
    return (upper - lower) / (2.0 * h)


def derivative_many(f: Callable, x, h=None) -> np.ndarray:
    """Vectorized central difference; f maps arrays to arrays of the same shape."""
    x = np.asarray(x, dtype=float)
    h = 1e-5 * np.maximum(1.0, np.abs(x)) if h is None else np.asarray(h, dtype=float)
    if np.any(h <= 0):
        raise PreconditionError("finite-difference step must be positive")

    upper = np.asarray(f(x + h), dtype=float)
    lower = np.asarray(f(x - h), dtype=float)
    bad = ~(np.isfinite(upper) & np.isfinite(lower))
    if bad.any():
        point = float(np.broadcast_to(x, bad.shape)[bad].flat[0])
        raise EvaluationError(
            f"function is not finite near x={point:.12g}", abscissa=point
        )
    return (upper - lower) / (2.0 * h)
