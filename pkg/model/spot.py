"""
Closed-form best response on a posted-price spot market: max_q v·q^α − p·q.
"""

from typing import Tuple

import numpy as np

from numerics import PreconditionError


def _check(v, p, alpha):
    if np.any(np.asarray(v) < 0):
        raise PreconditionError("spot values must be non-negative")
    if np.any(np.asarray(p) <= 0):
        raise PreconditionError("spot price must be positive")
    if not 0 < alpha < 1:
        raise PreconditionError(f"alpha must lie in (0, 1): {alpha}")


def spot_quantity(v, p, alpha: float):
    """(α·v / p)^{1/(1−α)}."""
    _check(v, p, alpha)
    return (alpha * np.asarray(v, dtype=float) / p) ** (1.0 / (1.0 - alpha))


def spot_payoff(v, p, alpha: float):
    """(1−α)·(α/p)^{α/(1−α)}·v^{1/(1−α)}; for α = ½ this is v²/(4p)."""
    _check(v, p, alpha)
    ratio = alpha / (1.0 - alpha)
    return (
        (1.0 - alpha)
        * (alpha / p) ** ratio
        * np.asarray(v, dtype=float) ** (1.0 / (1.0 - alpha))
    )


def spot_best_response(v: float, p: float, alpha: float) -> Tuple[float, float]:
    """Quantity bought and net payoff of a buyer with value v facing unit price p."""
    return float(spot_quantity(v, p, alpha)), float(spot_payoff(v, p, alpha))
