"""
Composite Gauss-Legendre quadrature.

Nodes and weights come from numpy's Legendre module; a rule of order n is
exact for polynomials up to degree 2n - 1 on every panel. Integrands are
evaluated on whole node arrays at once, so callers pass numpy-vectorized
functions and batch many intervals into a single call.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import EvaluationError, PreconditionError, ScreeningError

DEFAULT_ORDER = 64


@lru_cache(maxsize=16)
def _legendre_nodes(order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre rule of a fixed order, composed over equal panels."""

    order: int = DEFAULT_ORDER
    panels: int = 1
    nodes: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.order < 1:
            raise PreconditionError(f"quadrature order must be positive: {self.order}")
        if self.panels < 1:
            raise PreconditionError(f"panel count must be positive: {self.panels}")
        nodes, weights = _legendre_nodes(self.order)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def degree(self) -> int:
        """Highest polynomial degree integrated exactly on [-1, 1]."""
        return 2 * self.order - 1

    @property
    def size(self) -> int:
        return self.order * self.panels

    def abscissae(self, lo, hi) -> Tuple[np.ndarray, np.ndarray]:
        """
        Map the composite rule onto [lo, hi].

        lo and hi broadcast against each other; the returned nodes and
        weights carry one extra trailing axis of length ``size``.
        """
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        local = (self.nodes + 1.0) / 2.0
        offsets = np.arange(self.panels, dtype=float)[:, None]
        unit = ((offsets + local[None, :]) / self.panels).ravel()
        unit_weights = np.tile(self.weights / (2.0 * self.panels), self.panels)

        width = (hi - lo)[..., None]
        x = lo[..., None] + width * unit
        w = width * unit_weights
        return x, w


def default_rule() -> QuadratureRule:
    return QuadratureRule()


def _evaluate(f: Callable, x: np.ndarray) -> np.ndarray:
    try:
        y = np.asarray(f(x), dtype=float)
    except ScreeningError:
        raise
    except (TypeError, ValueError):
        # scalar-only integrand
        y = np.asarray(np.vectorize(f, otypes=[float])(x), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)

    bad = ~np.isfinite(y)
    if bad.any():
        abscissa = float(x[bad].flat[0])
        raise EvaluationError(
            f"integrand is not finite at x={abscissa:.12g}", abscissa=abscissa
        )
    return y


def integrate(
    f: Callable, lo: float, hi: float, rule: Optional[QuadratureRule] = None
) -> float:
    """Approximate ∫_lo^hi f(x) dx; an empty interval integrates to zero."""
    if hi < lo:
        raise PreconditionError(f"integration bounds reversed: [{lo}, {hi}]")
    if hi == lo:
        return 0.0
    rule = rule or default_rule()
    x, w = rule.abscissae(lo, hi)
    return float(np.dot(_evaluate(f, x), w))


def integrate_many(
    f: Callable,
    lo,
    hi,
    rule: Optional[QuadratureRule] = None,
    breakpoints=None,
) -> np.ndarray:
    """
    Integrate f over a batch of intervals in one vectorized pass.

    ``f`` receives node arrays of shape ``batch + (n,)`` and must return an
    array of the same shape. ``breakpoints`` carry a trailing axis of length k
    broadcastable to ``batch + (k,)`` (NaN for "none"); they split each
    interval at kinks of the integrand so that every piece stays smooth.
    """
    rule = rule or default_rule()
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    lo, hi = np.broadcast_arrays(lo, hi)
    if np.any(hi < lo):
        raise PreconditionError("integration bounds reversed in batch")

    if breakpoints is None:
        edges = np.stack([lo, hi], axis=-1)
    else:
        bp = np.asarray(breakpoints, dtype=float)
        if bp.ndim == 0:
            bp = bp[None]
        bp = np.broadcast_to(bp, lo.shape + bp.shape[-1:])
        bp = np.where(np.isnan(bp), hi[..., None], bp)
        bp = np.clip(bp, lo[..., None], hi[..., None])
        edges = np.concatenate([lo[..., None], np.sort(bp, axis=-1), hi[..., None]], -1)

    xs, ws = [], []
    for j in range(edges.shape[-1] - 1):
        x, w = rule.abscissae(edges[..., j], edges[..., j + 1])
        xs.append(x)
        ws.append(w)
    x = np.concatenate(xs, axis=-1)
    w = np.concatenate(ws, axis=-1)
    return np.sum(_evaluate(f, x) * w, axis=-1)
