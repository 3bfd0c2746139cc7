"""
Discretization grids and monotonicity helpers.
"""

from dataclasses import dataclass, field
from typing import List, Literal, Sequence, Tuple, Union

import numpy as np

from .errors import PreconditionError

Direction = Literal["increasing", "decreasing"]
DEFAULT_MONOTONE_TOL = 1e-9


@dataclass(frozen=True)
class Grid:
    """Strictly increasing points inside [lo, hi]; at least two of them."""

    points: np.ndarray
    bounds: Tuple[float, float] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).ravel()
        if pts.size < 2:
            raise PreconditionError(f"grid needs at least 2 points, got {pts.size}")
        if np.any(np.diff(pts) <= 0):
            raise PreconditionError("grid points must be strictly increasing")

        bounds = self.bounds if self.bounds is not None else (pts[0], pts[-1])
        lo, hi = float(bounds[0]), float(bounds[1])
        if not lo < hi:
            raise PreconditionError(f"grid bounds must satisfy lo < hi: {bounds}")
        if pts[0] < lo or pts[-1] > hi:
            raise PreconditionError("grid points fall outside the bounds")

        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "bounds", (lo, hi))

    @classmethod
    def linspace(cls, lo: float, hi: float, n: int) -> "Grid":
        return cls(np.linspace(lo, hi, n), (lo, hi))

    def refine(self, factor: int) -> "Grid":
        """Insert ``factor - 1`` equally spaced points inside every cell."""
        if factor <= 1:
            return self
        cells = [
            np.linspace(a, b, factor, endpoint=False)
            for a, b in zip(self.points[:-1], self.points[1:])
        ]
        return Grid(np.concatenate(cells + [self.points[-1:]]), self.bounds)

    def __len__(self) -> int:
        return int(self.points.size)

    def __iter__(self):
        return iter(self.points.tolist())

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.points, dtype=dtype)


GridLike = Union[Grid, Sequence[float], np.ndarray]


def as_points(grid: GridLike) -> np.ndarray:
    """Points of a Grid, or a plain sequence used as an ad-hoc grid."""
    if isinstance(grid, Grid):
        return grid.points
    return np.atleast_1d(np.asarray(grid, dtype=float))


def monotone_violations(
    values, direction: Direction = "increasing", tol: float = DEFAULT_MONOTONE_TOL
) -> List[Tuple[int, float]]:
    """(index, magnitude) for every step that breaks the direction by more than tol."""
    vals = np.asarray(values, dtype=float).ravel()
    if vals.size == 0:
        raise PreconditionError("monotonicity check needs at least one value")
    steps = np.diff(vals)
    if direction == "decreasing":
        steps = -steps
    elif direction != "increasing":
        raise PreconditionError(f"unknown direction: {direction}")
    bad = np.flatnonzero(steps < -tol)
    return [(int(i), float(-steps[i])) for i in bad]


def is_monotone(
    values, direction: Direction = "increasing", tol: float = DEFAULT_MONOTONE_TOL
) -> bool:
    return not monotone_violations(values, direction, tol)
