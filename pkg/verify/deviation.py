"""
Cross-report payoffs w(θ, θ′) on a signal grid.

Row i holds the expected payoff of a type-θᵢ buyer for every report θ′ⱼ,
computed from the mechanism's own q and t, so the diagonal is an
independent check of the envelope utilities.
"""

import contextvars
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from mechanism import BaseMechanism
from numerics import Grid, as_points
from numerics.grids import GridLike
from observability.logger import log_debug, log_info


@dataclass(frozen=True)
class DeviationMatrix:
    thetas: np.ndarray
    payoffs: np.ndarray  # payoffs[i, j] = w(θᵢ, θⱼ)

    def __post_init__(self):
        n = self.thetas.size
        if self.payoffs.shape != (n, n):
            raise ValueError(f"deviation matrix must be {n}×{n}")

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.payoffs).copy()

    def gains(self) -> np.ndarray:
        """w(θ, θ′) − w(θ, θ): the gain from each misreport."""
        return self.payoffs - self.diagonal[:, None]


def deviation_matrix(
    mech: BaseMechanism,
    theta_grid: GridLike,
    refine: int = 1,
    workers: int = 1,
) -> DeviationMatrix:
    """
    w(θ, θ′) for every pair on the grid; ``refine`` inserts extra report and
    type points inside every cell, ``workers`` spreads rows over threads.
    """
    if isinstance(theta_grid, Grid):
        thetas = theta_grid.refine(refine).points
    else:
        thetas = as_points(theta_grid)
        if refine > 1 and thetas.size > 1:
            thetas = Grid(thetas).refine(refine).points

    def row(i: int) -> np.ndarray:
        values = mech.interim_payoff(np.full(thetas.shape, thetas[i]), thetas)
        log_debug(f"[Deviation] row {i + 1}/{thetas.size}")
        return np.asarray(values, dtype=float)

    if workers > 1 and thetas.size > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(contextvars.copy_context().run, row, i)
                for i in range(thetas.size)
            ]
            rows = [f.result() for f in futures]
    else:
        rows = [row(i) for i in range(thetas.size)]

    log_info(
        f"🔁 [Deviation] {thetas.size}×{thetas.size} payoffs computed",
        workers=workers,
    )
    return DeviationMatrix(thetas.copy(), np.vstack(rows))
