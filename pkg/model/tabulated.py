"""
Tabulated conditional families loaded from CSV.

Expected header: ``theta,v,G,g,dG_dtheta`` over a full rectangular grid with
monotone axes.

Each row G(· | θᵢ) is read on its own support [v̲ᵢ, v̄ᵢ]. The edges sit where
G, extended linearly from the nearest cell, leaves 0 and reaches 1. The row
is then re-expressed in the normalized value
u = (v − v̲ᵢ)/(v̄ᵢ − v̲ᵢ). G is bilinear in (θ, u) and the edges are linear
in θ. A family whose rows are shifted and rescaled copies of one another
(the uniform multiplicative example among them) is reproduced exactly, on
or off the v nodes. The density and the θ-partial are the derivatives of
that one interpolant; the ``g`` and ``dG_dtheta`` columns are kept in
``tables`` for reference only.
"""

from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from numerics import PreconditionError
from observability.logger import log_info

from .families import ConditionalValueFamily

REQUIRED_COLUMNS = ("theta", "v", "G", "g", "dG_dtheta")

# G values within this distance of 0 or 1 count as outside the support
EDGE_TOL = 1e-12


def _support_edges(row: np.ndarray, values: np.ndarray):
    """
    Where G leaves 0 and reaches 1, each located inside its bracketing cell
    by extending G linearly from the neighbouring cell.
    """
    positive = np.flatnonzero(row > EDGE_TOL)
    if positive.size == 0:
        raise PreconditionError("tabulated row carries no probability mass")
    last = values.size - 1

    k = positive[0]
    lo = values[max(k - 1, 0)]
    if 0 < k < last:
        slope = (row[k + 1] - row[k]) / (values[k + 1] - values[k])
        if slope > 0:
            lo = np.clip(values[k] - row[k] / slope, values[k - 1], values[k])

    below = np.flatnonzero(row < 1.0 - EDGE_TOL)
    j = below[-1] if below.size else 0
    hi = values[min(j + 1, last)]
    if 0 < j < last:
        slope = (row[j] - row[j - 1]) / (values[j] - values[j - 1])
        if slope > 0:
            hi = values[j] + (1.0 - row[j]) / slope
            hi = np.clip(hi, values[j], values[j + 1])
    return lo, hi


class TabulatedFamily(ConditionalValueFamily):
    """Support-aligned bilinear interpolation of a tabulated G(v | θ)."""

    def __init__(self, frame: pd.DataFrame, name: str = "tabulated"):
        missing = [c for c in REQUIRED_COLUMNS if c not in frame.columns]
        if missing:
            raise PreconditionError(f"tabulated family is missing columns: {missing}")

        thetas = np.sort(frame["theta"].unique())
        values = np.sort(frame["v"].unique())
        if thetas.size < 2 or values.size < 2:
            raise PreconditionError("tabulated family needs at least a 2×2 grid")
        if len(frame) != thetas.size * values.size:
            raise PreconditionError("tabulated family must cover the full θ×v grid")

        ordered = frame.sort_values(["theta", "v"])
        shape = (thetas.size, values.size)
        tables = {
            col: ordered[col].to_numpy(dtype=float).reshape(shape)
            for col in ("G", "g", "dG_dtheta")
        }
        cdf_table = tables["G"]
        if np.any(cdf_table < -EDGE_TOL) or np.any(cdf_table > 1.0 + EDGE_TOL):
            raise PreconditionError("tabulated G must lie in [0, 1]")
        if np.any(np.diff(cdf_table, axis=1) < -EDGE_TOL):
            raise PreconditionError("tabulated G must be nondecreasing in v")

        edges = np.array([_support_edges(row, values) for row in cdf_table])
        lower, widths = edges[:, 0], edges[:, 1] - edges[:, 0]
        if np.any(widths <= 0):
            raise PreconditionError("tabulated rows need a support of positive width")

        # Every row resampled on one normalized grid; u-nodes are shared
        u_grid = np.linspace(0.0, 1.0, values.size)
        rows = np.empty((thetas.size, u_grid.size))
        for i, row in enumerate(cdf_table):
            u_nodes = (values - lower[i]) / widths[i]
            keep = (u_nodes > EDGE_TOL) & (u_nodes < 1.0 - EDGE_TOL)
            u_points = np.concatenate([[0.0], u_nodes[keep], [1.0]])
            inner = np.clip(row[keep], 0.0, 1.0)
            cdf_points = np.concatenate([[0.0], inner, [1.0]])
            rows[i] = np.interp(u_grid, u_points, cdf_points)

        self.theta_grid = thetas
        self.v_grid = values
        self.u_grid = u_grid
        self.tables = tables
        self._edge_lo = lower
        self._edge_width = widths
        self._rows = rows

        super().__init__(
            cdf=lambda theta, v: self._evaluate(theta, v)[0],
            pdf=lambda theta, v: self._evaluate(theta, v)[1],
            lower_support=lambda theta: self._edges(theta)[0],
            upper_support=lambda theta: np.add(*self._edges(theta)[:2]),
            global_lo=values[0],
            global_hi=values[-1],
            theta_partial=lambda theta, v: self._evaluate(theta, v)[2],
            extends=False,
            name=name,
        )

    def _cell(self, theta):
        thetas = self.theta_grid
        theta = np.clip(np.asarray(theta, dtype=float), thetas[0], thetas[-1])
        last = thetas.size - 2
        i = np.clip(np.searchsorted(thetas, theta, side="right") - 1, 0, last)
        d_theta = thetas[i + 1] - thetas[i]
        return i, d_theta, (theta - thetas[i]) / d_theta

    def _edges(self, theta):
        """(v̲(θ), width(θ), dv̲/dθ, dwidth/dθ), linear between θ nodes."""
        i, d_theta, s = self._cell(theta)
        lo_step = self._edge_lo[i + 1] - self._edge_lo[i]
        width_step = self._edge_width[i + 1] - self._edge_width[i]
        lo = self._edge_lo[i] + s * lo_step
        width = self._edge_width[i] + s * width_step
        return lo, width, lo_step / d_theta, width_step / d_theta

    def _evaluate(self, theta, v):
        """(G, g, ∂G/∂θ) at broadcast (θ, v) from the single interpolant."""
        u_grid, rows = self.u_grid, self._rows
        theta, v = np.broadcast_arrays(
            np.asarray(theta, dtype=float), np.asarray(v, dtype=float)
        )
        i, d_theta, s = self._cell(theta)
        lo, width, lo_slope, width_slope = self._edges(theta)

        u = (v - lo) / width
        inside = (u >= -EDGE_TOL) & (u <= 1.0 + EDGE_TOL)
        uc = np.clip(u, 0.0, 1.0)
        last = u_grid.size - 2
        k = np.clip(np.searchsorted(u_grid, uc, side="right") - 1, 0, last)
        d_u = u_grid[k + 1] - u_grid[k]
        r = (uc - u_grid[k]) / d_u

        slope_lo = (rows[i, k + 1] - rows[i, k]) / d_u
        slope_hi = (rows[i + 1, k + 1] - rows[i + 1, k]) / d_u
        h_lo = rows[i, k] + r * d_u * slope_lo
        h_hi = rows[i + 1, k] + r * d_u * slope_hi

        cdf = (1.0 - s) * h_lo + s * h_hi
        dcdf_du = (1.0 - s) * slope_lo + s * slope_hi
        du_dtheta = -(lo_slope + uc * width_slope) / width
        pdf = np.where(inside, dcdf_du / width, 0.0)
        partial = (h_hi - h_lo) / d_theta + dcdf_du * du_dtheta
        return cdf, pdf, np.where(inside, partial, 0.0)


def load_tabulated_family(path: Union[str, Path]) -> TabulatedFamily:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"tabulated family not found: {path}")
    frame = pd.read_csv(path)
    family = TabulatedFamily(frame, name=path.stem)
    log_info(
        f"📄 Loaded tabulated family {path.name}",
        theta_points=int(family.theta_grid.size),
        v_points=int(family.v_grid.size),
    )
    return family
