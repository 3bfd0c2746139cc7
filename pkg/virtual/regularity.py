"""
Regularity diagnostics: monotonicity of the (positive part of the) dynamic
virtual value and the monotone hazard rate of the signal distribution.
"""

from typing import Any, Dict, List

import numpy as np

from model.diagnostics import DiagnosticReport, build_report
from model.distributions import SignalDistribution
from numerics import as_points
from numerics.grids import DEFAULT_MONOTONE_TOL, GridLike, monotone_violations

from .field import VirtualValueField


def _axis_violations(table, thetas, values, axis: int, tol: float):
    records: List[Dict[str, Any]] = []
    # NaN marks points outside the evaluable region; their steps never count
    steps = np.diff(table, axis=axis)
    bad = np.argwhere(steps < -tol)
    for i, j in bad:
        if axis == 0:
            coords = {"theta": thetas[i], "theta_next": thetas[i + 1], "v": values[j]}
        else:
            coords = {"theta": thetas[i], "v": values[j], "v_next": values[j + 1]}
        records.append(
            {
                "direction": "theta" if axis == 0 else "v",
                **{k: float(x) for k, x in coords.items()},
                "magnitude": float(-steps[i, j]),
            }
        )
    return records


def regularity_check(
    field: VirtualValueField,
    theta_grid: GridLike,
    v_grid: GridLike,
    tol: float = DEFAULT_MONOTONE_TOL,
) -> DiagnosticReport:
    """
    φ weakly increasing in θ and in v wherever positive.

    Points where φ cannot be evaluated (off-support for families without an
    extension) are skipped.
    """
    thetas = as_points(theta_grid)
    values = as_points(v_grid)
    T, V = np.meshgrid(thetas, values, indexing="ij")

    mask = np.asarray(field.evaluable(T, V), dtype=bool)
    table = np.full(T.shape, np.nan)
    if mask.any():
        table[mask] = field.phi(T[mask], V[mask])
    table = np.where(np.isnan(table), np.nan, np.maximum(table, 0.0))

    records = _axis_violations(table, thetas, values, 0, tol)
    records += _axis_violations(table, thetas, values, 1, tol)
    checked = int(mask.sum())
    return build_report("regularity", records, checked, tol)


def mhr_check(
    signal: SignalDistribution,
    theta_grid: GridLike,
    tol: float = DEFAULT_MONOTONE_TOL,
) -> DiagnosticReport:
    """(1 − F)/f weakly decreasing on the grid."""
    thetas = as_points(theta_grid)
    hazard = signal.hazard(thetas)
    records = [
        {
            "theta": float(thetas[i]),
            "theta_next": float(thetas[i + 1]),
            "magnitude": magnitude,
        }
        for i, magnitude in monotone_violations(hazard, "decreasing", tol)
    ]
    return build_report("mhr", records, int(thetas.size), tol)
