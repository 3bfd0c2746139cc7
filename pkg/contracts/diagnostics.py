"""
Diagnostics on the implementation side: uniqueness of the tariff split and
monotonicity of the marginal price of quantity.
"""

import numpy as np

from mechanism import DirectMechanism
from model.diagnostics import DiagnosticReport, build_report
from numerics import as_points
from numerics.grids import DEFAULT_MONOTONE_TOL, GridLike

UNIQUENESS_TOL = 1e-9


def uniqueness_condition(
    mech: DirectMechanism, theta: float, tol: float = UNIQUENESS_TOL
) -> bool:
    """φ(θ, v̲(θ)) = 0: the tariff split is unique at this type."""
    floor = mech.family.lower_support(theta)
    return bool(abs(float(mech.phi(theta, floor))) <= tol)


def marginal_price_monotonicity(
    mech: DirectMechanism,
    theta_grid: GridLike,
    v_points: int = 51,
    tol: float = DEFAULT_MONOTONE_TOL,
) -> DiagnosticReport:
    """dt/dq = c·v/φ(θ, v) weakly decreasing in v on each type's served support."""
    thetas = as_points(theta_grid)
    lo = mech.family.lower_support(thetas)
    hi = mech.family.upper_support(thetas)
    frac = np.linspace(0.0, 1.0, v_points)
    values = lo[:, None] + (hi - lo)[:, None] * frac[None, :]
    phi = mech.phi(thetas[:, None], values)
    safe = np.where(phi > 0, phi, 1.0)
    prices = np.where(phi > 0, mech.cost * values / safe, np.nan)

    steps = np.diff(prices, axis=1)
    records = [
        {
            "theta": float(thetas[i]),
            "v": float(values[i, j]),
            "v_next": float(values[i, j + 1]),
            "magnitude": float(steps[i, j]),
        }
        for i, j in np.argwhere(steps > tol)
    ]
    checked = int(np.isfinite(prices).sum())
    return build_report("marginal_price_monotone", records, checked, tol)
