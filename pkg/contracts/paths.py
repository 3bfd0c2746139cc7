"""
Equilibrium paths: q*(θ, v) and t(θ, v) sampled along each type's own value
support, the raw material of every price schedule.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from mechanism import DirectMechanism
from numerics import Grid, as_points
from numerics.grids import GridLike

DEFAULT_THETA_POINTS = 101
DEFAULT_V_POINTS = 101


@dataclass(frozen=True)
class EquilibriumPaths:
    thetas: np.ndarray  # (Θ,)
    values: np.ndarray  # (Θ, n), v̲(θ) … v̄(θ) per row
    quantities: np.ndarray
    transfers: np.ndarray
    tail_prices: np.ndarray  # (Θ,) dt/dq at v̄(θ); +inf for excluded rows


def default_theta_grid(mech: DirectMechanism, points: int = DEFAULT_THETA_POINTS):
    return Grid.linspace(mech.signal.theta_lo, mech.signal.theta_hi, points)


def sample_paths(
    mech: DirectMechanism,
    theta_grid: Optional[GridLike] = None,
    v_points: int = DEFAULT_V_POINTS,
) -> EquilibriumPaths:
    thetas = as_points(
        theta_grid if theta_grid is not None else default_theta_grid(mech)
    )
    lo = mech.family.lower_support(thetas)
    hi = mech.family.upper_support(thetas)
    frac = np.linspace(0.0, 1.0, max(int(v_points), 1))
    values = lo[:, None] + (hi - lo)[:, None] * frac[None, :]
    T = np.broadcast_to(thetas[:, None], values.shape)

    quantities = mech.quantity(T, values)
    transfers = mech.transfer(T, values)

    top_phi = mech.phi(thetas, hi)
    safe = np.where(top_phi > 0, top_phi, 1.0)
    tail = np.where(top_phi > 0, mech.cost * hi / safe, np.inf)
    return EquilibriumPaths(thetas, values, quantities, transfers, tail)


def unit_prices(mech: DirectMechanism, thetas) -> np.ndarray:
    """θc/φ_F(θ) for multiplicative values, the marginal price at v̄(θ) otherwise."""
    thetas = np.asarray(thetas, dtype=float)
    if mech.family.is_multiplicative:
        return mech.unit_price(thetas)
    hi = mech.family.upper_support(thetas)
    phi = mech.phi(thetas, hi)
    safe = np.where(phi > 0, phi, 1.0)
    return np.where(phi > 0, mech.cost * hi / safe, np.inf)
