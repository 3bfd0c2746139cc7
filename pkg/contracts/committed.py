"""
Committed-spend contract: one schedule per type with a mandatory minimum
spend B(θ) = t(θ, v̲(θ)), the largest budget consistent with the optimal
mechanism. B(θ̲) is set to 0.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
import pandas as pd

from mechanism import BaseMechanism, DirectMechanism
from numerics import as_points
from numerics.grids import GridLike
from observability.logger import log_info, log_warning

from .paths import DEFAULT_V_POINTS, sample_paths, unit_prices
from .schedule import PriceSchedule

BOTTOM_SLACK = 1e-12


@dataclass(frozen=True)
class CommittedSpendContract:
    budget: Callable  # θ → B(θ)
    payment: Callable  # (θ, v) → t(θ, v)
    thetas: np.ndarray
    schedules: Tuple[PriceSchedule, ...]
    source: BaseMechanism

    def quantity(self, theta, v):
        return self.source.quantity(theta, v)

    def schedule_payment(self, index: int, v):
        q = self.source.quantity(self.thetas[index], v)
        return self.schedules[index].payment(q)

    @property
    def budget_values(self) -> np.ndarray:
        return np.asarray(self.budget(self.thetas), dtype=float)

    def seller_profit(self) -> float:
        mech, c = self.source, self.source.cost

        def per_theta(th):
            tb = th[..., None]
            return mech.expect_v(
                th,
                lambda v: self.payment(tb, v) - c * mech.quantity(tb, v),
                mech.kinks(th),
            )

        return mech.expect_theta(per_theta)

    def frame(self) -> pd.DataFrame:
        """theta, B, unit_price."""
        return pd.DataFrame(
            {
                "theta": self.thetas,
                "B": self.budget_values,
                "unit_price": unit_prices(self.source, self.thetas),
            }
        )


def build_committed_spend(
    mech: DirectMechanism,
    theta_grid: Optional[GridLike] = None,
    v_points: int = DEFAULT_V_POINTS,
) -> CommittedSpendContract:
    paths = sample_paths(mech, theta_grid, v_points)
    theta_lo = mech.signal.theta_lo

    def budget(theta):
        theta = np.asarray(theta, dtype=float)
        floor = mech.transfer(theta, mech.family.lower_support(theta))
        return np.where(theta <= theta_lo + BOTTOM_SLACK, 0.0, floor)

    budgets = budget(paths.thetas)
    schedules = tuple(
        PriceSchedule.from_path(
            paths.quantities[i],
            paths.transfers[i],
            zero_payment=float(budgets[i]),
            tail_price=float(paths.tail_prices[i]),
            values=paths.values[i],
        )
        for i in range(paths.thetas.size)
    )

    log_info(
        "🧾 [Contracts] committed spend built",
        types=int(paths.thetas.size),
        max_budget=float(np.max(budgets)),
    )
    return CommittedSpendContract(budget, mech.transfer, paths.thetas, schedules, mech)


# =============================================================================
# Diagnostics on committed-spend contracts
# =============================================================================


def guaranteed_positive_quantity(
    contract: CommittedSpendContract,
    theta_grid: Optional[GridLike] = None,
    tol: float = 0.0,
) -> bool:
    """
    Every type above θ̲ has a positive minimum spend that buys a positive
    quantity.
    """
    mech = contract.source
    thetas = as_points(theta_grid) if theta_grid is not None else contract.thetas
    above = thetas[thetas > mech.signal.theta_lo + BOTTOM_SLACK]
    if above.size == 0:
        return True

    floor = mech.family.lower_support(above)
    q_min = mech.quantity(above, floor)
    budgets = contract.budget(above)
    bad = (q_min <= tol) | (budgets <= tol)
    if bad.any():
        log_warning(
            "⚠️ [Contracts] minimum spend buys nothing",
            first_theta=float(above[bad][0]),
            count=int(bad.sum()),
        )
    return not bool(bad.any())


def knife_edge_average_price(contract: CommittedSpendContract, theta: float) -> float:
    """Average price t/q at the type's lowest value, the only linear price possible."""
    mech = contract.source
    floor = float(mech.family.lower_support(theta))
    q = float(mech.quantity(theta, floor))
    if q <= 0:
        return float("inf")
    return float(contract.payment(theta, floor)) / q


def linear_pricing_diagnostic(
    contract: CommittedSpendContract,
    theta: float,
    v_grid: GridLike,
    tol: float = 1e-9,
) -> bool:
    """True iff the average price t(θ, v)/q(θ, v) is constant across the grid."""
    values = as_points(v_grid)
    q = np.asarray(contract.quantity(theta, values), dtype=float)
    served = q > 0
    if served.sum() <= 1:
        return True
    payment = np.asarray(contract.payment(theta, values), dtype=float)
    average = payment[served] / q[served]
    spread = float(average.max() - average.min())
    return spread <= tol * max(1.0, float(np.abs(average).mean()))
