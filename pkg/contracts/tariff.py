"""
Two-part tariff: an upfront fee t₀(θ) plus a per-type usage schedule whose
minimum payment is zero.

Split: t₀(θ) = −u(θ, v̲), t₁(θ, v) = t(θ, v) + u(θ, v̲), with v̲ the global
lower value. When φ(θ, v̲(θ)) > 0 the split is not unique and this is the
selection that maximizes the upfront fee; the schedule then charges a
positive amount already at q*(θ, v̲(θ)).
"""

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
import pandas as pd

from mechanism import BaseMechanism, DirectMechanism
from numerics.grids import GridLike
from observability.logger import log_info

from .paths import DEFAULT_V_POINTS, sample_paths, unit_prices
from .schedule import PriceSchedule


@dataclass(frozen=True)
class TwoPartTariff:
    upfront: Callable  # θ → t₀(θ)
    period_payment: Callable  # (θ, v) → t₁(θ, v)
    thetas: np.ndarray
    schedules: Tuple[PriceSchedule, ...]
    source: BaseMechanism

    def total_payment(self, theta, v):
        return self.upfront(theta) + self.period_payment(theta, v)

    def schedule_payment(self, index: int, v):
        """t₀ plus p_θ(q*(θ, v)) for the tabulated type ``thetas[index]``."""
        theta = self.thetas[index]
        q = self.source.quantity(theta, v)
        return self.upfront(theta) + self.schedules[index].payment(q)

    @property
    def upfront_values(self) -> np.ndarray:
        return np.asarray(self.upfront(self.thetas), dtype=float)

    def seller_profit(self) -> float:
        mech, c = self.source, self.source.cost

        def per_theta(th):
            tb = th[..., None]
            return mech.expect_v(
                th,
                lambda v: self.total_payment(tb, v) - c * mech.quantity(tb, v),
                mech.kinks(th),
            )

        return mech.expect_theta(per_theta)

    def frame(self) -> pd.DataFrame:
        """theta, t0, unit_price."""
        return pd.DataFrame(
            {
                "theta": self.thetas,
                "t0": self.upfront_values,
                "unit_price": unit_prices(self.source, self.thetas),
            }
        )


def build_two_part_tariff(
    mech: DirectMechanism,
    theta_grid: Optional[GridLike] = None,
    v_points: int = DEFAULT_V_POINTS,
) -> TwoPartTariff:
    paths = sample_paths(mech, theta_grid, v_points)
    upfront = lambda theta: -mech.base_utility(theta)  # noqa: E731

    fees = upfront(paths.thetas)
    schedules = tuple(
        PriceSchedule.from_path(
            paths.quantities[i],
            paths.transfers[i] - fees[i],
            zero_payment=0.0,
            tail_price=float(paths.tail_prices[i]),
            values=paths.values[i],
        )
        for i in range(paths.thetas.size)
    )

    def period_payment(theta, v):
        return mech.transfer(theta, v) + mech.base_utility(theta)

    log_info(
        "🧾 [Contracts] two-part tariff built",
        types=int(paths.thetas.size),
        max_fee=float(np.max(fees)),
    )
    return TwoPartTariff(upfront, period_payment, paths.thetas, schedules, mech)
