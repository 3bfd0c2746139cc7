"""
Spot-market-constrained contracting (multiplicative values).

A period-1 spot market at price pˢ > c raises every type's outside option to
uˢ(θ) = E_v[max_q v·q^α − pˢ·q | θ]. Above the cutoff θ*, solving
φ_F(θ*)/θ* = c/pˢ, the optimal mechanism survives unchanged up to a flat
discount t_c = uˢ(θ*) − U(θ*). Below θ* the implemented rule replicates the
spot market, a profitable lower bound rather than the exact optimum.
"""

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np
import pandas as pd

from mechanism import BaseMechanism, DirectMechanism
from model.spot import spot_payoff, spot_quantity
from numerics import (
    AssumptionViolationError,
    ExcludedPointError,
    Grid,
    PreconditionError,
    UnsupportedModelError,
    as_points,
    find_root,
    integrate_many,
)
from numerics.grids import DEFAULT_MONOTONE_TOL, GridLike
from observability.logger import log_info, log_warning
from virtual import mhr_check

MHR_GRID_POINTS = 101


def _require_multiplicative(mech: DirectMechanism) -> None:
    if not mech.family.is_multiplicative:
        raise UnsupportedModelError(
            f"spot-market analysis needs multiplicative values, got {mech.family.name}"
        )


def _require_spot_price(mech: DirectMechanism, spot_price: float) -> None:
    if not spot_price > mech.cost:
        raise PreconditionError(
            f"spot price {spot_price} must exceed marginal cost {mech.cost}"
        )


def spot_interim_payoff(mech: BaseMechanism, theta, spot_price: float):
    """uˢ(θ) by quadrature of the spot best-response payoff against g(· | θ)."""
    if not spot_price > 0:
        raise PreconditionError(f"spot price must be positive: {spot_price}")
    theta = np.asarray(theta, dtype=float)
    return mech.expect_v(theta, lambda v: spot_payoff(v, spot_price, mech.alpha))


def spot_cutoff(
    mech: DirectMechanism,
    spot_price: float,
    tol: float = 1e-10,
    monotone_tol: float = DEFAULT_MONOTONE_TOL,
) -> float:
    """
    θ* with φ_F(θ*)/θ* = c/pˢ.

    Clamps to θ̲ when the spot option binds nowhere and to θ̄ when there is
    no interior root.
    """
    _require_spot_price(mech, spot_price)
    _require_multiplicative(mech)

    lo, hi = mech.signal.theta_lo, mech.signal.theta_hi
    grid = Grid.linspace(lo, hi, MHR_GRID_POINTS)
    report = mhr_check(mech.signal, grid, monotone_tol)
    if not report.passed:
        raise AssumptionViolationError(
            "spot cutoff needs a monotone hazard rate", report=report
        )

    target = mech.cost / spot_price

    def gap(theta: float) -> float:
        return float(mech.field.phi_F(theta)) / theta - target

    if gap(lo) >= 0:
        return lo
    if gap(hi) < 0:
        return hi
    return find_root(gap, lo, hi, tol=tol)


def envelope_derivative_ratio(mech: DirectMechanism, theta, spot_price: float):
    """(pˢ/c · φ_F(θ)/θ)^{α/(1−α)}, the ratio of U′(θ) to uˢ′(θ)."""
    _require_multiplicative(mech)
    theta = np.asarray(theta, dtype=float)
    phi_F = mech.field.phi_F(theta)
    if np.any(phi_F <= 0):
        raise ExcludedPointError("envelope ratio undefined where φ_F(θ) ≤ 0")
    exponent = mech.alpha / (1.0 - mech.alpha)
    return (spot_price / mech.cost * phi_F / theta) ** exponent


def envelope_slopes(mech: DirectMechanism, theta, spot_price: float):
    """(U′(θ), uˢ′(θ)) from the envelope integrands −∫ q^α ∂G/∂θ dv."""
    theta = np.asarray(theta, dtype=float)
    lo = np.broadcast_to(mech.family.lower_support(theta), theta.shape)
    hi = np.broadcast_to(mech.family.upper_support(theta), theta.shape)
    tb = theta[..., None]

    def spot_integrand(v):
        root = spot_quantity(v, spot_price, mech.alpha) ** mech.alpha
        return -root * mech.family.theta_partial(tb, v)

    spot_slope = integrate_many(spot_integrand, lo, hi, mech.rule)
    return mech.envelope_slope(theta), spot_slope


class SpotConstrainedMechanism(BaseMechanism):
    """q* and t* − t_c above θ*, spot replication (q = qˢ, t = pˢ·q) below."""

    name = "spot-constrained"

    def __init__(
        self,
        optimal: DirectMechanism,
        spot_price: float,
        theta_star: float,
        discount: float,
    ):
        super().__init__(
            optimal.environment, optimal.signal, optimal.family, optimal.rule
        )
        self.optimal = optimal
        self.spot_price = spot_price
        self.theta_star = theta_star
        self.discount = discount

    def contracted(self, theta):
        return np.asarray(theta, dtype=float) >= self.theta_star

    def quantity(self, theta, v):
        theta, v = np.broadcast_arrays(
            np.asarray(theta, dtype=float), np.asarray(v, dtype=float)
        )
        spot = spot_quantity(np.maximum(v, 0.0), self.spot_price, self.alpha)
        return np.where(self.contracted(theta), self.optimal.quantity(theta, v), spot)

    def transfer(self, theta, v):
        theta, v = np.broadcast_arrays(
            np.asarray(theta, dtype=float), np.asarray(v, dtype=float)
        )
        q = spot_quantity(np.maximum(v, 0.0), self.spot_price, self.alpha)
        spot = self.spot_price * q
        optimal = self.optimal.transfer(theta, v) - self.discount
        return np.where(self.contracted(theta), optimal, spot)

    def kinks(self, theta):
        return self.optimal.kinks(theta)

    def theta_kinks(self):
        lo, hi = self.signal.theta_lo, self.signal.theta_hi
        points = [*self.optimal.theta_kinks().tolist()]
        if lo < self.theta_star < hi:
            points.append(self.theta_star)
        return np.array(sorted(set(points)))


@dataclass
class SpotMarketSolution:
    spot_price: float
    theta_star: float
    discount: float
    mechanism: SpotConstrainedMechanism
    heuristic: bool
    heuristic_gap: float
    seller_profit: float
    fallback_margin: float

    def u_spot(self, theta):
        return spot_interim_payoff(self.mechanism, theta, self.spot_price)

    def summary(self) -> Dict[str, float]:
        return {
            "p_spot": self.spot_price,
            "theta_star": self.theta_star,
            "t_c": self.discount,
            "heuristic": self.heuristic,
            "heuristic_gap": self.heuristic_gap,
            "seller_profit": self.seller_profit,
            "fallback_margin": self.fallback_margin,
        }

    def profile(self, theta_grid: GridLike) -> pd.DataFrame:
        """theta, cutoff_flag, q_source, t_discount, u_spot, u_contract."""
        thetas = as_points(theta_grid)
        flags = self.mechanism.contracted(thetas)
        return pd.DataFrame(
            {
                "theta": thetas,
                "cutoff_flag": flags.astype(int),
                "q_source": np.where(flags, "mechanism", "spot"),
                "t_discount": np.where(flags, self.discount, 0.0),
                "u_spot": self.u_spot(thetas),
                "u_contract": self.mechanism.expected_utility(thetas),
            }
        )


def _region_integral(mech: BaseMechanism, lo: float, hi: float, per_theta) -> float:
    if hi <= lo:
        return 0.0

    def weighted(th):
        return mech.signal.pdf(th) * per_theta(th)

    return float(integrate_many(weighted, lo, hi, mech.rule))


def solve_spot_constrained(
    mech: DirectMechanism, spot_price: float, root_tol: float = 1e-10
) -> SpotMarketSolution:
    theta_star = spot_cutoff(mech, spot_price, tol=root_tol)
    discount = float(
        spot_interim_payoff(mech, theta_star, spot_price)
        - mech.expected_utility(theta_star)
    )
    if discount < 0:
        log_warning(f"⚠️ [Spot] negative discount {discount:.3g} clipped to 0")
        discount = 0.0

    constrained = SpotConstrainedMechanism(mech, spot_price, theta_star, discount)
    lo, c = mech.signal.theta_lo, mech.cost

    def relaxed(th):
        tb = th[..., None]

        def margin(v):
            return mech.transfer(tb, v) - c * mech.quantity(tb, v)

        return mech.expect_v(th, margin, mech.kinks(th))

    def fallback(th):
        return mech.expect_v(
            th, lambda v: (spot_price - c) * spot_quantity(v, spot_price, mech.alpha)
        )

    # kink of the relaxed integrand at the exclusion cutoff
    cut = mech.exclusion_cutoff
    if np.isfinite(cut) and lo < cut < theta_star:
        relaxed_revenue = _region_integral(mech, lo, cut, relaxed) + _region_integral(
            mech, cut, theta_star, relaxed
        )
    else:
        relaxed_revenue = _region_integral(mech, lo, theta_star, relaxed)
    fallback_margin = _region_integral(mech, lo, theta_star, fallback)

    solution = SpotMarketSolution(
        spot_price=spot_price,
        theta_star=theta_star,
        discount=discount,
        mechanism=constrained,
        heuristic=theta_star > lo,
        heuristic_gap=relaxed_revenue - fallback_margin,
        seller_profit=constrained.seller_profit(),
        fallback_margin=fallback_margin,
    )
    log_info(
        f"🏪 [Spot] pˢ={spot_price:g} | θ*={theta_star:.9g} | t_c={discount:.9g}",
        heuristic=solution.heuristic,
    )
    return solution
