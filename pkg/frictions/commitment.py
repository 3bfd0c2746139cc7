"""
Cost of committed capital: the buyer pays a linear penalty γ on strictly
positive period-0 payments, the seller is indifferent to timing.

Backloading every payment into period 1 (the committed-spend contract) is
then the unique optimal implementation.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from contracts import (
    CommittedSpendContract,
    TwoPartTariff,
    build_committed_spend,
    build_two_part_tariff,
)
from mechanism import DirectMechanism
from numerics import DomainError
from numerics.grids import GridLike
from observability.logger import log_info, log_warning

DEFAULT_SPLIT_FRACTIONS = (0.25, 0.5, 0.75, 1.0)
DOMINANCE_TOL = 1e-10
# upfront fees below this count as unpaid
PAID_TOL = 1e-9


@dataclass(frozen=True)
class FrictionPayoff:
    """u = v·q^α − (1 + γ·𝟙[t₀ > 0])·t₀ − t₁."""

    gamma: float
    alpha: float

    def __call__(self, v, q, t0, t1):
        t0 = np.asarray(t0, dtype=float)
        penalty = 1.0 + self.gamma * (t0 > 0)
        gross = np.asarray(v, float) * np.asarray(q, float) ** self.alpha
        return gross - penalty * t0 - t1


def payoff_with_gamma(v, q, t0, t1, gamma: float, alpha: float):
    if gamma < 0:
        raise DomainError(f"γ must be non-negative: {gamma}")
    return FrictionPayoff(gamma, alpha)(v, q, t0, t1)


def split_interim_payoff(
    mech: DirectMechanism,
    tariff: TwoPartTariff,
    theta,
    fraction: float,
    gamma: float,
):
    """
    E_v[u | θ] when λ = ``fraction`` of the tariff's upfront fee is paid in
    period 0 and the rest of it moves onto the period-1 payment.
    """
    theta = np.asarray(theta, dtype=float)
    tb = theta[..., None]
    upfront = np.asarray(tariff.upfront(theta), dtype=float)[..., None]
    payoff = FrictionPayoff(gamma, mech.alpha)

    def integrand(v):
        t0 = np.broadcast_to(fraction * upfront, np.shape(v))
        t1 = tariff.period_payment(tb, v) + (1.0 - fraction) * upfront
        return payoff(v, mech.quantity(tb, v), t0, t1)

    return mech.expect_v(theta, integrand, mech.kinks(theta))


def committed_interim_payoff(
    mech: DirectMechanism, contract: CommittedSpendContract, theta, gamma: float
):
    """E_v[u | θ] under committed spend: nothing is paid in period 0."""
    theta = np.asarray(theta, dtype=float)
    tb = theta[..., None]
    payoff = FrictionPayoff(gamma, mech.alpha)

    def integrand(v):
        return payoff(v, contract.quantity(tb, v), 0.0, contract.payment(tb, v))

    return mech.expect_v(theta, integrand, mech.kinks(theta))


@dataclass
class CommitmentCostSolution:
    gamma: float
    contract: CommittedSpendContract
    tariff: TwoPartTariff
    thetas: np.ndarray
    committed_payoff: np.ndarray
    tariff_payoff: np.ndarray
    seller_profit: float
    frictionless_profit: float
    split_fractions: Sequence[float]
    dominates: bool
    strict: bool
    violations: List[Dict[str, float]] = field(default_factory=list)

    @property
    def buyer_gain(self) -> np.ndarray:
        """Committed-spend payoff minus the full-upfront tariff payoff, per type."""
        return self.committed_payoff - self.tariff_payoff

    @property
    def profit_gap(self) -> float:
        return self.seller_profit - self.frictionless_profit


def optimal_contract_under_gamma(
    mech: DirectMechanism,
    gamma: float,
    theta_grid: Optional[GridLike] = None,
    v_points: int = 101,
    split_fractions: Sequence[float] = DEFAULT_SPLIT_FRACTIONS,
    contract: Optional[CommittedSpendContract] = None,
) -> CommitmentCostSolution:
    """
    Committed-spend contract under a period-0 penalty γ > 0, with the
    comparison against every tested tariff split attached.

    A tested split moves λ·t₀(θ) of the payment to period 0, λ in
    ``split_fractions``, t₀ the maximal upfront fee. Both sides are interim
    payoffs integrated from the contracts' own transfers. A prebuilt
    ``contract`` is compared as given.
    """
    if not gamma > 0:
        raise DomainError(f"no strict selection without a penalty: γ={gamma}")

    if contract is None:
        contract = build_committed_spend(mech, theta_grid, v_points)
    tariff = build_two_part_tariff(mech, contract.thetas, v_points)
    thetas = contract.thetas

    committed = np.asarray(
        committed_interim_payoff(mech, contract, thetas, gamma), dtype=float
    )
    fees = tariff.upfront_values
    tariff_payoff = split_interim_payoff(mech, tariff, thetas, 1.0, gamma)

    violations: List[Dict[str, float]] = []
    strict = True
    for fraction in split_fractions:
        upfront = fraction * fees
        alternative = split_interim_payoff(mech, tariff, thetas, fraction, gamma)
        gap = committed - alternative
        for i in np.flatnonzero(gap < -DOMINANCE_TOL):
            violations.append(
                {
                    "theta": float(thetas[i]),
                    "fraction": fraction,
                    "magnitude": float(-gap[i]),
                }
            )
        paid = upfront > PAID_TOL
        if np.any(gap[paid] <= 0):
            strict = False

    profit = contract.seller_profit()
    frictionless = mech.seller_profit()
    solution = CommitmentCostSolution(
        gamma=gamma,
        contract=contract,
        tariff=tariff,
        thetas=thetas,
        committed_payoff=committed,
        tariff_payoff=np.asarray(tariff_payoff, dtype=float),
        seller_profit=profit,
        frictionless_profit=frictionless,
        split_fractions=tuple(split_fractions),
        dominates=not violations,
        strict=strict,
        violations=violations,
    )

    if violations:
        log_warning(
            f"⚠️ [Frictions] committed spend dominated at {len(violations)} points"
        )
    log_info(
        f"⏳ [Frictions] γ={gamma:g} | profit {profit:.9g} | max gain "
        f"{float(np.max(solution.buyer_gain)):.6g}"
    )
    return solution
