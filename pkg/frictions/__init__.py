"""
Contract frictions: a penalty on period-0 payments and a competing
period-1 spot market.
"""

from .commitment import (
    CommitmentCostSolution,
    FrictionPayoff,
    committed_interim_payoff,
    optimal_contract_under_gamma,
    payoff_with_gamma,
    split_interim_payoff,
)
from .spot import (
    SpotConstrainedMechanism,
    SpotMarketSolution,
    envelope_derivative_ratio,
    envelope_slopes,
    solve_spot_constrained,
    spot_cutoff,
    spot_interim_payoff,
)

__all__ = [
    "CommitmentCostSolution",
    "FrictionPayoff",
    "SpotConstrainedMechanism",
    "SpotMarketSolution",
    "committed_interim_payoff",
    "envelope_derivative_ratio",
    "envelope_slopes",
    "optimal_contract_under_gamma",
    "payoff_with_gamma",
    "solve_spot_constrained",
    "split_interim_payoff",
    "spot_cutoff",
    "spot_interim_payoff",
]
