"""
Numerical verification: brute-force incentive and participation checks,
revenue-equivalence audits and oracle comparisons on grids.
"""

from .checks import (
    check_allocation_oracle,
    check_commitment_dominance,
    check_diagonal_identity,
    check_envelope_theta,
    check_envelope_v,
    check_ic0,
    check_ic1,
    check_ic1_grid,
    check_ir,
    check_monotone,
    check_profit_identity,
    check_revenue_equivalence,
    check_single_crossing,
    zero_outside_option,
)
from .deviation import DeviationMatrix, deviation_matrix
from .results import CheckResult, VerificationReport
from .suite import VerificationSettings, run_verification
from .summary import summarize_report

__all__ = [
    "CheckResult",
    "DeviationMatrix",
    "VerificationReport",
    "VerificationSettings",
    "check_allocation_oracle",
    "check_commitment_dominance",
    "check_diagonal_identity",
    "check_envelope_theta",
    "check_envelope_v",
    "check_ic0",
    "check_ic1",
    "check_ic1_grid",
    "check_ir",
    "check_monotone",
    "check_profit_identity",
    "check_revenue_equivalence",
    "check_single_crossing",
    "deviation_matrix",
    "run_verification",
    "summarize_report",
    "zero_outside_option",
]
