"""
Verification Suite

Runs every registered check against one optimal mechanism and collects the
results into a VerificationReport. Optional checks join when their friction
is configured: spot_ir with a spot price, commitment_dominance with γ > 0.
"""

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from contracts import (
    CommittedSpendContract,
    TwoPartTariff,
    build_committed_spend,
    build_two_part_tariff,
)
from frictions import optimal_contract_under_gamma, solve_spot_constrained
from mechanism import DirectMechanism
from model import fosd_check
from numerics import Grid
from observability.logger import log_info
from virtual import mhr_check, regularity_check

from .checks import (
    check_allocation_oracle,
    check_commitment_dominance,
    check_diagonal_identity,
    check_envelope_theta,
    check_envelope_v,
    check_ic0,
    check_ic1_grid,
    check_ir,
    check_monotone,
    check_profit_identity,
    check_revenue_equivalence,
    check_single_crossing,
    theta_points_with,
    zero_outside_option,
)
from .deviation import deviation_matrix
from .results import CheckResult, VerificationReport


@dataclass(frozen=True)
class VerificationSettings:
    theta_points: int = 51
    v_points: int = 101
    oracle_points: int = 20
    q_oracle_points: int = 10_000
    ic1_types: int = 11
    envelope_points: int = 11
    refine: int = 1
    workers: int = 1
    ic_tol: float = 1e-7
    monotone_tol: float = 1e-9
    revenue_tol: float = 1e-10
    envelope_tol: float = 1e-5
    oracle_tol: float = 1e-9
    profit_tol: float = 1e-7
    root_tol: float = 1e-10
    gamma: float = 0.0
    spot_price: Optional[float] = None

    def tolerances(self):
        return {k: v for k, v in asdict(self).items() if k.endswith("_tol")}


def _interior(lo: float, hi: float, n: int) -> np.ndarray:
    return np.linspace(lo, hi, n + 2)[1:-1]


def run_verification(
    mech: DirectMechanism,
    settings: Optional[VerificationSettings] = None,
    tariff: Optional[TwoPartTariff] = None,
    committed: Optional[CommittedSpendContract] = None,
) -> VerificationReport:
    s = settings or VerificationSettings()
    report = VerificationReport(tolerances=s.tolerances())

    lo, hi = mech.signal.theta_lo, mech.signal.theta_hi
    v_lo, v_hi = mech.family.global_lo, mech.family.global_hi
    thetas = Grid.linspace(lo, hi, s.theta_points)
    values = Grid.linspace(v_lo, v_hi, s.v_points)

    log_info(f"🔬 [Verify] starting | {s.theta_points} types × {s.v_points} values")

    # Distributional assumptions
    diagnostics = [
        fosd_check(mech.family, thetas, values, s.monotone_tol),
        regularity_check(mech.field, thetas, values, s.monotone_tol),
    ]
    if mech.family.is_multiplicative:
        diagnostics.append(mhr_check(mech.signal, thetas, s.monotone_tol))
    for diagnostic in diagnostics:
        report.add(CheckResult.from_diagnostic(diagnostic))

    # Period-0 incentives
    matrix = deviation_matrix(mech, thetas, refine=s.refine, workers=s.workers)
    report.add(check_ic0(matrix, s.ic_tol))
    report.add(check_diagonal_identity(matrix, mech, s.ic_tol))
    report.add(check_single_crossing(matrix, s.ic_tol))

    # Period-1 incentives and participation
    ic1_types = np.linspace(lo, hi, s.ic1_types)
    report.add(check_ic1_grid(mech, ic1_types, s.v_points, s.ic_tol))
    report.add(check_ir(mech, zero_outside_option, thetas, s.ic_tol))

    # Pointwise allocation and envelope conditions
    report.add(
        check_allocation_oracle(
            mech,
            np.linspace(lo, hi, s.oracle_points),
            np.linspace(v_lo, v_hi, s.oracle_points),
            s.q_oracle_points,
            s.oracle_tol,
        )
    )
    report.add(
        check_envelope_v(
            mech,
            np.linspace(lo, hi, s.envelope_points),
            _interior(v_lo, v_hi, s.envelope_points),
            s.envelope_tol,
        )
    )
    report.add(
        check_envelope_theta(
            mech, _interior(lo, hi, s.envelope_points), s.envelope_tol
        )
    )

    # Implementations
    tariff = tariff or build_two_part_tariff(mech, thetas, s.v_points)
    committed = committed or build_committed_spend(mech, thetas, s.v_points)
    report.add(check_revenue_equivalence(mech, tariff, committed, s.revenue_tol))
    report.add(
        check_monotone(
            "upfront_monotone", tariff.thetas, tariff.upfront_values, s.monotone_tol
        )
    )
    report.add(
        check_monotone(
            "budget_monotone", committed.thetas, committed.budget_values, s.monotone_tol
        )
    )
    report.add(check_profit_identity(mech, s.profit_tol))

    # Frictions
    if s.spot_price is not None:
        report.add(_spot_ir(mech, thetas.points, s))
    if s.gamma > 0:
        solution = optimal_contract_under_gamma(mech, s.gamma, thetas, s.v_points)
        report.add(check_commitment_dominance(solution, s.profit_tol))

    log_info(
        f"{'✅' if report.passed else '❌'} [Verify] {len(report)} checks",
        failed=report.failed,
    )
    return report


def _spot_ir(
    mech: DirectMechanism, thetas: np.ndarray, s: VerificationSettings
) -> CheckResult:
    """IR against the spot payoff above θ*, binding at θ*."""
    solution = solve_spot_constrained(mech, s.spot_price, root_tol=s.root_tol)
    star = solution.theta_star
    points = theta_points_with(thetas[thetas >= star], star)
    result = check_ir(
        solution.mechanism, solution.u_spot, points, s.ic_tol, name="spot_ir"
    )

    binds_at_star = any(
        np.isclose(b, star, rtol=0, atol=1e-12) for b in result.details["binds_at"]
    )
    result.details.update(
        {
            "theta_star": star,
            "t_c": solution.discount,
            "binds_at_theta_star": binds_at_star,
        }
    )
    result.passed = result.passed and binds_at_star
    return result
