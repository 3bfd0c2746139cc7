# tests/test_verify.py
"""
Production tests for the numerical verification suite.

Tests cover:
- Full suite on Example 1 (every check passes, deterministic JSON)
- Incentive checks catching perturbed mechanisms
- Revenue-equivalence audit catching a shifted upfront fee
- Optional friction checks for spot IR and commitment dominance
- Report bookkeeping and summaries
"""

import dataclasses
import json

import numpy as np
import pytest

from contracts import PriceSchedule
from mechanism import CallableMechanism
from numerics import Grid, PreconditionError
from verify import (
    CheckResult,
    VerificationReport,
    VerificationSettings,
    check_ic0,
    check_ic1,
    check_ir,
    check_revenue_equivalence,
    deviation_matrix,
    run_verification,
    summarize_report,
    zero_outside_option,
)

FAST = VerificationSettings(
    theta_points=11,
    v_points=21,
    oracle_points=8,
    q_oracle_points=2_000,
    ic1_types=5,
    envelope_points=5,
)

BASE_CHECKS = [
    "fosd",
    "regularity",
    "mhr",
    "ic0",
    "diagonal_identity",
    "single_crossing",
    "ic1",
    "ir",
    "allocation_oracle",
    "envelope_v",
    "envelope_theta",
    "revenue_equivalence",
    "upfront_monotone",
    "budget_monotone",
    "profit_identity",
]


@pytest.fixture(scope="module")
def report(mech):
    """Fixture providing the fast verification report for Example 1."""
    return run_verification(mech, FAST)


def _perturbed(mech, transfer):
    return CallableMechanism(
        mech.environment,
        mech.signal,
        mech.family,
        quantity=mech.quantity,
        transfer=transfer,
        rule=mech.rule,
        name="perturbed",
    )


# =============================================================================
# Full suite
# =============================================================================


def test_example1_passes_every_check(report):
    """Test all registered checks pass on Example 1."""
    assert report.names == BASE_CHECKS
    assert report.passed, report.failed
    assert report.failed == []


def test_report_json_is_deterministic(mech, report):
    """Test two runs render byte-identical JSON with sorted keys."""
    again = run_verification(mech, FAST)
    assert report.to_json() == again.to_json()
    payload = json.loads(report.to_json())
    assert [c["check"] for c in payload["checks"]] == BASE_CHECKS
    assert payload["tolerances"]["ic_tol"] == 1e-7
    assert payload["summary"]["total_checks"] == len(BASE_CHECKS)


def test_report_records_profits(report):
    """Test the revenue audit stores all three profits at 7/36."""
    profits = report["revenue_equivalence"].details["profits"]
    for value in profits.values():
        assert value == pytest.approx(7 / 36, abs=1e-10)


def test_optional_friction_checks(mech):
    """Test spot_ir and commitment_dominance join and pass when configured."""
    settings = dataclasses.replace(FAST, spot_price=2.0, gamma=0.1)
    full = run_verification(mech, settings)
    assert full.names[-2:] == ["spot_ir", "commitment_dominance"]
    spot = full["spot_ir"]
    assert spot.passed
    assert spot.details["binds_at_theta_star"]
    assert spot.details["theta_star"] == pytest.approx(4 / 3, abs=1e-9)
    assert spot.details["t_c"] == pytest.approx(7 / 72, abs=1e-9)
    assert full["commitment_dominance"].passed
    assert full["commitment_dominance"].details["strict"]


def test_additive_family_passes_every_check(additive_mech):
    """Test a non-multiplicative family with a θ-kink at 1.5 passes the suite."""
    generic = run_verification(additive_mech, FAST)
    assert generic.names == [name for name in BASE_CHECKS if name != "mhr"]
    assert generic.passed, generic.failed
    assert generic["envelope_theta"].passed


def test_tabulated_family_passes_every_check(tabulated_mech):
    """Test Example 1 loaded from its 41 × 61 table passes the suite."""
    tabulated = run_verification(tabulated_mech, FAST)
    assert tabulated.passed, tabulated.failed
    profits = tabulated["revenue_equivalence"].details["profits"]
    for value in profits.values():
        assert value == pytest.approx(7 / 36, abs=1e-8)


# =============================================================================
# Incentive checks on perturbed mechanisms
# =============================================================================


def test_ic0_detects_doubled_transfers(mech):
    """Test doubling transfers above θ = 1.5 creates profitable misreports."""
    doubled = _perturbed(
        mech, lambda t, v: mech.transfer(t, v) * np.where(t > 1.5, 2.0, 1.0)
    )
    result = check_ic0(deviation_matrix(doubled, Grid.linspace(1.0, 2.0, 11)))
    assert not result.passed
    assert result.at["theta"] > 1.5
    assert result.at["direction"] == "down"


def test_constant_mechanism_is_incentive_compatible(example1):
    """Test a mechanism ignoring reports passes IC0 and IC1."""
    constant = CallableMechanism(
        *example1,
        quantity=lambda t, v: np.full_like(t, 0.25),
        transfer=lambda t, v: np.full_like(t, 0.1),
        name="constant",
    )
    matrix = deviation_matrix(constant, Grid.linspace(1.0, 2.0, 6))
    assert check_ic0(matrix).passed
    assert check_ic1(constant, 1.5, np.linspace(0.75, 1.5, 11)).passed


def test_ic1_detects_a_surcharge(mech):
    """Test a 0.01 surcharge at v = 1.5 makes a neighbouring report profitable."""
    surcharge = _perturbed(
        mech,
        lambda t, v: mech.transfer(t, v) + np.where(np.isclose(v, 1.5), 0.01, 0.0),
    )
    values = np.linspace(1.0, 2.0, 11)
    assert check_ic1(mech, 2.0, values).passed
    result = check_ic1(surcharge, 2.0, values)
    assert not result.passed
    assert result.at["v"] == pytest.approx(1.5)
    assert result.name == "ic1@2"


def test_ir_check(mech):
    """Test U(θ) ≥ 0 binds at θ̲ and fails against a positive outside option."""
    thetas = Grid.linspace(1.0, 2.0, 6)
    result = check_ir(mech, zero_outside_option, thetas)
    assert result.passed
    assert result.details["binds_at"] == [1.0]
    failing = check_ir(mech, lambda t: np.full_like(t, 0.05), thetas)
    assert not failing.passed
    assert failing.at == {"theta": 1.0}


def test_revenue_equivalence_detects_shifted_fee(mech, tariff, committed):
    """Test a 0.01 increase of t₀ breaks pointwise equivalence."""
    assert check_revenue_equivalence(mech, tariff, committed).passed
    original = tariff.upfront
    shifted = dataclasses.replace(tariff, upfront=lambda th: original(th) + 0.01)
    result = check_revenue_equivalence(mech, shifted, committed)
    assert not result.passed
    assert result.worst_violation == pytest.approx(0.01, abs=1e-9)


def test_revenue_equivalence_on_null_mechanism(example1, tariff, committed):
    """Test hand-built zero schedules match the null mechanism."""
    null = CallableMechanism.null(*example1)
    zero = PriceSchedule(np.array([0.0]), np.array([0.0]), values=np.array([1.0]))
    thetas = np.array([1.5])
    zero_tariff = dataclasses.replace(
        tariff,
        upfront=lambda th: np.zeros_like(np.asarray(th, dtype=float)),
        period_payment=null.transfer,
        thetas=thetas,
        schedules=(zero,),
        source=null,
    )
    zero_committed = dataclasses.replace(
        committed,
        budget=lambda th: np.zeros_like(np.asarray(th, dtype=float)),
        payment=null.transfer,
        thetas=thetas,
        schedules=(zero,),
        source=null,
    )
    assert check_revenue_equivalence(null, zero_tariff, zero_committed).passed


# =============================================================================
# Bookkeeping
# =============================================================================


def test_report_rejects_duplicate_checks():
    """Test a check name can be registered once."""
    report = VerificationReport()
    report.add(CheckResult("ic0", True, 0.0, 1e-7))
    with pytest.raises(PreconditionError):
        report.add(CheckResult("ic0", True, 0.0, 1e-7))
    with pytest.raises(KeyError):
        report["ic1"]


def test_check_result_from_violations():
    """Test the worst magnitude decides and negative slack reports zero."""
    coords = [{"theta": 1.0}, {"theta": 2.0}]
    failing = CheckResult.from_violations("x", [0.1, 0.3], coords, 0.2)
    assert not failing.passed
    assert failing.at == {"theta": 2.0}
    slack = CheckResult.from_violations("y", [-0.5, -0.1], coords, 0.2)
    assert slack.passed and slack.worst_violation == 0.0 and slack.at == {}
    assert CheckResult.from_violations("z", [], [], 0.2).passed


def test_check_result_never_reports_negative_zero():
    """Test a worst magnitude of −0.0 is stored and rendered as 0.0."""
    result = CheckResult.from_violations("w", [-0.0, -1.0], [{}, {}], 0.2)
    assert result.passed
    assert not np.signbit(result.worst_violation)
    assert json.dumps(result.as_dict()["worst_violation"]) == "0.0"


def test_summarize_report():
    """Test totals, pass rate and the worst check."""
    report = VerificationReport()
    report.add(CheckResult("a", True, 0.0, 1.0))
    report.add(CheckResult("b", False, 2.0, 1.0))
    summary = summarize_report(report)
    assert summary["total_checks"] == 2
    assert summary["passed"] == 1
    assert summary["pass_rate"] == 0.5
    assert summary["failed"] == ["b"]
    assert summary["worst_check"] == "b"
    assert summarize_report(VerificationReport())["total_checks"] == 0


def test_check_result_json_rounding():
    """Test floats render with 12 significant digits and infinities as strings."""
    result = CheckResult(
        "x", True, 1 / 3, float("inf"), details={"q": np.float64(2 / 3)}
    )
    payload = result.as_dict()
    assert payload["worst_violation"] == 0.333333333333
    assert payload["tolerance"] == "inf"
    assert payload["details"]["q"] == 0.666666666667
