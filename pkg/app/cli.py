#!/usr/bin/env python3
"""
Command-Line Entry Point

    screening solve   --config example1 --out outputs/
    screening verify  --config configs/example1.yaml
    screening sweep   --config example1 --parameter spot_price --values 1.5,2,4
    screening figures --config shifted

Exit codes are the only success channel: 0 ok, 2 config error,
3 assumption violated, 4 verification failed, 5 unsupported model.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from contracts import (
    build_committed_spend,
    build_two_part_tariff,
    guaranteed_positive_quantity,
)
from frictions import optimal_contract_under_gamma, solve_spot_constrained
from numerics import (
    AssumptionViolationError,
    PreconditionError,
    ScreeningError,
    UnsupportedModelError,
)
from observability.logger import log_error, log_info, shutdown_logging
from observability.tracer import RunTracer, run_id_for
from verify import run_verification, summarize_report

from .config import setup_environment
from .exports import (
    empty_frame,
    mechanism_frame,
    schedules_frame,
    write_csv,
    write_json,
)
from .factory import (
    build_solver,
    require_regular,
    theta_grid,
    verification_settings,
)
from .run_config import ConfigError, RunConfig, load_run_config

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_ASSUMPTION = 3
EXIT_VERIFICATION = 4
EXIT_UNSUPPORTED = 5

SWEEP_COLUMNS = {
    "spot_price": ["p_spot", "theta_star", "t_c", "seller_profit", "heuristic_gap"],
    "gamma": ["gamma", "buyer_gain_vs_tariff", "seller_profit"],
}


# =============================================================================
# Commands
# =============================================================================


def cmd_solve(config: RunConfig, formats: Optional[Sequence[str]] = None) -> int:
    """Optimal mechanism, both contract implementations and friction summaries."""
    formats = list(formats or config.outputs.formats)
    out = config.outputs.directory

    mech = build_solver(config)
    require_regular(config, mech)
    thetas = theta_grid(config, mech)
    v_points = config.grids.v_points

    tariff = build_two_part_tariff(mech, thetas, v_points)
    committed = build_committed_spend(mech, thetas, v_points)

    written: List[Path] = []
    if "csv" in formats:
        frame = mechanism_frame(mech, thetas, v_points)
        written.append(write_csv(frame, out / "mechanism.csv"))
        written.append(write_csv(tariff.frame(), out / "tariff.csv"))
        written.append(write_csv(committed.frame(), out / "committed.csv"))
        schedules = schedules_frame(tariff, committed)
        written.append(write_csv(schedules, out / "schedules.csv"))

    summary = {
        "config": config.name,
        "seller_profit": mech.seller_profit(),
        "tariff_profit": tariff.seller_profit(),
        "committed_profit": committed.seller_profit(),
        "exclusion_cutoff": mech.exclusion_cutoff,
        "guaranteed_positive_quantity": guaranteed_positive_quantity(committed),
        "max_upfront": float(np.max(tariff.upfront_values)),
        "max_budget": float(np.max(committed.budget_values)),
    }

    gamma = config.environment.gamma
    if gamma > 0:
        solution = optimal_contract_under_gamma(mech, gamma, thetas, v_points)
        summary["commitment"] = {
            "gamma": gamma,
            "buyer_gain_at_top": float(solution.buyer_gain[-1]),
            "profit_gap": solution.profit_gap,
            "strict": solution.strict,
        }

    spot_price = config.environment.spot_price
    if spot_price is not None:
        spot = solve_spot_constrained(mech, spot_price, root_tol=config.tolerances.root)
        if "json" in formats:
            written.append(write_json(spot.summary(), out / "spot_summary.json"))
        if "csv" in formats:
            written.append(write_csv(spot.profile(thetas), out / "spot_profile.csv"))

    if "json" in formats:
        written.append(write_json(summary, out / "summary.json"))

    for path in written:
        print(path)
    log_info(f"✅ [Solve] {len(written)} artifacts", profit=summary["seller_profit"])
    return EXIT_OK


def cmd_figures(config: RunConfig) -> int:
    """CSV figure data only."""
    return cmd_solve(config, formats=["csv"])


def cmd_verify(config: RunConfig) -> int:
    mech = build_solver(config)
    require_regular(config, mech)
    report = run_verification(mech, verification_settings(config))

    path = config.outputs.directory / "verification.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.to_json(), encoding="utf-8")

    summary = summarize_report(report)
    print(path)
    print(
        f"{summary['passed']}/{summary['total_checks']} checks passed"
        + (f"; failed: {', '.join(summary['failed'])}" if summary["failed"] else "")
    )
    return EXIT_OK if report.passed else EXIT_VERIFICATION


def _sweep_row(mech, config: RunConfig, parameter: str, value: float) -> dict:
    if parameter == "spot_price":
        solution = solve_spot_constrained(mech, value, root_tol=config.tolerances.root)
        summary = solution.summary()
        return {key: summary[key] for key in SWEEP_COLUMNS["spot_price"]}

    # γ retimes payments only, so the frictionless mechanism serves every value
    if value == 0:
        return {
            "gamma": 0.0,
            "buyer_gain_vs_tariff": 0.0,
            "seller_profit": mech.seller_profit(),
        }
    solution = optimal_contract_under_gamma(
        mech, value, theta_grid(config, mech), config.grids.v_points
    )
    return {
        "gamma": value,
        "buyer_gain_vs_tariff": float(solution.buyer_gain[-1]),
        "seller_profit": solution.seller_profit,
    }


def cmd_sweep(config: RunConfig, parameter: str, values: Sequence[float]) -> int:
    mech = build_solver(config)
    require_regular(config, mech)
    if parameter == "spot_price" and not mech.family.is_multiplicative:
        raise UnsupportedModelError(
            f"spot sweep needs multiplicative values, got {mech.family.name}"
        )

    rows = [_sweep_row(mech, config, parameter, float(v)) for v in values]
    frame = pd.DataFrame(rows) if rows else empty_frame(SWEEP_COLUMNS[parameter])
    path = write_csv(
        frame[SWEEP_COLUMNS[parameter]],
        config.outputs.directory / f"sweep_{parameter}.csv",
    )
    print(path)
    return EXIT_OK


# =============================================================================
# Argument parsing
# =============================================================================


def parse_values(values: Optional[str], span: Optional[str]) -> List[float]:
    """``a,b,c`` or ``start:stop:count`` → sweep points."""
    if values is not None:
        try:
            return [float(v) for v in values.split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(f"bad --values {values!r}: {exc}") from exc
    if span is not None:
        try:
            start, stop, count = span.split(":")
            return np.linspace(float(start), float(stop), int(count)).tolist()
        except ValueError as exc:
            raise ConfigError(
                f"bad --range {span!r}; expected start:stop:count"
            ) from exc
    raise ConfigError("sweep needs --values or --range")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        default="example1",
        help="YAML run config or preset name (example1, shifted, mixture)",
    )
    common.add_argument("--out", type=Path, help="Output directory")
    common.add_argument("--theta-points", type=int, help="Signal grid size")
    common.add_argument("--v-points", type=int, help="Value grid size per type")
    common.add_argument("--tol-ic", type=float, help="IC tolerance")
    common.add_argument("--workers", type=int, help="Threads for the deviation matrix")
    common.add_argument("--verbose", action="store_true", help="Debug logging")

    parser = argparse.ArgumentParser(
        prog="screening",
        description="Sequential-screening pricing: solve, verify and sweep.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser(
        "solve", parents=[common], help="Solve and export mechanism + contracts"
    )
    commands.add_parser("figures", parents=[common], help="Export CSV figure data")
    commands.add_parser("verify", parents=[common], help="Run the verification suite")

    sweep = commands.add_parser(
        "sweep", parents=[common], help="Sweep a friction parameter"
    )
    sweep.add_argument("--parameter", required=True, choices=sorted(SWEEP_COLUMNS))
    span = sweep.add_mutually_exclusive_group(required=True)
    span.add_argument("--values", help="Comma-separated values, e.g. 1.5,2,4")
    span.add_argument("--range", dest="span", help="start:stop:count")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    config = load_run_config(args.config)
    return config.with_overrides(
        **{
            "outputs.directory": args.out,
            "grids.theta_points": args.theta_points,
            "grids.v_points": args.v_points,
            "tolerances.ic": args.tol_ic,
            "workers": args.workers,
        }
    )


def dispatch(args: argparse.Namespace, config: RunConfig) -> int:
    if args.command == "solve":
        return cmd_solve(config)
    if args.command == "figures":
        return cmd_figures(config)
    if args.command == "verify":
        return cmd_verify(config)
    return cmd_sweep(config, args.parameter, parse_values(args.values, args.span))


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_environment(verbose=args.verbose)

    token = None
    try:
        config = load_config(args)
        token = RunTracer.set_run_id(run_id_for(config.identity()))
        log_info(f"▶️ [CLI] {args.command} | {config.name}")
        return dispatch(args, config)
    except (ConfigError, PreconditionError) as exc:
        log_error(f"❌ [CLI] configuration error: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AssumptionViolationError as exc:
        log_error(f"❌ [CLI] {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION
    except UnsupportedModelError as exc:
        log_error(f"❌ [CLI] unsupported model: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ScreeningError as exc:
        log_error(f"❌ [CLI] solver failure: {exc}", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    finally:
        if token is not None:
            RunTracer.reset_run_id(token)
        shutdown_logging()


if __name__ == "__main__":
    sys.exit(main())
