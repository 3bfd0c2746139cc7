# tests/test_observability_config.py
"""
Production tests for configuration, run tracing, logging and exports.

Tests cover:
- Environment-driven Config defaults and reload
- Run configs: presets, YAML merging, overrides and validation errors
- Deterministic run IDs and ContextVar reset
- JSON-lines log output
- CSV/JSON writers and the solver factory
"""

import json
import logging

import numpy as np
import pandas as pd
import pytest

from app.config import Config, setup_environment
from app.exports import empty_frame, write_csv, write_json
from app.factory import (
    build_model,
    build_solver,
    require_regular,
    verification_settings,
)
from app.run_config import PRESETS, ConfigError, RunConfig, load_run_config
from numerics import AssumptionViolationError
from observability.logger import (
    log_info,
    setup_structured_logging,
    shutdown_logging,
)
from observability.tracer import RunTracer, run_id_for


@pytest.fixture
def small_config():
    """Fixture providing Example 1 on 11 × 21 grids."""
    return load_run_config("example1").with_overrides(
        **{"grids.theta_points": 11, "grids.v_points": 21}
    )


# =============================================================================
# Config
# =============================================================================


def test_config_reload_reads_environment(monkeypatch):
    """Test reload picks up SCREENING_* variables."""
    monkeypatch.setenv("SCREENING_QUAD_ORDER", "32")
    monkeypatch.setenv("SCREENING_IC_TOL", "1e-6")
    monkeypatch.setenv("SCREENING_DEBUG", "TRUE")
    Config.reload()
    try:
        assert Config.QUAD_ORDER == 32
        assert Config.IC_TOL == 1e-6
        assert Config.DEBUG is True
        assert RunConfig().tolerances.ic == 1e-6
        assert "QUAD_ORDER" in Config.as_dict()
    finally:
        monkeypatch.undo()
        Config.reload()


def test_config_defaults(monkeypatch):
    """Test defaults when the environment is empty."""
    for name in ("SCREENING_QUAD_ORDER", "SCREENING_WORKERS", "SCREENING_DEBUG"):
        monkeypatch.delenv(name, raising=False)
    Config.reload()
    assert Config.QUAD_ORDER == 64
    assert Config.WORKERS == 1
    assert Config.DEBUG is False


# =============================================================================
# Run configs
# =============================================================================


def test_empty_config_is_example1():
    """Test {} validates to the Example 1 defaults."""
    config = RunConfig()
    assert config.model.family == "example1"
    assert config.environment.alpha == 0.5
    assert config.identity() == RunConfig(name="custom").identity()


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_validate(name):
    """Test every preset loads and carries its name."""
    assert load_run_config(name).name == name


def test_yaml_merges_onto_preset(tmp_path):
    """Test a YAML file overrides only the keys it names."""
    path = tmp_path / "spot.yaml"
    path.write_text(
        "preset: shifted\nenvironment: {spot_price: 2.0}\ngrids: {v_points: 21}\n",
        encoding="utf-8",
    )
    config = load_run_config(path)
    assert config.model.signal.lo == 0.5
    assert config.environment.spot_price == 2.0
    assert config.grids.v_points == 21
    assert config.grids.theta_points == 51


def test_yaml_name_defaults_to_stem(tmp_path):
    """Test a file without a name or preset is named after the file."""
    path = tmp_path / "custom_run.yaml"
    path.write_text("environment: {cost: 2.0}\n", encoding="utf-8")
    config = load_run_config(path)
    assert config.name == "custom_run"
    assert config.environment.cost == 2.0


def test_relative_table_resolves_against_file(tmp_path):
    """Test model.table is read relative to the YAML file."""
    (tmp_path / "table.csv").write_text("theta,v,G,g,dG_dtheta\n", encoding="utf-8")
    path = tmp_path / "tab.yaml"
    path.write_text("model: {family: tabulated, table: table.csv}\n", encoding="utf-8")
    assert load_run_config(path).model.table == tmp_path / "table.csv"


def test_with_overrides_revalidates(small_config):
    """Test dotted overrides apply, None is skipped and invalid values raise."""
    assert small_config.grids.theta_points == 11
    same = small_config.with_overrides(**{"grids.v_points": None})
    assert same.grids.v_points == 21
    with pytest.raises(ConfigError):
        small_config.with_overrides(**{"grids.v_points": 1})
    with pytest.raises(ConfigError):
        small_config.with_overrides(**{"environment.alpha": 1.0})


@pytest.mark.parametrize(
    "model",
    [
        {"signal": {"kind": "beta", "lo": 1.0, "hi": 2.0}},
        {"signal": {"kind": "uniform", "lo": 2.0, "hi": 1.0}},
        {"signal": {"kind": "lognormal"}},
    ],
)
def test_invalid_distributions(model):
    """Test missing parameters, inverted bounds and unknown kinds."""
    with pytest.raises(ConfigError):
        RunConfig(name="x").with_overrides(
            **{"model": {"family": "multiplicative", **model}}
        )


# =============================================================================
# Run IDs
# =============================================================================


def test_run_id_is_deterministic(small_config):
    """Test the run ID ignores output location and worker count."""
    moved = small_config.with_overrides(
        **{"outputs.directory": "elsewhere", "workers": 4}
    )
    assert run_id_for(small_config.identity()) == run_id_for(moved.identity())
    changed = small_config.with_overrides(**{"environment.cost": 2.0})
    assert run_id_for(small_config.identity()) != run_id_for(changed.identity())
    assert len(run_id_for({})) == 12


def test_run_tracer_reset():
    """Test reset restores the previous run ID and ignores stale tokens."""
    outer = RunTracer.set_run_id("outer")
    inner = RunTracer.set_run_id("inner")
    assert RunTracer.get_run_id() == "inner"
    RunTracer.reset_run_id(inner)
    assert RunTracer.get_run_id() == "outer"
    RunTracer.reset_run_id(inner)
    RunTracer.reset_run_id(outer)
    assert len(RunTracer.generate_run_id()) == 12


# =============================================================================
# Logging
# =============================================================================


def test_json_log_lines_carry_run_id(tmp_path):
    """Test solver.jsonl records carry the run ID and structured fields."""
    token = RunTracer.set_run_id("abc123")
    try:
        setup_structured_logging(logging.INFO, tmp_path)
        log_info("solved", profit=0.25, module="clash")
    finally:
        shutdown_logging()
        RunTracer.reset_run_id(token)

    records = [
        json.loads(line)
        for line in (tmp_path / "solver.jsonl").read_text().splitlines()
    ]
    solved = [r for r in records if r["message"] == "solved"]
    assert solved and solved[0]["run_id"] == "abc123"
    assert solved[0]["profit"] == 0.25
    assert solved[0]["field_module"] == "clash"


def test_setup_environment_restores_run_id(tmp_path):
    """Test the startup run ID is scoped to the setup log line only."""
    token = RunTracer.set_run_id("outer")
    try:
        setup_environment(log_dir=str(tmp_path))
        assert RunTracer.get_run_id() == "outer"
    finally:
        shutdown_logging()
        RunTracer.reset_run_id(token)

    records = [
        json.loads(line)
        for line in (tmp_path / "solver.jsonl").read_text().splitlines()
    ]
    startup = [r for r in records if r["message"].startswith("🚀 Environment setup")]
    assert startup and startup[0]["run_id"] == "startup"


# =============================================================================
# Exports and factory
# =============================================================================


def test_csv_float_format(tmp_path):
    """Test floats use 9 significant digits and infinities stay readable."""
    frame = pd.DataFrame({"x": [1 / 3, 2.0, np.inf]})
    path = write_csv(frame, tmp_path / "nested" / "x.csv")
    assert path.read_text() == "x\n0.333333333\n2\ninf\n"


def test_json_is_sorted_and_rounded(tmp_path):
    """Test JSON keys are sorted and floats rounded to 12 digits."""
    payload = {"b": np.float64(2 / 3), "a": [np.int64(1), True]}
    path = write_json(payload, tmp_path / "x.json")
    expected = '{\n  "a": [\n    1,\n    true\n  ],\n  "b": 0.666666666667\n}\n'
    assert path.read_text() == expected


def test_empty_frame_has_columns():
    """Test the header-only frame keeps column order."""
    assert list(empty_frame(["b", "a"]).columns) == ["b", "a"]


def test_factory_builds_example1(small_config):
    """Test the factory reproduces the Example 1 profit and settings."""
    model = build_model(small_config)
    assert model.environment.cost == 1.0
    mech = build_solver(small_config)
    assert mech.seller_profit() == pytest.approx(7 / 36, abs=1e-10)
    assert require_regular(small_config, mech).passed
    settings = verification_settings(small_config, gamma=0.1)
    assert settings.theta_points == 11
    assert settings.gamma == 0.1
    assert settings.revenue_tol == small_config.tolerances.integration


def test_factory_refuses_irregular_signal():
    """Test the mixture preset fails the regularity diagnostic."""
    config = load_run_config("mixture").with_overrides(
        **{"grids.theta_points": 11, "grids.v_points": 21}
    )
    with pytest.raises(AssumptionViolationError) as exc_info:
        require_regular(config, build_solver(config))
    assert not exc_info.value.report.passed


def test_factory_truncnorm_signal():
    """Test a truncated-normal signal solves with positive profit."""
    config = RunConfig.model_validate(
        {
            "model": {
                "family": "multiplicative",
                "signal": {
                    "kind": "truncnorm",
                    "mean": 1.5,
                    "std": 0.3,
                    "lo": 1.0,
                    "hi": 2.0,
                },
            },
            "grids": {"theta_points": 11, "v_points": 21},
        }
    )
    mech = build_solver(config)
    assert require_regular(config, mech).passed
    assert mech.seller_profit() > 0
