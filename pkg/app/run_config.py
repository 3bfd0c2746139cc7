"""
Run Configuration - declarative YAML schema for solve, verify and sweep runs.

A run is described by one YAML file (or a built-in preset name). Every
section has defaults, so ``{}`` is a valid config and equals ``example1``.
"""

from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from model import Environment

from .config import Config


class ConfigError(Exception):
    """Raised for missing, unparsable or invalid run configurations."""


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class DistributionConfig(_Section):
    kind: Literal["uniform", "beta", "truncnorm", "uniform_mixture"] = "uniform"
    lo: float = 0.0
    hi: float = 1.0
    a: Optional[float] = None
    b: Optional[float] = None
    mean: Optional[float] = None
    std: Optional[float] = None
    components: Optional[List[Tuple[float, float, float]]] = None

    @model_validator(mode="after")
    def _parameters_present(self) -> "DistributionConfig":
        required = {
            "beta": ("a", "b"),
            "truncnorm": ("mean", "std"),
            "uniform_mixture": ("components",),
        }.get(self.kind, ())
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.kind} distribution needs {missing}")
        if self.kind != "uniform_mixture" and not self.lo < self.hi:
            raise ValueError(
                f"distribution bounds must satisfy lo < hi: [{self.lo}, {self.hi}]"
            )
        return self


class ModelConfig(_Section):
    family: Literal["example1", "multiplicative", "tabulated"] = "example1"
    signal: DistributionConfig = Field(
        default_factory=lambda: DistributionConfig(kind="uniform", lo=1.0, hi=2.0)
    )
    shock: DistributionConfig = Field(
        default_factory=lambda: DistributionConfig(kind="uniform", lo=0.5, hi=1.0)
    )
    table: Optional[Path] = None

    @model_validator(mode="after")
    def _table_exists(self) -> "ModelConfig":
        if self.family == "tabulated":
            if self.table is None:
                raise ValueError("tabulated family needs a table path")
            if not self.table.exists():
                raise ValueError(f"table not found: {self.table}")
        return self


class EnvironmentConfig(_Section):
    alpha: float = 0.5
    cost: float = 1.0
    gamma: float = 0.0
    spot_price: Optional[float] = None

    @model_validator(mode="after")
    def _valid_environment(self) -> "EnvironmentConfig":
        try:
            self.to_environment()
        except ValidationError as exc:
            raise ValueError(str(exc)) from exc
        return self

    def to_environment(self) -> Environment:
        return Environment(**self.model_dump())


class GridConfig(_Section):
    theta_points: int = Field(default=51, ge=2)
    v_points: int = Field(default=101, ge=2)
    q_oracle_points: int = Field(default=10_000, ge=2)
    oracle_points: int = Field(default=20, ge=2)
    ic1_types: int = Field(default=11, ge=2)
    envelope_points: int = Field(default=11, ge=2)
    refine: int = Field(default=1, ge=1)


class ToleranceConfig(_Section):
    root: float = Field(default_factory=lambda: Config.ROOT_TOL, gt=0)
    integration: float = Field(default=1e-10, gt=0)
    ic: float = Field(default_factory=lambda: Config.IC_TOL, gt=0)
    monotone: float = Field(default_factory=lambda: Config.MONOTONE_TOL, gt=0)
    envelope: float = Field(default=1e-5, gt=0)
    oracle: float = Field(default=1e-9, gt=0)
    profit: float = Field(default=1e-7, gt=0)


class QuadratureConfig(_Section):
    order: int = Field(default_factory=lambda: Config.QUAD_ORDER, ge=1)
    panels: int = Field(default=1, ge=1)
    mode: Literal["exact", "tabulated"] = "exact"


class OutputConfig(_Section):
    directory: Path = Path("outputs")
    formats: List[Literal["csv", "json"]] = Field(
        default_factory=lambda: ["csv", "json"]
    )


class RunConfig(_Section):
    name: str = "custom"
    model: ModelConfig = Field(default_factory=ModelConfig)
    environment: EnvironmentConfig = Field(default_factory=EnvironmentConfig)
    grids: GridConfig = Field(default_factory=GridConfig)
    tolerances: ToleranceConfig = Field(default_factory=ToleranceConfig)
    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)
    outputs: OutputConfig = Field(default_factory=OutputConfig)
    workers: int = Field(default_factory=lambda: Config.WORKERS, ge=1)

    def identity(self) -> Dict[str, Any]:
        """Everything that determines the numbers (not outputs or workers)."""
        return self.model_dump(mode="json", exclude={"outputs", "workers"})

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        """Revalidated copy with dotted-path overrides, e.g. ``grids.v_points=51``."""
        payload = self.model_dump(mode="python")
        for dotted, value in overrides.items():
            if value is None:
                continue
            section, _, key = dotted.rpartition(".")
            target = payload
            for part in filter(None, section.split(".")):
                target = target[part]
            target[key] = value
        return _validate(payload, source=self.name)


PRESETS: Dict[str, Dict[str, Any]] = {
    "example1": {"name": "example1"},
    "shifted": {
        "name": "shifted",
        "model": {
            "family": "multiplicative",
            "signal": {"kind": "uniform", "lo": 0.5, "hi": 1.5},
            "shock": {"kind": "uniform", "lo": 0.5, "hi": 1.0},
        },
    },
    "mixture": {
        "name": "mixture",
        "model": {
            "family": "multiplicative",
            "signal": {
                "kind": "uniform_mixture",
                "components": [[0.45, 1.0, 1.1], [0.45, 1.9, 2.0], [0.10, 1.0, 2.0]],
            },
            "shock": {"kind": "uniform", "lo": 0.5, "hi": 1.0},
        },
    },
}


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _validate(payload: Dict[str, Any], source: str) -> RunConfig:
    try:
        return RunConfig.model_validate(payload)
    except ValidationError as exc:
        raise ConfigError(f"invalid config {source}: {exc}") from exc


def _resolve_table(payload: Dict[str, Any], base_dir: Path) -> None:
    table = payload.get("model", {}).get("table")
    if table and not Path(table).is_absolute():
        payload["model"]["table"] = str(base_dir / table)


def load_run_config(source: Union[str, Path]) -> RunConfig:
    """
    Preset name or YAML path → validated RunConfig.

    A YAML file may start from a preset with ``preset: NAME``; its own keys
    are merged on top. Relative table paths resolve against the file.
    """
    key = str(source)
    if key in PRESETS:
        return _validate(PRESETS[key], source=key)

    path = Path(source)
    if not path.is_file():
        raise ConfigError(f"config not found: {path}")
    try:
        payload = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from exc
    if not isinstance(payload, dict):
        kind = type(payload).__name__
        raise ConfigError(f"config {path} must be a mapping, got {kind}")

    preset = payload.pop("preset", None)
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {preset!r}; choose from {sorted(PRESETS)}"
            )
        payload = _deep_merge(PRESETS[preset], payload)
    payload.setdefault("name", path.stem)
    _resolve_table(payload, path.parent)
    return _validate(payload, source=str(path))
