"""Run configuration using Pydantic Settings."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Literal

import yaml
from pydantic import BaseModel, Field, PositiveFloat, PositiveInt, ValidationError, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from growthforms.constants import (
    CURRENT_TOLERANCE,
    DEFAULT_BUMPS,
    DEFAULT_LOG_BACKUPS,
    DEFAULT_LOG_LEVEL,
    DEFAULT_LOG_MAX_SIZE,
    DEFAULT_MAX_STEPS,
    DEFAULT_ODE_STEP,
    DEFAULT_OUT_DIR,
    DEFAULT_QUAD_ORDER,
    DEFAULT_RNG_SEED,
    DEFAULT_SAMPLES,
    DEFAULT_SCENARIO,
    DEFAULT_SUBCELLS,
    DEFAULT_SUPPORT_BOXES,
    DEFAULT_USER_CONFIG_DIR,
    INTERIOR_TOLERANCE,
    POINTWISE_FD_TOLERANCE,
    POINTWISE_TOLERANCE,
    QUADRATURE_TOLERANCE,
    SCENARIO_NAMES,
)
from growthforms.exceptions import ConfigurationError

Interval = tuple[float, float]
Point2 = tuple[float, float]


def _check_interval(name: str, interval: Interval) -> None:
    if not interval[0] < interval[1]:
        raise ValueError(f"{name} must have lower < upper, got {interval}")


class ScenarioParams(BaseModel):
    """Constants shared by the built-in scenarios."""

    a_t: float = 1.0
    a_x: float = 2.0
    rho0: PositiveFloat = 1.0
    v0: float = 1.0
    r0: PositiveFloat = 1.0
    t0: PositiveFloat = 1.0
    growth_profile: Literal["linear", "exponential"] = "linear"

    # Charts
    t_bounds: Interval = (0.0, 2.0)
    x_bounds: Interval = (-2.0, 2.0)
    r_bounds: Interval = (0.2, 4.0)

    # Regions used by integral checks
    annulus: Interval = (1.0, 2.0)
    region_time: float = 1.0

    # Branching curves
    start_point: Point2 = (0.0, 0.0)
    branch_point: Point2 = (1.0, 0.0)
    end_points: tuple[Point2, Point2] = ((2.0, 1.0), (2.0, -1.0))
    example5_weights: Literal["growing", "conserving", "constant"] = "growing"

    @model_validator(mode="after")
    def check_charts(self) -> ScenarioParams:
        """Intervals are ordered and the polar chart stays away from r = 0."""
        for name in ("t_bounds", "x_bounds", "r_bounds", "annulus"):
            _check_interval(name, getattr(self, name))
        if self.r_bounds[0] <= 0.0:
            raise ValueError("polar chart must exclude r = 0 (r_bounds lower bound > 0)")
        if not (self.r_bounds[0] <= self.annulus[0] and self.annulus[1] <= self.r_bounds[1]):
            raise ValueError("annulus must lie inside r_bounds")
        if not self.t_bounds[0] <= self.region_time <= self.t_bounds[1]:
            raise ValueError("region_time must lie inside t_bounds")
        return self


class QuadratureConfig(BaseModel):
    """Composite Gauss-Legendre settings."""

    order: PositiveInt = DEFAULT_QUAD_ORDER
    subcells: PositiveInt = DEFAULT_SUBCELLS
    support_boxes: PositiveInt = DEFAULT_SUPPORT_BOXES
    refine_support_edges: bool = True


class OdeConfig(BaseModel):
    """Worldline integration settings."""

    step: PositiveFloat = DEFAULT_ODE_STEP
    max_steps: PositiveInt = DEFAULT_MAX_STEPS
    parameterization: Literal["flux", "time"] = "time"


class ToleranceConfig(BaseModel):
    """Pass/fail thresholds; pointwise ones for analytic and FD partials."""

    pointwise: PositiveFloat = POINTWISE_TOLERANCE
    pointwise_fd: PositiveFloat = POINTWISE_FD_TOLERANCE
    quadrature: PositiveFloat = QUADRATURE_TOLERANCE
    current: PositiveFloat = CURRENT_TOLERANCE
    interior: PositiveFloat = INTERIOR_TOLERANCE


class OutputConfig(BaseModel):
    """Output configuration."""

    out_dir: Path = DEFAULT_OUT_DIR
    formats: list[Literal["csv", "svg", "json"]] = Field(default_factory=lambda: ["csv", "svg", "json"])


class LoggingConfig(BaseModel):
    """Logging configuration."""

    level: str = DEFAULT_LOG_LEVEL
    structured: bool = False
    log_file: Path | None = None
    max_size: str = DEFAULT_LOG_MAX_SIZE
    backup_count: int = DEFAULT_LOG_BACKUPS

    @field_validator("level")
    @classmethod
    def check_level(cls, value: str) -> str:
        level = value.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {value!r}")
        return level


class RunConfig(BaseSettings):
    """Everything a CLI run needs."""

    model_config = SettingsConfigDict(
        env_prefix="GROWTHFORMS_",
        env_nested_delimiter="__",
        extra="ignore",
    )

    scenario: str = DEFAULT_SCENARIO
    params: ScenarioParams = Field(default_factory=ScenarioParams)
    seeds: list[list[float]] | None = None
    rng_seed: int = DEFAULT_RNG_SEED
    samples: PositiveInt = DEFAULT_SAMPLES
    bumps: int = Field(default=DEFAULT_BUMPS, ge=0)
    source_perturbation: float = 0.0
    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)
    ode: OdeConfig = Field(default_factory=OdeConfig)
    tolerances: ToleranceConfig = Field(default_factory=ToleranceConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    @field_validator("scenario")
    @classmethod
    def check_scenario(cls, value: str) -> str:
        if value not in SCENARIO_NAMES:
            raise ValueError(f"unknown scenario {value!r}; choose one of {', '.join(SCENARIO_NAMES)}")
        return value

    @classmethod
    def from_file(cls, path: Path) -> RunConfig:
        """Load a JSON (or YAML) configuration document."""
        if not path.exists():
            raise ConfigurationError(f"Configuration file not found: {path}")
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ConfigurationError(f"Cannot read configuration {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigurationError(f"Configuration {path} must be a JSON object")
        return build_config(data)

    def to_file(self, path: Path) -> None:
        """Write the configuration as an indented JSON document."""
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.model_dump_json(indent=2) + "\n", encoding="utf-8")

    def with_overrides(self, updates: dict[str, Any]) -> RunConfig:
        """Return a validated copy with dotted keys replaced (``params.v0`` etc.)."""
        data = self.model_dump(mode="json")
        for dotted, value in updates.items():
            if value is None:
                continue
            target = data
            keys = dotted.split(".")
            for key in keys[:-1]:
                if not isinstance(target.get(key), dict):
                    raise ConfigurationError(f"Unknown configuration key: {dotted}")
                target = target[key]
            if keys[-1] not in target:
                raise ConfigurationError(f"Unknown configuration key: {dotted}")
            target[keys[-1]] = value
        return build_config(data)


def build_config(data: dict[str, Any]) -> RunConfig:
    """Validate a raw mapping, reporting problems as configuration errors."""
    try:
        return RunConfig(**data)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()
        )
        raise ConfigurationError(f"Invalid configuration: {problems}") from e


def parse_param_overrides(pairs: list[str]) -> dict[str, Any]:
    """Turn ``key=value`` strings into ``{"params.key": value}``; values are parsed as YAML scalars."""
    updates: dict[str, Any] = {}
    for pair in pairs:
        key, sep, raw = pair.partition("=")
        if not sep or not key.strip():
            raise ConfigurationError(f"Expected key=value, got {pair!r}")
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Cannot parse value for {key}: {raw!r}") from e
        updates[f"params.{key.strip()}"] = value
    return updates


def find_config_file() -> Path | None:
    """Find configuration file in standard locations."""
    search_paths = [
        Path.cwd() / "growthforms.json",
        DEFAULT_USER_CONFIG_DIR / "config.json",
    ]

    for path in search_paths:
        if path.exists():
            return path

    return None


def load_config(config_path: Path | None = None) -> RunConfig:
    """Load configuration from file or return defaults."""
    if config_path:
        return RunConfig.from_file(config_path)

    found_path = find_config_file()
    if found_path:
        return RunConfig.from_file(found_path)

    return build_config({})
