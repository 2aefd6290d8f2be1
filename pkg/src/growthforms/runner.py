"""Run orchestration behind the CLI commands."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from growthforms.balance import BalanceReport, at_time, region_balance_residual, spacetime_balance_residual, spatial_balance_residual
from growthforms.config import RunConfig, parse_param_overrides
from growthforms.currents import CurrentBalanceReport, boundary_current, verify_current_balance
from growthforms.exceptions import ConfigurationError, DomainError
from growthforms.geometry import QuadratureRule, integrate
from growthforms.kinematics import Worldline, integrate_worldline
from growthforms.logger import get_logger
from growthforms.reporting import worldline_filename, write_json_report, write_worldline_csv, write_worldlines_svg
from growthforms.scenarios import Scenario, build_scenario, perturb_source

logger = get_logger(__name__)

# CLI flag -> dotted configuration key
FLAG_KEYS = {
    "scenario": "scenario",
    "ode_step": "ode.step",
    "quad_order": "quadrature.order",
    "subcells": "quadrature.subcells",
    "seed": "rng_seed",
    "out_dir": "output.out_dir",
    "bumps": "bumps",
    "samples": "samples",
    "perturb_source": "source_perturbation",
}


def apply_flags(config: RunConfig, params: list[str] | None = None, **flags: Any) -> RunConfig:
    """Overlay CLI flags (``None`` means unset) and ``key=value`` scenario parameters on a config."""
    updates: dict[str, Any] = {}
    for name, value in flags.items():
        if name not in FLAG_KEYS:
            raise ConfigurationError(f"Unknown flag {name}")
        updates[FLAG_KEYS[name]] = str(value) if isinstance(value, Path) else value
    updates.update(parse_param_overrides(params or []))
    return config.with_overrides(updates)


def quadrature_rule(config: RunConfig) -> QuadratureRule:
    q = config.quadrature
    return QuadratureRule(q.order, q.subcells, q.support_boxes, q.refine_support_edges)


def load_scenario(config: RunConfig) -> Scenario:
    """Build the configured scenario, with the configured source perturbation applied."""
    scenario = build_scenario(config.scenario, config.params, quadrature_rule(config))
    return perturb_source(scenario, config.source_perturbation)


# ---------------------------------------------------------------------------
# Worldlines
# ---------------------------------------------------------------------------


def compute_worldlines(config: RunConfig, scenario: Scenario | None = None) -> list[Worldline]:
    """Integrate one worldline per seed (configured seeds, or the scenario's defaults)."""
    scenario = scenario or load_scenario(config)
    if scenario.velocity is None:
        raise ConfigurationError(f"Scenario {scenario.name} has no kinematic flux to integrate")
    seeds = scenario.seeds if config.seeds is None else [tuple(s) for s in config.seeds]
    chart = scenario.chart
    by_time = config.ode.parameterization == "time" and scenario.frame_velocity is not None
    field = scenario.frame_velocity if by_time else scenario.velocity
    assert field is not None

    worldlines = []
    for seed in seeds:
        if len(seed) != chart.dim:
            raise ConfigurationError(f"Seed {list(seed)} has {len(seed)} coordinates, chart has {chart.dim}")
        param_end = chart.upper[0] - seed[0] if by_time else None
        try:
            worldlines.append(
                integrate_worldline(field, seed, config.ode.step, config.ode.max_steps, chart, param_end)
            )
        except DomainError as e:
            raise ConfigurationError(str(e)) from e
    logger.info("worldlines computed", scenario=scenario.name, count=len(worldlines), by_time=by_time)
    return worldlines


def emit_worldlines(config: RunConfig, scenario: Scenario, worldlines: list[Worldline]) -> list[Path]:
    """Write one CSV per worldline and an SVG overview; nothing when there are no worldlines."""
    if not worldlines:
        return []
    out_dir = config.output.out_dir
    labels = scenario.chart.labels
    written = []
    if "csv" in config.output.formats:
        for i, wl in enumerate(worldlines):
            written.append(write_worldline_csv(out_dir / worldline_filename(scenario.name, i), wl, labels))
    if "svg" in config.output.formats:
        written.append(
            write_worldlines_svg(
                out_dir / f"{scenario.name}_worldlines.svg",
                worldlines,
                (labels[0], labels[1]),
                scenario.description,
            )
        )
    return written


# ---------------------------------------------------------------------------
# Balance
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BalanceSummary:
    """Pointwise and region residuals of one scenario with their verdicts."""

    scenario: str
    spatial: BalanceReport
    spacetime: BalanceReport
    region_residual: float | None
    region_scale: float
    region_time: float
    pointwise_tolerance: float
    quadrature_tolerance: float

    @property
    def region_defect(self) -> float | None:
        if self.region_residual is None:
            return None
        return self.region_residual / self.region_scale

    @property
    def passed(self) -> bool:
        region_ok = self.region_defect is None or self.region_defect < self.quadrature_tolerance
        return (
            self.spatial.passed(self.pointwise_tolerance)
            and self.spacetime.passed(self.pointwise_tolerance)
            and region_ok
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "scenario": self.scenario,
            "spatial": {**self.spatial.to_dict(), "passed": self.spatial.passed(self.pointwise_tolerance)},
            "spacetime": {**self.spacetime.to_dict(), "passed": self.spacetime.passed(self.pointwise_tolerance)},
            "region": {
                "residual": self.region_residual,
                "defect": self.region_defect,
                "time": self.region_time,
            },
            "tolerances": {"pointwise": self.pointwise_tolerance, "quadrature": self.quadrature_tolerance},
            "passed": self.passed,
        }


def compute_balance(config: RunConfig, scenario: Scenario | None = None) -> BalanceSummary:
    """Spatial, spacetime and region residuals on seeded random samples."""
    scenario = scenario or load_scenario(config)
    fields = scenario.fields
    if fields is None:
        raise ConfigurationError(f"Scenario {scenario.name} has no smooth balance fields; use the currents check")
    rng = np.random.default_rng(config.rng_seed)
    points = scenario.sample_points(config.samples, rng)
    spatial = spatial_balance_residual(fields.rate, fields.flux, fields.source, points, config.rng_seed)
    spacetime = spacetime_balance_residual(fields.spacetime_flux, fields.spacetime_source, points, config.rng_seed)

    region_residual = None
    scale = 1.0
    if scenario.region is not None:
        rule = quadrature_rule(config)
        t = scenario.region_time
        region_residual = region_balance_residual(fields.rate, fields.flux, fields.source, scenario.region, t, rule)
        scale = max(1.0, abs(integrate(at_time(fields.source, t), scenario.region, rule)))

    tolerances = config.tolerances
    summary = BalanceSummary(
        scenario.name,
        spatial,
        spacetime,
        region_residual,
        scale,
        scenario.region_time,
        tolerances.pointwise if scenario.analytic else tolerances.pointwise_fd,
        tolerances.quadrature,
    )
    logger.info(
        "balance computed",
        scenario=scenario.name,
        spatial=spatial.max_residual,
        spacetime=spacetime.max_residual,
        region=summary.region_defect,
    )
    return summary


# ---------------------------------------------------------------------------
# Currents
# ---------------------------------------------------------------------------


def compute_currents(
    config: RunConfig,
    scenario: Scenario | None = None,
    shortcut: bool = False,
) -> CurrentBalanceReport:
    """``bd T = S`` on ``config.bumps`` seeded bump test forms."""
    scenario = scenario or load_scenario(config)
    if scenario.flux_current is None or scenario.source_current is None:
        raise ConfigurationError(f"Scenario {scenario.name} has no currents")
    rng = np.random.default_rng(config.rng_seed)
    tests = scenario.sample_tests(config.bumps, rng)
    return verify_current_balance(
        scenario.flux_current,
        scenario.source_current,
        tests,
        scenario.convention,
        shortcut,
    )


def compute_interior_sources(config: RunConfig, scenario: Scenario, shortcut: bool = False) -> list[float]:
    """``|bd T(phi)|`` on bumps inside a source-free body; empty when the scenario has no such sampler."""
    if scenario.interior_test_sampler is None or scenario.flux_current is None or config.bumps == 0:
        return []
    rng = np.random.default_rng(config.rng_seed + 1)
    boundary = boundary_current(scenario.flux_current, shortcut)
    values = [abs(boundary(test)) for test in scenario.interior_test_sampler(config.bumps, rng)]
    logger.info("interior sources computed", scenario=scenario.name, count=len(values), worst=max(values))
    return values


def currents_payload(
    config: RunConfig,
    scenario: Scenario,
    report: CurrentBalanceReport,
    interior: list[float] | None = None,
) -> dict[str, Any]:
    tolerance = config.tolerances.current
    payload = {
        **report.to_dict(),
        "scenario": scenario.name,
        "seed": config.rng_seed,
        "tolerance": tolerance,
        "passed": report.passed(tolerance),
    }
    if interior:
        worst = max(interior)
        interior_ok = worst < config.tolerances.interior
        payload["interior"] = {
            "max": worst,
            "samples": len(interior),
            "tolerance": config.tolerances.interior,
            "passed": interior_ok,
        }
        payload["passed"] = payload["passed"] and interior_ok
    return payload


def write_report(config: RunConfig, name: str, payload: dict[str, Any]) -> Path | None:
    if "json" not in config.output.formats:
        return None
    return write_json_report(config.output.out_dir / name, payload)
