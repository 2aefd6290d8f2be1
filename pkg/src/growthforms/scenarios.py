"""Built-in growth scenarios.

Each builder packages the fields of one worked setup (density, rate, flux,
source and their spacetime assemblies), the spacetime volume element and
kinematic flux, an integration region, the currents for the singular balance
check and a list of closed-form facts that the numerics must reproduce.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, replace

import numpy as np

from growthforms.config import ScenarioParams
from growthforms.constants import DEFAULT_BUMP_RADIUS, INTERIOR_TOLERANCE
from growthforms.currents import (
    Current,
    DomainRestrictedCurrent,
    SignConvention,
    TestForm,
    WeightedCurvesCurrent,
    curve_source_current,
    make_bump,
    smooth_flux_current,
    source_current,
)
from growthforms.exceptions import ConfigurationError, ScenarioError
from growthforms.exterior import (
    ONE,
    ZERO,
    ChartMap,
    ConstantField,
    DifferentialForm,
    PolynomialField,
    QuotientField,
    ScalarField,
    TimeDependentForm,
    VectorField,
    VolumeElement,
)
from growthforms.geometry import Chain, ChartDomain, ParamCell, QuadratureRule, chain_boundary
from growthforms.kinematics import integrate_worldline, kinematic_flux
from growthforms.logger import get_logger
from growthforms.spacetime import SpacetimeChart, assemble_spacetime_flux, assemble_spacetime_source

logger = get_logger(__name__)

TWO_PI = 2.0 * math.pi
TestSampler = Callable[[int, np.random.Generator], list[TestForm]]


@dataclass(frozen=True)
class ExpectedFact:
    """A closed-form value the scenario's numerics must reproduce."""

    name: str
    expected: float
    tolerance: float
    description: str
    compute: Callable[[], float] = field(repr=False, compare=False)

    def check(self) -> tuple[float, bool]:
        actual = float(self.compute())
        return actual, abs(actual - self.expected) <= self.tolerance


@dataclass(frozen=True)
class BalanceFields:
    """Smooth fields of one extensive property, spatial and assembled."""

    density: TimeDependentForm
    rate: TimeDependentForm
    flux: TimeDependentForm
    source: TimeDependentForm
    spacetime_flux: DifferentialForm
    spacetime_source: DifferentialForm

    @classmethod
    def assemble(
        cls,
        density: TimeDependentForm,
        rate: TimeDependentForm,
        flux: TimeDependentForm,
        source: TimeDependentForm,
    ) -> BalanceFields:
        return cls(
            density,
            rate,
            flux,
            source,
            assemble_spacetime_flux(density, flux),
            assemble_spacetime_source(source),
        )


@dataclass(frozen=True)
class Scenario:
    """Everything one worked setup provides to the checks and the CLI."""

    name: str
    description: str
    spacetime: SpacetimeChart
    fields: BalanceFields | None = None
    volume_element: VolumeElement | None = None
    velocity: VectorField | None = None
    frame_velocity: VectorField | None = None
    region: Chain | None = None
    region_time: float = 0.0
    flux_current: Current | None = None
    source_current: Current | None = None
    full_source_current: Current | None = None
    convention: SignConvention = SignConvention.GENERAL
    seeds: tuple[tuple[float, ...], ...] = ()
    facts: tuple[ExpectedFact, ...] = ()
    test_sampler: TestSampler | None = field(default=None, repr=False)
    interior_test_sampler: TestSampler | None = field(default=None, repr=False)
    analytic: bool = True

    @property
    def chart(self) -> ChartDomain:
        return self.spacetime.chart

    def sample_points(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Uniform spacetime samples for pointwise residuals."""
        return self.chart.sample(count, rng)

    def sample_tests(self, count: int, rng: np.random.Generator) -> list[TestForm]:
        if self.test_sampler is None or count == 0:
            return []
        return self.test_sampler(count, rng)


# ---------------------------------------------------------------------------
# Shared pieces
# ---------------------------------------------------------------------------


def _poly(dim: int, terms: dict[tuple[int, ...], float]) -> PolynomialField:
    """Polynomial on spacetime points; exponent tuples are padded to ``dim`` axes."""
    return PolynomialField({k + (0,) * (dim - len(k)): v for k, v in terms.items()})


def _line_space(p: ScenarioParams) -> ChartDomain:
    return ChartDomain((p.x_bounds,), labels=("x",))


def _polar_space(p: ScenarioParams) -> ChartDomain:
    if p.r_bounds[0] <= 0.0:
        raise ScenarioError("polar chart must exclude r = 0")
    return ChartDomain((p.r_bounds, (0.0, TWO_PI)), (False, True), (0,), ("r", "alpha"))


def _annulus(p: ScenarioParams) -> Chain:
    return Chain.of(ParamCell.box_cell((p.annulus, (0.0, TWO_PI)), (False, True)))


def _polar_volume() -> VolumeElement:
    """``r dt ^ dr ^ dalpha`` on ``(t, r, alpha)``."""
    return VolumeElement(DifferentialForm.basis(3, (0, 1, 2), _poly(3, {(0, 1): 1.0})))


def interior_sampler(chart: ChartDomain, radius: float = DEFAULT_BUMP_RADIUS) -> TestSampler:
    """Bumps placed uniformly with their whole support inside the chart."""
    margin = radius * (1.0 + 1e-6)

    def sample(count: int, rng: np.random.Generator) -> list[TestForm]:
        lo = chart.lower + margin
        hi = chart.upper - margin
        if np.any(lo >= hi):
            raise ScenarioError(f"chart is too small for bumps of radius {radius}")
        return [make_bump(c, radius, domain=chart) for c in rng.uniform(lo, hi, size=(count, chart.dim))]

    return sample


def _worldline_end(v: VectorField, seed: Sequence[float], t_end: float, axis: int) -> float:
    """Coordinate ``axis`` where the time-parameterized worldline from ``seed`` reaches ``t_end``."""
    steps = 1000
    line = integrate_worldline(v, seed, (t_end - seed[0]) / steps, steps + 1, param_end=t_end - seed[0])
    return float(line.end[axis])


def _smooth_currents(
    fields: BalanceFields, spacetime: SpacetimeChart, rule: QuadratureRule | None
) -> tuple[Current, Current]:
    ambient = spacetime.ambient_chain()
    return (
        smooth_flux_current(fields.spacetime_flux, ambient, SignConvention.GENERAL, rule),
        source_current(fields.spacetime_source, ambient, rule),
    )


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def example1(p: ScenarioParams, rule: QuadratureRule | None = None) -> Scenario:
    """Uniform drift on a line: ``Jst = a_t t dt + a_x t dx``."""
    if p.a_x == 0.0:
        raise ScenarioError("a_x = 0 makes the flux space tangent to the time slices; worldlines are not graphs over t")
    spacetime = SpacetimeChart(_line_space(p), p.t_bounds)
    density = TimeDependentForm(1, 1, {(0,): _poly(2, {(1,): p.a_x})})
    rate = TimeDependentForm(1, 1, {(0,): ConstantField(p.a_x)})
    flux = TimeDependentForm(1, 0, {(): _poly(2, {(1,): -p.a_t})})
    source = TimeDependentForm(1, 1, {(0,): ConstantField(p.a_x)})
    fields = BalanceFields.assemble(density, rate, flux, source)
    theta = VolumeElement.standard(2)
    velocity = kinematic_flux(fields.spacetime_flux, theta)
    frame = VectorField((ONE, ConstantField(-p.a_t / p.a_x)))
    flux_current, src = _smooth_currents(fields, spacetime, rule)

    t_lo = p.t_bounds[0]
    seeds = tuple((t_lo, float(x)) for x in np.linspace(*p.x_bounds, 7)[1:-1])

    def slope() -> float:
        line = integrate_worldline(frame, (t_lo, 0.0), 1e-3, 10**6, spacetime.chart)
        return float(np.polyfit(line.points[:, 0], line.points[:, 1], 1)[0])

    def flux_derivative() -> float:
        pts = spacetime.chart.sample(50, np.random.default_rng(0))
        return float(np.max(flux.spatial_derivative().max_abs(pts)))

    facts = (
        ExpectedFact("dJ", 0.0, 1e-12, "the spatial flux is closed", flux_derivative),
        ExpectedFact("worldline_slope", -p.a_t / p.a_x, 1e-6, "worldlines are lines of slope -a_t/a_x", slope),
        ExpectedFact(
            "velocity_t_at_t1",
            p.a_x,
            1e-12,
            "v^t = a_x t at t = 1",
            lambda: float(velocity(np.array([1.0, 0.0]))[0]),
        ),
    )
    return Scenario(
        name="example1",
        description="Line with uniform drift and uniform source (Jst = a_t t dt + a_x t dx)",
        spacetime=spacetime,
        fields=fields,
        volume_element=theta,
        velocity=velocity,
        frame_velocity=frame,
        region=Chain.of(ParamCell.box_cell(((-1.0, 1.0),))),
        region_time=p.region_time,
        flux_current=flux_current,
        source_current=src,
        seeds=seeds,
        facts=facts,
        test_sampler=interior_sampler(spacetime.chart),
    )


def _exp_profile(v0: float) -> ScalarField:
    return ScalarField(
        lambda x: v0 * np.exp(x[..., 1]),
        partials=lambda x: np.stack(
            [np.zeros(x.shape[:-1]), v0 * np.exp(x[..., 1]), np.zeros(x.shape[:-1])], axis=-1
        ),
        label="v0*exp(r)",
    )


def example2(
    p: ScenarioParams,
    rule: QuadratureRule | None = None,
    profile: str | None = None,
    custom: ScalarField | None = None,
) -> Scenario:
    """Radially expanding plane with a cavity: ``J = a_alpha(t, r) dalpha``.

    ``profile`` is ``linear`` (``a = r v0``), ``exponential`` (``a = v0 e**r``)
    or ``custom`` with ``custom`` giving ``a`` on ``(t, r, alpha)``.
    """
    profile = profile or p.growth_profile
    spacetime = SpacetimeChart(_polar_space(p), p.t_bounds)
    if profile == "linear":
        a = _poly(3, {(0, 1): p.v0})
        sigma_coeff: ScalarField = ConstantField(p.v0)
    elif profile == "exponential":
        a = _exp_profile(p.v0)
        sigma_coeff = _exp_profile(p.v0)
    elif profile == "custom":
        if custom is None:
            raise ScenarioError("a custom growth profile needs its a_alpha field")
        a = custom
        sigma_coeff = custom.partial(1)
    else:
        raise ScenarioError(f"unknown growth profile {profile!r}")

    density = TimeDependentForm(2, 2, {(0, 1): _poly(3, {(0, 1): p.rho0})})
    flux = TimeDependentForm(2, 1, {(1,): a})
    source = TimeDependentForm(2, 2, {(0, 1): sigma_coeff})
    fields = BalanceFields.assemble(density, TimeDependentForm.zero(2, 2), flux, source)
    theta = _polar_volume()
    velocity = kinematic_flux(fields.spacetime_flux, theta)
    frame = VectorField((ONE, QuotientField(a, _poly(3, {(0, 1): p.rho0})), ZERO))
    flux_current, src = _smooth_currents(fields, spacetime, rule)

    t_lo, t_hi = p.t_bounds
    seeds = tuple((t_lo, r, 0.5) for r in (p.r0, p.r0 + 0.5, p.r0 + 1.0) if p.r_bounds[0] <= r <= p.r_bounds[1])

    facts: list[ExpectedFact] = [
        ExpectedFact(
            "velocity_t",
            p.rho0,
            1e-12,
            "v^t = rho0",
            lambda: float(velocity(np.array([t_lo, 2.0, 0.0]))[0]),
        )
    ]
    if profile == "linear":
        front = p.r0 + (p.v0 / p.rho0) * (t_hi - t_lo)
        facts += [
            ExpectedFact(
                "velocity_r_at_r2",
                p.v0,
                1e-12,
                "v^r = a_alpha / r = v0",
                lambda: float(velocity(np.array([t_lo, 2.0, 0.0]))[1]),
            ),
            ExpectedFact(
                "cavity_front",
                front,
                1e-6,
                "the cavity boundary moves as r = r0 + (v0/rho0) t",
                lambda: _worldline_end(frame, (t_lo, p.r0, 0.5), t_hi, 1),
            ),
        ]
    elif profile == "exponential":
        facts.append(
            ExpectedFact(
                "source_at_r1",
                p.v0 * math.e,
                1e-12,
                "sigma = v0 e**r dr ^ dalpha",
                lambda: float(source.coeffs[(0, 1)](np.array([t_lo, 1.0, 0.0]))),
            )
        )
    return Scenario(
        name="example2",
        description=f"Expanding cavity in the plane, {profile} growth profile",
        spacetime=spacetime,
        fields=fields,
        volume_element=theta,
        velocity=velocity,
        frame_velocity=frame,
        region=_annulus(p),
        region_time=p.region_time,
        flux_current=flux_current,
        source_current=src,
        seeds=seeds,
        facts=tuple(facts),
        test_sampler=interior_sampler(spacetime.chart),
        analytic=profile != "custom" or custom.has_analytic_partials,  # type: ignore[union-attr]
    )


def example3(p: ScenarioParams, rule: QuadratureRule | None = None) -> Scenario:
    """Growth without a cavity: ``J = rho0 r**2 / (t + t0) dalpha``."""
    if p.t_bounds[0] + p.t0 <= 0.0:
        raise ScenarioError("t + t0 must stay positive on the chart")
    spacetime = SpacetimeChart(_polar_space(p), p.t_bounds)
    shifted_t = _poly(3, {(1,): 1.0, (): p.t0})
    density = TimeDependentForm(2, 2, {(0, 1): _poly(3, {(0, 1): p.rho0})})
    flux = TimeDependentForm(2, 1, {(1,): QuotientField(_poly(3, {(0, 2): p.rho0}), shifted_t)})
    source = TimeDependentForm(2, 2, {(0, 1): QuotientField(_poly(3, {(0, 1): 2.0 * p.rho0}), shifted_t)})
    fields = BalanceFields.assemble(density, TimeDependentForm.zero(2, 2), flux, source)
    theta = _polar_volume()
    velocity = kinematic_flux(fields.spacetime_flux, theta)
    frame = VectorField((ONE, QuotientField(_poly(3, {(0, 1): 1.0}), shifted_t), ZERO))
    flux_current, src = _smooth_currents(fields, spacetime, rule)

    t_lo, t_hi = p.t_bounds
    seeds = tuple((t_lo, r, 0.5) for r in (0.5, 1.0, 1.5) if p.r_bounds[0] <= r <= p.r_bounds[1])
    ray_seed = (t_lo, 1.0, 0.5)

    facts = (
        ExpectedFact(
            "source_at_t0_r1",
            2.0 * p.rho0 / p.t0,
            1e-12,
            "sigma coefficient 2 r rho0 / (t + t0) at t = 0, r = 1",
            lambda: float(fields.spacetime_source.coefficient((0, 1, 2))(np.array([0.0, 1.0, 0.0]))),
        ),
        ExpectedFact(
            "worldline_ray",
            (t_hi + p.t0) / (t_lo + p.t0),
            1e-6,
            "worldlines are rays r = r_seed (t + t0) / (t_seed + t0)",
            lambda: _worldline_end(frame, ray_seed, t_hi, 1),
        ),
    )
    return Scenario(
        name="example3",
        description="Growth filling the plane without a cavity",
        spacetime=spacetime,
        fields=fields,
        volume_element=theta,
        velocity=velocity,
        frame_velocity=frame,
        region=_annulus(p),
        region_time=p.region_time,
        flux_current=flux_current,
        source_current=src,
        seeds=seeds,
        facts=facts,
        test_sampler=interior_sampler(spacetime.chart),
    )


def _example5_weights(preset: str) -> tuple[ScalarField, ScalarField, ScalarField]:
    if preset == "growing":
        return _poly(2, {(1,): 1.0, (): 1.0}), ConstantField(0.5), ConstantField(0.5)
    if preset == "conserving":
        half = _poly(2, {(1,): 0.5, (): 0.5})
        return _poly(2, {(1,): 1.0, (): 1.0}), half, half
    if preset == "constant":
        return ConstantField(2.0), ConstantField(0.5), ConstantField(0.5)
    raise ScenarioError(f"unknown weight preset {preset!r}")


def _check_branch(curves: Sequence[tuple[ParamCell, ScalarField]], branch: np.ndarray) -> None:
    for i, (cell, _) in enumerate(curves):
        ends = [c.location for c, _ in chain_boundary(Chain.of(cell)).cells]
        if not any(np.linalg.norm(e - branch) <= 1e-9 for e in ends):
            raise ScenarioError(f"curve {i + 1} does not meet the branch point {branch.tolist()}")


def example5_reproduction(
    p: ScenarioParams,
    rule: QuadratureRule | None = None,
    curves: Sequence[tuple[ParamCell, ScalarField]] | None = None,
) -> Scenario:
    """A body point splitting in two: weighted curves A->B, B->E2, B->E3."""
    preset = curves is None
    a = np.asarray(p.start_point, dtype=float)
    b = np.asarray(p.branch_point, dtype=float)
    ends = [np.asarray(e, dtype=float) for e in p.end_points]
    if curves is None:
        for point, label in ((a, "start"), *((e, "end") for e in ends)):
            if np.linalg.norm(point - b) == 0.0:
                raise ScenarioError(f"the {label} point coincides with the branch point")
        u1, u2, u3 = _example5_weights(p.example5_weights)
        curves = [
            (ParamCell.segment(a, b), u1),
            (ParamCell.segment(b, ends[0]), u2),
            (ParamCell.segment(b, ends[1]), u3),
        ]
    _check_branch(curves, b)

    corners = np.array([c.corners() for c, _ in curves]).reshape(-1, 2)
    lo = corners.min(axis=0) - 1.0
    hi = corners.max(axis=0) + 1.0
    spacetime = SpacetimeChart(ChartDomain(((lo[1], hi[1]),), labels=("x",)), (lo[0], hi[0]))
    endpoints = [
        c.location
        for cell, _ in curves
        for c, _ in chain_boundary(Chain.of(cell)).cells
        if np.linalg.norm(c.location - b) > 1e-9
    ]

    current = WeightedCurvesCurrent(curves, rule)
    branch_source = curve_source_current(curves, keep_points=[b], rule=rule)
    full_source = curve_source_current(curves, rule=rule)

    def sample(count: int, rng: np.random.Generator) -> list[TestForm]:
        radius = DEFAULT_BUMP_RADIUS
        tests: list[TestForm] = []
        for k in range(min(5, count)):
            tests.append(make_bump(b, radius * (0.6 + 0.2 * k), domain=spacetime.chart, avoid=endpoints))
        while len(tests) < count:
            cell, _ = curves[int(rng.integers(len(curves)))]
            on_curve = cell.map(np.array([[rng.uniform(0.0, 1.0)]]))[0]
            center = on_curve + rng.uniform(-0.5 * radius, 0.5 * radius, size=2)
            if any(np.linalg.norm(center - e) <= radius * 1.05 for e in endpoints):
                continue
            tests.append(make_bump(center, radius, domain=spacetime.chart, avoid=endpoints))
        return tests

    weights = [w for _, w in curves]
    facts: tuple[ExpectedFact, ...] = ()
    if preset:
        atom = {"growing": b[0], "conserving": 0.0, "constant": 1.0}[p.example5_weights]
        facts = (
            ExpectedFact(
                "branch_atom",
                float(atom),
                1e-12,
                "(u1 - u2 - u3)(B), the mass created at the split",
                lambda: float(weights[0](b) - weights[1](b) - weights[2](b)),
            ),
        )
    return Scenario(
        name="example5",
        description=f"Splitting body point with {p.example5_weights} weights",
        spacetime=spacetime,
        flux_current=current,
        source_current=branch_source,
        full_source_current=full_source,
        convention=SignConvention.PLAIN,
        facts=facts,
        test_sampler=sample,
    )


def surface_growth(p: ScenarioParams, rule: QuadratureRule | None = None) -> Scenario:
    """Disc growing at its boundary: ``Jst = rho0 r dr ^ dalpha`` restricted to ``r <= r0 + v0 t``."""
    spacetime = SpacetimeChart(_polar_space(p), p.t_bounds)
    r_min = p.r_bounds[0]
    t_lo, t_hi = p.t_bounds

    def front(t: np.ndarray | float) -> np.ndarray | float:
        return p.r0 + p.v0 * t

    for t in (t_lo, t_hi):
        if not r_min < front(t) < p.r_bounds[1]:
            raise ScenarioError(f"growth front r = {front(t)} at t = {t} leaves the polar chart")

    def shape(u: np.ndarray) -> np.ndarray:
        t, s, alpha = u[..., 0], u[..., 1], u[..., 2]
        return np.stack([t, r_min + s * (front(t) - r_min), alpha], axis=-1)

    def shape_jacobian(u: np.ndarray) -> np.ndarray:
        t, s = u[..., 0], u[..., 1]
        jac = np.zeros(u.shape[:-1] + (3, 3))
        jac[..., 0, 0] = 1.0
        jac[..., 1, 0] = s * p.v0
        jac[..., 1, 1] = front(t) - r_min
        jac[..., 2, 2] = 1.0
        return jac

    body = Chain.of(
        ParamCell(
            (p.t_bounds, (0.0, 1.0), (0.0, TWO_PI)),
            ChartMap(shape, 3, 3, shape_jacobian),
            1,
            (False, False, True),
        )
    )

    density = TimeDependentForm(2, 2, {(0, 1): _poly(3, {(0, 1): p.rho0})})
    zero_flux = TimeDependentForm.zero(2, 1)
    zero_top = TimeDependentForm.zero(2, 2)
    fields = BalanceFields.assemble(density, zero_top, zero_flux, zero_top)
    theta = _polar_volume()
    velocity = kinematic_flux(fields.spacetime_flux, theta)
    current = DomainRestrictedCurrent(fields.spacetime_flux, body, 1, rule)
    surface_source = DomainRestrictedCurrent(fields.spacetime_flux, chain_boundary(body), 1, rule)

    chart = spacetime.chart
    radius = DEFAULT_BUMP_RADIUS
    margin = radius * (1.0 + 1e-6)

    def straddling(count: int, rng: np.random.Generator) -> list[TestForm]:
        tests = []
        for _ in range(count):
            t = rng.uniform(t_lo + margin, t_hi - margin)
            alpha = rng.uniform(margin, TWO_PI - margin)
            r = front(t) + rng.uniform(-0.5 * radius, 0.5 * radius)
            tests.append(make_bump((t, r, alpha), radius, domain=chart))
        return tests

    def interior(count: int, rng: np.random.Generator) -> list[TestForm]:
        tests = []
        for _ in range(count):
            t = rng.uniform(t_lo + margin, t_hi - margin)
            top = front(t - radius) - margin
            if top <= r_min + margin:
                raise ScenarioError("the body is too thin for interior bumps")
            r = rng.uniform(r_min + margin, top)
            alpha = rng.uniform(margin, TWO_PI - margin)
            tests.append(make_bump((t, r, alpha), radius, domain=chart))
        return tests

    inner_bump = interior(1, np.random.default_rng(0))[0]
    facts = (
        ExpectedFact(
            "interior_source",
            0.0,
            INTERIOR_TOLERANCE,
            "no sources inside the body: bd T vanishes on interior bumps",
            lambda: current.boundary()(inner_bump),
        ),
        ExpectedFact(
            "horizontal_worldlines",
            0.0,
            1e-12,
            "v = rho0 d_t, so worldlines keep r and alpha",
            lambda: float(np.max(np.abs(velocity(chart.sample(20, np.random.default_rng(1)))[:, 1:]))),
        ),
    )
    seeds = tuple((t_lo, float(r), 0.5) for r in np.linspace(r_min, p.r0, 4)[1:])
    return Scenario(
        name="surface-growth",
        description="Disc growing by accretion at its moving boundary r = r0 + v0 t",
        spacetime=spacetime,
        fields=fields,
        volume_element=theta,
        velocity=velocity,
        frame_velocity=VectorField((ONE, ZERO, ZERO)),
        region=_annulus(p),
        region_time=p.region_time,
        flux_current=current,
        source_current=surface_source,
        convention=SignConvention.PLAIN,
        seeds=seeds,
        facts=facts,
        test_sampler=straddling,
        interior_test_sampler=interior,
    )


def zero(p: ScenarioParams, rule: QuadratureRule | None = None) -> Scenario:
    """All fields vanish on a line."""
    spacetime = SpacetimeChart(_line_space(p), p.t_bounds)
    fields = BalanceFields.assemble(
        TimeDependentForm.zero(1, 1),
        TimeDependentForm.zero(1, 1),
        TimeDependentForm.zero(1, 0),
        TimeDependentForm.zero(1, 1),
    )
    flux_current, src = _smooth_currents(fields, spacetime, rule)
    return Scenario(
        name="zero",
        description="Vanishing density, flux and source",
        spacetime=spacetime,
        fields=fields,
        volume_element=VolumeElement.standard(2),
        velocity=VectorField.zero(2),
        region=Chain.of(ParamCell.box_cell(((-1.0, 1.0),))),
        region_time=p.region_time,
        flux_current=flux_current,
        source_current=src,
        test_sampler=interior_sampler(spacetime.chart),
    )


ScenarioBuilder = Callable[[ScenarioParams, QuadratureRule | None], Scenario]

SCENARIOS: dict[str, ScenarioBuilder] = {
    "example1": example1,
    "example2": example2,
    "example3": example3,
    "example5": example5_reproduction,
    "surface-growth": surface_growth,
    "zero": zero,
}


def build_scenario(
    name: str,
    params: ScenarioParams | None = None,
    rule: QuadratureRule | None = None,
) -> Scenario:
    """Build a registered scenario."""
    if name not in SCENARIOS:
        raise ConfigurationError(f"Unknown scenario {name!r}; choose one of {', '.join(SCENARIOS)}")
    scenario = SCENARIOS[name](params or ScenarioParams(), rule)
    logger.debug("scenario built", scenario=name, seeds=len(scenario.seeds), facts=len(scenario.facts))
    return scenario


def list_scenarios(params: ScenarioParams | None = None) -> list[Scenario]:
    """All registered scenarios with the given parameters."""
    return [build_scenario(name, params) for name in SCENARIOS]


def perturb_source(scenario: Scenario, amount: float) -> Scenario:
    """Add ``amount`` times the coordinate volume form to the spatial source only."""
    if scenario.fields is None or amount == 0.0:
        return scenario
    n = scenario.spacetime.space_dim
    bump = TimeDependentForm(n, n, {tuple(range(n)): ConstantField(amount)})
    return replace(scenario, fields=replace(scenario.fields, source=scenario.fields.source + bump))
