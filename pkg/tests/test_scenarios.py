"""Tests for the built-in scenarios."""

import numpy as np
import pytest

from growthforms.config import ScenarioParams
from growthforms.constants import CURRENT_TOLERANCE, INTERIOR_TOLERANCE, SCENARIO_NAMES
from growthforms.currents import make_bump, verify_current_balance
from growthforms.exceptions import ConfigurationError, ScenarioError
from growthforms.exterior import ScalarField
from growthforms.geometry import ChartDomain, ParamCell
from growthforms.scenarios import (
    SCENARIOS,
    build_scenario,
    example1,
    example2,
    example3,
    example5_reproduction,
    interior_sampler,
    list_scenarios,
    perturb_source,
    surface_growth,
)


class TestRegistry:
    """Test scenario lookup."""

    def test_names_match_constants(self):
        """The registry lists every known scenario in order."""
        assert tuple(SCENARIOS) == SCENARIO_NAMES
        assert [s.name for s in list_scenarios()] == list(SCENARIO_NAMES)

    def test_unknown_scenario(self):
        """Unknown names are configuration errors."""
        with pytest.raises(ConfigurationError) as exc:
            build_scenario("example4")
        assert exc.value.exit_code == 2

    @pytest.mark.parametrize("name", SCENARIO_NAMES)
    def test_facts(self, name):
        """Every closed-form fact is reproduced by the numerics."""
        scenario = build_scenario(name)
        for fact in scenario.facts:
            actual, ok = fact.check()
            assert ok, f"{fact.name}: expected {fact.expected}, got {actual}"

    @pytest.mark.parametrize("name", SCENARIO_NAMES)
    def test_seeds_inside_chart(self, name):
        """Default worldline seeds lie in the spacetime chart."""
        scenario = build_scenario(name)
        for seed in scenario.seeds:
            assert len(seed) == scenario.chart.dim
            assert scenario.chart.contains(np.array(seed))


class TestExample1:
    """Test the line with uniform drift."""

    def test_degenerate_drift(self):
        """a_x = 0 has no worldlines over t."""
        with pytest.raises(ScenarioError) as exc:
            example1(ScenarioParams(a_x=0.0))
        assert exc.value.exit_code == 2

    def test_velocity(self, params):
        """v = (a_x t, -a_t t)."""
        v = example1(params).velocity
        np.testing.assert_allclose(v(np.array([1.5, 0.3])), [3.0, -1.5])


class TestExample2:
    """Test the expanding cavity."""

    def test_profiles(self, params):
        """Unknown and incomplete profiles are rejected."""
        with pytest.raises(ScenarioError):
            example2(params, profile="cubic")
        with pytest.raises(ScenarioError):
            example2(params, profile="custom")

    def test_custom_profile_is_not_analytic(self, params):
        """A custom profile without partials is checked at the FD tolerance."""
        custom = ScalarField(lambda x: x[..., 1] ** 2)
        assert not example2(params, profile="custom", custom=custom).analytic
        assert example2(params, profile="exponential").analytic

    def test_polar_chart(self, params):
        """The chart is (t, r, alpha) with alpha periodic and r = 0 excluded."""
        chart = example2(params).chart
        assert chart.labels == ("t", "r", "alpha")
        assert chart.periodic == (False, False, True)
        assert chart.lower[1] == pytest.approx(0.2)


class TestExample3:
    """Test growth without a cavity."""

    def test_rays(self, params):
        """Frame worldlines are rays through the origin of (t + t0, r)."""
        frame = example3(params).frame_velocity
        pts = np.array([[0.5, 1.0, 0.0], [1.0, 3.0, 1.0]])
        np.testing.assert_allclose(frame(pts)[:, 1], pts[:, 1] / (pts[:, 0] + params.t0))

    def test_negative_shift(self):
        """t + t0 must stay positive."""
        with pytest.raises(ScenarioError):
            example3(ScenarioParams(t0=0.5, t_bounds=(-1.0, 1.0), region_time=0.0))


class TestExample5:
    """Test the splitting body point."""

    def test_endpoint_atoms_are_needed(self):
        """Bumps on the free ends balance only against the full curve boundary."""
        scenario = example5_reproduction(ScenarioParams())
        tests = [make_bump((2.0, 1.0), 0.1), make_bump((0.0, 0.0), 0.1)]
        full = verify_current_balance(scenario.flux_current, scenario.full_source_current, tests, scenario.convention)
        branch_only = verify_current_balance(scenario.flux_current, scenario.source_current, tests, scenario.convention)
        assert full.passed(CURRENT_TOLERANCE)
        assert not branch_only.passed(CURRENT_TOLERANCE)

    def test_no_smooth_fields(self):
        """The curves carry no smooth balance fields."""
        scenario = example5_reproduction(ScenarioParams())
        assert scenario.fields is None
        assert scenario.velocity is None
        assert perturb_source(scenario, 0.1) is scenario

    def test_branch_point_checks(self):
        """Curves must meet the branch point and endpoints must differ from it."""
        with pytest.raises(ScenarioError):
            example5_reproduction(ScenarioParams(start_point=(1.0, 0.0)))
        curves = [(ParamCell.segment([0.0, 0.0], [0.5, 0.0]), ScalarField.constant(1.0))]
        with pytest.raises(ScenarioError):
            example5_reproduction(ScenarioParams(), curves=curves)

    def test_custom_curves_have_no_facts(self):
        """Facts are only known for the weight presets."""
        curves = [
            (ParamCell.segment([0.0, 0.0], [1.0, 0.0]), ScalarField.constant(1.0)),
            (ParamCell.segment([1.0, 0.0], [2.0, 0.5]), ScalarField.constant(1.0)),
        ]
        assert example5_reproduction(ScenarioParams(), curves=curves).facts == ()


class TestSurfaceGrowth:
    """Test accretion at a moving boundary."""

    def test_front_inside_chart(self):
        """The growth front may not leave the polar chart."""
        with pytest.raises(ScenarioError):
            surface_growth(ScenarioParams(r0=3.5))

    def test_straddling_bumps(self, params, rng):
        """Bumps across the front see the surface source."""
        scenario = surface_growth(params)
        tests = scenario.sample_tests(20, rng)
        report = verify_current_balance(scenario.flux_current, scenario.source_current, tests, scenario.convention)
        assert report.passed(CURRENT_TOLERANCE)
        assert max(abs(r.rhs) for r in report.tests) > 1e-3

    @pytest.mark.parametrize("seed", [7, 12345])
    def test_interior_bumps(self, params, seed):
        """Inside the body there is no source."""
        scenario = surface_growth(params)
        boundary = scenario.flux_current.boundary()
        values = [abs(boundary(test)) for test in scenario.interior_test_sampler(20, np.random.default_rng(seed))]
        assert max(values) < INTERIOR_TOLERANCE

    def test_interior_fact(self, params):
        """The interior source fact is judged at the interior bound."""
        fact = next(f for f in surface_growth(params).facts if f.name == "interior_source")
        assert fact.tolerance == INTERIOR_TOLERANCE
        assert fact.check()[1]


class TestSampling:
    """Test samples and perturbations."""

    def test_interior_sampler(self, rng):
        """Interior bumps keep their support inside the chart."""
        chart = ChartDomain(((0.0, 1.0), (0.0, 2.0)))
        for test in interior_sampler(chart, 0.2)(10, rng):
            assert chart.ball_inside(test.support.center, 0.2)
        with pytest.raises(ScenarioError):
            interior_sampler(ChartDomain(((0.0, 0.1),)), 0.1)(1, rng)

    def test_zero_tests(self, params, rng):
        """Asking for no test forms gives none."""
        assert example1(params).sample_tests(0, rng) == []

    def test_perturb_source(self, params):
        """Only the spatial source moves."""
        scenario = example1(params)
        perturbed = perturb_source(scenario, 0.25)
        pt = np.array([1.0, 0.5])
        assert perturbed.fields.source.coeffs[(0,)](pt) == pytest.approx(params.a_x + 0.25)
        assert perturbed.fields.spacetime_source is scenario.fields.spacetime_source
        assert perturb_source(scenario, 0.0) is scenario
