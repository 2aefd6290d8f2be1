"""Tests for kinematic flux fields and worldlines."""

import math
from itertools import combinations

import numpy as np
import pytest

from growthforms.constants import MEMBERSHIP_TOLERANCE
from growthforms.exceptions import DegenerateVolumeElementError, DegreeError, DimensionMismatchError, DomainError
from growthforms.exterior import DifferentialForm, PolynomialField, VectorField, VolumeElement, contract
from growthforms.geometry import ChartDomain
from growthforms.kinematics import (
    WorldlineStatus,
    flux_space_membership,
    integrate_worldline,
    integrate_worldlines,
    kinematic_flux,
    resample_by_arclength,
    volume_element_invariance,
    worldline_image_distance,
)
from growthforms.scenarios import example2

GROWTH = VectorField((1.0, PolynomialField({(0, 1): 1.0})))


def random_flux(rng, dim: int) -> DifferentialForm:
    coeffs = {}
    for key in combinations(range(dim), dim - 1):
        exps = tuple(int(e) for e in rng.integers(0, 3, size=dim))
        coeffs[key] = PolynomialField({exps: float(rng.normal()), (0,) * dim: float(rng.normal())})
    return DifferentialForm(dim, dim - 1, coeffs)


def positive_volume(dim: int) -> VolumeElement:
    exps = tuple(2 if i == dim - 1 else 0 for i in range(dim))
    return VolumeElement.standard(dim, PolynomialField({(0,) * dim: 1.0, exps: 1.0}))


class TestKinematicFlux:
    """Test v _| theta = J."""

    @pytest.mark.parametrize("dim", [2, 3, 4])
    def test_reconstruction(self, rng, dim):
        """Contracting the kinematic flux into theta gives back the flux form."""
        flux = random_flux(rng, dim)
        theta = positive_volume(dim)
        v = kinematic_flux(flux, theta)
        pts = rng.uniform(-1, 1, size=(30, dim))
        np.testing.assert_allclose(contract(v, theta.form).component_array(pts), flux.component_array(pts), atol=1e-12)

    def test_one_dimensional_growth(self):
        """With Jst = rho dx - j dt and theta = dt ^ dx, v = (rho, j)."""
        jst = DifferentialForm(2, 1, {(0,): -3.0, (1,): 2.0})
        v = kinematic_flux(jst, VolumeElement.standard(2))
        np.testing.assert_allclose(v(np.array([0.4, 0.1])), [2.0, 3.0])

    def test_flux_space_membership(self, rng):
        """The kinematic flux lies in the flux space of its form."""
        flux = random_flux(rng, 3)
        v = kinematic_flux(flux, positive_volume(3))
        assert flux_space_membership(v, flux, rng.uniform(-1, 1, size=(30, 3)))
        assert not flux_space_membership(VectorField.basis(3, 0), DifferentialForm.basis(3, (0, 1)), np.zeros((1, 3)))

    def test_worldline_points_in_flux_space(self, params):
        """Every sampled point of a worldline has its velocity in the flux space."""
        scenario = example2(params, profile="exponential")
        wl = integrate_worldline(scenario.velocity, (0.0, 1.0, 0.5), step=1e-3, max_steps=500, domain=scenario.chart)
        assert len(wl) > 10
        assert flux_space_membership(scenario.velocity, scenario.fields.spacetime_flux, wl.points, MEMBERSHIP_TOLERANCE)

    def test_degenerate_volume_element(self):
        """A volume element vanishing at an evaluation point raises."""
        theta = VolumeElement.standard(2, PolynomialField({(0, 1): 1.0}))
        v = kinematic_flux(DifferentialForm.basis(2, (1,)), theta)
        assert v(np.array([0.0, 2.0]))[0] == pytest.approx(0.5)
        with pytest.raises(DegenerateVolumeElementError):
            v(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_degree_check(self):
        """Only (d-1)-forms have kinematic fluxes."""
        with pytest.raises(DegreeError):
            kinematic_flux(DifferentialForm.basis(3, (0,)), VolumeElement.standard(3))
        with pytest.raises(DimensionMismatchError):
            kinematic_flux(DifferentialForm.basis(2, (0,)), VolumeElement.standard(3))

    def test_volume_element_invariance(self, rng):
        """Rescaling theta rescales v without turning it."""
        flux = random_flux(rng, 3)
        theta = VolumeElement.standard(3)
        pts = rng.uniform(-1, 1, size=(50, 3))
        assert volume_element_invariance(flux, theta, positive_volume(3), pts) < 1e-12
        assert volume_element_invariance(flux, theta, theta.scaled(-2.5), pts) < 1e-12


class TestWorldlineIntegration:
    """Test RK4 worldlines."""

    def test_exponential_growth(self):
        """dx/dt = x from x = 1 reaches e at t = 1."""
        wl = integrate_worldline(GROWTH, [0.0, 1.0], step=0.01, param_end=1.0)
        assert wl.status is WorldlineStatus.COMPLETED
        assert len(wl) == 101
        assert wl.end[0] == pytest.approx(1.0, abs=1e-12)
        assert wl.end[1] == pytest.approx(math.e, abs=1e-8)
        assert wl.seed.tolist() == [0.0, 1.0]

    def test_backwards(self):
        """A negative step integrates towards the past."""
        wl = integrate_worldline(GROWTH, [1.0, math.e], step=-0.01, param_end=0.5)
        assert wl.end[0] == pytest.approx(0.5, abs=1e-12)
        assert wl.end[1] == pytest.approx(math.exp(0.5), abs=1e-8)
        assert wl.params[-1] == pytest.approx(-0.5)

    def test_partial_final_step(self):
        """A step that does not divide the span ends exactly on it."""
        domain = ChartDomain(((0.0, 1.0), (0.0, 3.0)))
        wl = integrate_worldline(GROWTH, [0.0, 1.0], step=0.6, param_end=1.0, domain=domain)
        assert wl.status is WorldlineStatus.COMPLETED
        assert len(wl) == 3
        assert wl.params[-1] == pytest.approx(1.0)
        assert wl.end[0] == pytest.approx(1.0, abs=1e-12)
        assert wl.end[1] == pytest.approx(math.e, abs=1e-2)

    def test_fourth_order(self):
        """Halving the step cuts the error of dx/dt = x sixteenfold."""
        errors = [
            abs(integrate_worldline(GROWTH, [0.0, 1.0], step=h, param_end=1.0).end[1] - math.e) for h in (0.1, 0.05)
        ]
        assert math.log2(errors[0] / errors[1]) == pytest.approx(4.0, abs=0.2)

    def test_max_steps(self):
        """Without an end parameter the integration stops after max_steps."""
        wl = integrate_worldline(GROWTH, [0.0, 1.0], step=0.01, max_steps=10)
        assert wl.status is WorldlineStatus.MAX_STEPS
        assert len(wl) == 11

    def test_leaves_domain(self):
        """The curve stops at the last point inside the chart."""
        domain = ChartDomain(((0.0, 1.0), (0.0, 2.0)))
        wl = integrate_worldline(GROWTH, [0.0, 1.0], step=0.01, param_end=1.0, domain=domain)
        assert wl.status is WorldlineStatus.LEFT_DOMAIN
        assert wl.end[1] <= 2.0 + 1e-6
        assert wl.end[0] == pytest.approx(math.log(2.0), abs=0.011)

    def test_seed_outside_domain(self):
        """Seeds must lie in the chart."""
        domain = ChartDomain(((0.0, 1.0), (0.0, 2.0)))
        with pytest.raises(DomainError):
            integrate_worldline(GROWTH, [0.0, 3.0], domain=domain)

    def test_bad_arguments(self):
        """Seed shape and step are validated."""
        with pytest.raises(DimensionMismatchError):
            integrate_worldline(GROWTH, [0.0, 1.0, 2.0])
        with pytest.raises(ValueError):
            integrate_worldline(GROWTH, [0.0, 1.0], step=0.0)

    def test_many_seeds(self):
        """Each seed gets its own worldline."""
        wls = integrate_worldlines(GROWTH, [[0.0, 1.0], [0.0, 2.0]], step=0.05, param_end=0.5)
        assert [len(w) for w in wls] == [11, 11]
        assert wls[1].end[1] == pytest.approx(2 * math.exp(0.5), abs=1e-6)


class TestWorldlineImages:
    """Test comparison of worldline images."""

    def test_resample_straight_line(self):
        """Resampling a segment gives equally spaced points."""
        pts = resample_by_arclength(np.array([[0.0, 0.0], [0.1, 0.0], [1.0, 0.0]]), 11)
        np.testing.assert_allclose(pts[:, 0], np.linspace(0.0, 1.0, 11))
        assert resample_by_arclength(np.array([[1.0, 2.0]]), 3).tolist() == [[1.0, 2.0]] * 3

    def test_step_independence(self):
        """Worldlines of one field at two step sizes have the same image."""
        fine = integrate_worldline(GROWTH, [0.0, 1.0], step=0.001, param_end=1.0)
        coarse = integrate_worldline(GROWTH, [0.0, 1.0], step=0.02, param_end=1.0)
        assert worldline_image_distance(fine, coarse) < 2e-3

    def test_volume_element_rescaling(self):
        """theta and (1 + t**2) theta give worldlines with the same image."""
        flux = DifferentialForm(2, 1, {(0,): PolynomialField({(0, 1): -1.0}), (1,): 1.0})
        theta = VolumeElement.standard(2)
        slow = theta.scaled(PolynomialField({(0, 0): 1.0, (2, 0): 1.0}))
        domain = ChartDomain(((0.0, 1.0), (0.0, 3.0)))
        first = integrate_worldline(kinematic_flux(flux, theta), [0.0, 1.0], step=1e-3, domain=domain, param_end=1.0)
        second = integrate_worldline(kinematic_flux(flux, slow), [0.0, 1.0], step=1e-3, max_steps=2000, domain=domain)
        assert first.status is WorldlineStatus.COMPLETED
        assert second.status is WorldlineStatus.LEFT_DOMAIN
        assert second.times[-1] > 0.99
        assert worldline_image_distance(first, second) < 1e-5

    def test_parallel_rays(self):
        """Horizontal rays half a unit apart are half a unit apart."""
        horizontal = VectorField.basis(2, 0)
        a = integrate_worldline(horizontal, [0.0, 0.0], step=0.1, param_end=1.0)
        b = integrate_worldline(horizontal, [0.0, 0.5], step=0.1, param_end=1.0)
        assert worldline_image_distance(a, b) == pytest.approx(0.5, abs=1e-9)
