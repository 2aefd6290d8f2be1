"""Tests for spacetime lifting and assembly."""

import numpy as np
import pytest

from growthforms.exceptions import DegreeError, DimensionMismatchError
from growthforms.exterior import DifferentialForm, PolynomialField, TimeDependentForm, VectorField, contract, exterior_derivative
from growthforms.geometry import ChartDomain
from growthforms.spacetime import (
    SpacetimeChart,
    assemble_spacetime_flux,
    assemble_spacetime_rate,
    assemble_spacetime_source,
    extract_density,
    extract_source,
    lift,
    project_flux,
)


@pytest.fixture
def planar_fields():
    """Density, flux and source on a 2-d body, polynomial in (t, x, y)."""
    rho = TimeDependentForm(2, 2, {(0, 1): PolynomialField({(1, 1, 0): 1.0, (0, 0, 2): 2.0, (2, 0, 0): 0.5})})
    flux = TimeDependentForm(
        2,
        1,
        {
            (0,): PolynomialField({(1, 0, 1): 3.0, (0, 2, 0): -1.0}),
            (1,): PolynomialField({(0, 1, 1): 1.0, (1, 0, 0): 0.25}),
        },
    )
    sigma = TimeDependentForm(2, 2, {(0, 1): PolynomialField({(0, 1, 0): 1.0, (1, 0, 1): -2.0})})
    return rho, flux, sigma


class TestSpacetimeChart:
    """Test the product chart."""

    def test_product_chart(self):
        """Time is prepended to the spatial axes."""
        space = ChartDomain(((1.0, 2.0), (0.0, 6.0)), periodic=(False, True), excluded=(0,), labels=("r", "alpha"))
        chart = SpacetimeChart(space, (0.0, 1.0))
        assert chart.dim == 3
        assert chart.chart.labels == ("t", "r", "alpha")
        assert chart.chart.periodic == (False, False, True)
        assert chart.chart.excluded == (1,)
        assert chart.ambient_chain().dimension == 3

    def test_time_covector(self):
        """dt is the first basis covector and d_t the first basis vector."""
        chart = SpacetimeChart(ChartDomain(((0.0, 1.0),)), (0.0, 1.0))
        pairing = contract(chart.d_t, chart.dt)
        assert pairing.coefficient(())(np.array([0.5, 0.5])) == 1.0


class TestLiftAndProjection:
    """Test the round trip between spatial and spacetime forms."""

    def test_lift_has_no_time_leg(self, planar_fields, rng):
        """d_t _| lift(a) vanishes."""
        _, flux, _ = planar_fields
        pts = rng.uniform(-1, 1, size=(10, 3))
        assert np.max(contract(VectorField.basis(3, 0), lift(flux)).max_abs(pts)) == 0.0

    def test_lift_static_form(self):
        """A plain spatial form lifts to a time-independent spacetime form."""
        form = DifferentialForm.basis(1, (0,), PolynomialField({(1,): 1.0}))
        lifted = lift(form)
        assert lifted.dim == 2
        assert lifted.coefficient((1,))(np.array([7.0, 0.5])) == pytest.approx(0.5)

    def test_project_and_extract(self, planar_fields, rng):
        """Projection recovers the flux and the density from the spacetime flux."""
        rho, flux, sigma = planar_fields
        pts = rng.uniform(-1, 1, size=(10, 3))
        jst = assemble_spacetime_flux(rho, flux)
        for key, values in project_flux(jst).evaluate(pts).items():
            np.testing.assert_allclose(values, flux.coeffs[key](pts), atol=1e-14)
        np.testing.assert_allclose(extract_density(jst).coeffs[(0, 1)](pts), rho.coeffs[(0, 1)](pts))
        s = assemble_spacetime_source(sigma)
        np.testing.assert_allclose(extract_source(s).coeffs[(0, 1)](pts), sigma.coeffs[(0, 1)](pts))

    def test_flux_sign(self):
        """In one dimension Jst = rho dx - j dt."""
        rho = TimeDependentForm(1, 1, {(0,): 2.0})
        flux = TimeDependentForm(1, 0, {(): 5.0})
        jst = assemble_spacetime_flux(rho, flux)
        pt = np.array([0.0, 0.0])
        assert jst.coefficient((0,))(pt) == -5.0
        assert jst.coefficient((1,))(pt) == 2.0

    def test_degree_checks(self, planar_fields):
        """Density and flux degrees are n and n - 1."""
        rho, flux, sigma = planar_fields
        with pytest.raises(DegreeError):
            assemble_spacetime_flux(flux, rho)
        with pytest.raises(DegreeError):
            assemble_spacetime_source(flux)
        with pytest.raises(DegreeError):
            assemble_spacetime_rate(flux)

    def test_dimension_check(self, planar_fields):
        """Density and flux share one spatial chart."""
        rho, _, _ = planar_fields
        with pytest.raises(DimensionMismatchError):
            assemble_spacetime_flux(rho, TimeDependentForm(3, 1))


class TestBalanceEquivalence:
    """The spacetime balance d Jst = s is the spatial balance beta + dJ = sigma."""

    def test_equivalence(self, planar_fields, rng):
        """d Jst - s equals dt ^ (beta + dJ - sigma) for arbitrary fields."""
        rho, flux, sigma = planar_fields
        pts = rng.uniform(-2, 2, size=(25, 3))
        spacetime_defect = exterior_derivative(assemble_spacetime_flux(rho, flux)) - assemble_spacetime_source(sigma)
        spatial_defect = rho.time_derivative() + flux.spatial_derivative() - sigma
        np.testing.assert_allclose(
            spacetime_defect.component_array(pts),
            assemble_spacetime_rate(spatial_defect).component_array(pts),
            atol=1e-12,
        )

    def test_balanced_fields(self, rng):
        """Choosing sigma = beta + dJ makes both defects vanish."""
        rho = TimeDependentForm(1, 1, {(0,): PolynomialField({(1, 2): 1.0})})
        flux = TimeDependentForm(1, 0, {(): PolynomialField({(2, 1): -1.0})})
        sigma = rho.time_derivative() + flux.spatial_derivative()
        pts = rng.uniform(-1, 1, size=(25, 2))
        defect = exterior_derivative(assemble_spacetime_flux(rho, flux)) - assemble_spacetime_source(sigma)
        assert np.max(defect.max_abs(pts)) < 1e-14
