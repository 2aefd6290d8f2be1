"""Tests for chart domains, chains and quadrature."""

import math

import numpy as np
import pytest

from growthforms.exceptions import DegreeError, DimensionMismatchError, DomainError
from growthforms.exterior import ChartMap, DifferentialForm, PolynomialField, ScalarField
from growthforms.geometry import (
    Chain,
    ChartDomain,
    ParamCell,
    QuadratureRule,
    SupportBox,
    chain_boundary,
    integrate,
    reference_rule,
    stokes_residual,
    union,
)

UNIT_SQUARE = ((0.0, 1.0), (0.0, 1.0))


def polar_cell(r_bounds, alpha_bounds, periodic=(False, False)) -> ParamCell:
    def func(u):
        return np.stack([u[..., 0] * np.cos(u[..., 1]), u[..., 0] * np.sin(u[..., 1])], axis=-1)

    def jac(u):
        r, a = u[..., 0], u[..., 1]
        return np.stack(
            [np.stack([np.cos(a), -r * np.sin(a)], axis=-1), np.stack([np.sin(a), r * np.cos(a)], axis=-1)],
            axis=-2,
        )

    return ParamCell((r_bounds, alpha_bounds), ChartMap(func, 2, 2, jac), 1, periodic)


def polynomial_one_form() -> DifferentialForm:
    return DifferentialForm(
        2,
        1,
        {
            (0,): PolynomialField({(2, 1): 1.0, (0, 3): -0.5}),
            (1,): PolynomialField({(1, 1): 2.0, (3, 0): 1.0, (0, 0): 0.25}),
        },
    )


class TestChartDomain:
    """Test chart domains."""

    def test_defaults(self):
        """Labels and periodic flags default per axis."""
        domain = ChartDomain(((0, 1), (0, 2)))
        assert domain.labels == ("x0", "x1")
        assert domain.periodic == (False, False)
        assert domain.dim == 2

    def test_empty_interval(self):
        """An interval with lo >= hi is rejected."""
        with pytest.raises(DomainError):
            ChartDomain(((1.0, 1.0),))

    def test_excluded_axis_needs_positive_bound(self):
        """An excluded axis must start strictly above 0."""
        with pytest.raises(DomainError):
            ChartDomain(((0.0, 1.0),), excluded=(0,))
        assert ChartDomain(((0.1, 1.0),), excluded=(0,)).excluded == (0,)

    def test_mismatched_labels(self):
        """Labels must match the number of axes."""
        with pytest.raises(DimensionMismatchError):
            ChartDomain(((0, 1), (0, 1)), labels=("x",))

    def test_contains_with_periodic_axis(self):
        """Periodic axes accept any coordinate."""
        domain = ChartDomain(((1.0, 2.0), (0.0, 2 * math.pi)), periodic=(False, True))
        mask = domain.contains(np.array([[1.5, 10.0], [2.5, 1.0], [2.0 + 1e-9, 1.0]]), tol=1e-6)
        assert mask.tolist() == [True, False, True]

    def test_contains_dimension(self):
        """Points of the wrong dimension raise."""
        with pytest.raises(DimensionMismatchError):
            ChartDomain(UNIT_SQUARE).contains(np.zeros((2, 3)))

    def test_sample_and_ball(self, rng):
        """Samples stay inside; balls touching the edge are not inside."""
        domain = ChartDomain(UNIT_SQUARE)
        assert domain.contains(domain.sample(100, rng)).all()
        assert domain.ball_inside([0.5, 0.5], 0.2)
        assert not domain.ball_inside([0.1, 0.5], 0.2)


class TestCellsAndChains:
    """Test cells, chains and boundaries."""

    def test_point_cell(self):
        """A point cell has a location; higher cells do not."""
        assert ParamCell.point([0.2, 0.3]).location.tolist() == [0.2, 0.3]
        with pytest.raises(DegreeError):
            _ = ParamCell.box_cell(UNIT_SQUARE).location

    def test_bad_orientation(self):
        """Orientation is +1 or -1."""
        with pytest.raises(ValueError):
            ParamCell(UNIT_SQUARE, ChartMap.identity(2), orientation=0)

    def test_segment_corners(self):
        """A segment maps its endpoints."""
        corners = ParamCell.segment([0.0, 1.0], [2.0, 3.0]).corners()
        np.testing.assert_allclose(corners, [[0.0, 1.0], [2.0, 3.0]])

    def test_square_boundary_of_boundary_is_empty(self):
        """The boundary of the boundary of a square cancels."""
        square = Chain.of(ParamCell.box_cell(UNIT_SQUARE))
        edges = chain_boundary(square)
        assert len(edges.cells) == 4
        assert chain_boundary(edges).is_empty

    def test_segment_boundary(self):
        """The boundary of a segment is end minus start."""
        points = chain_boundary(Chain.of(ParamCell.segment([0.0], [2.0])))
        signed = sorted((float(c.location[0]), w * c.orientation) for c, w in points.cells)
        assert signed == [(0.0, -1.0), (2.0, 1.0)]

    def test_simplify_merges_points(self):
        """Coincident points with opposite weights cancel."""
        chain = Chain.of(ParamCell.point([1.0]), (ParamCell.point([1.0]), -1.0), (ParamCell.point([2.0]), 3.0))
        simplified = chain.simplify()
        assert len(simplified.cells) == 1
        assert simplified.cells[0][1] == 3.0

    def test_periodic_axis_has_no_faces(self):
        """A periodic parameter axis contributes no boundary faces."""
        annulus = Chain.of(polar_cell((1.0, 2.0), (0.0, 2 * math.pi), (False, True)))
        assert len(chain_boundary(annulus).cells) == 2

    def test_point_chain_has_no_boundary(self):
        """Boundaries of 0-chains are undefined."""
        with pytest.raises(DegreeError):
            chain_boundary(Chain.of(ParamCell.point([0.0])))

    def test_combining_mismatched_chains(self):
        """Chains of different dimensions do not add."""
        with pytest.raises(DegreeError):
            Chain.of(ParamCell.point([0.0, 0.0])) + Chain.of(ParamCell.box_cell(UNIT_SQUARE))

    def test_union(self):
        """A union adds the cells of each chain."""
        a = Chain.of(ParamCell.box_cell(((0.0, 1.0),)))
        b = Chain.of(ParamCell.box_cell(((1.0, 3.0),)))
        total = union([a, b, -a])
        assert len(total.cells) == 3
        assert integrate(DifferentialForm.basis(1, (0,)), total) == pytest.approx(2.0)

    def test_empty_inputs(self):
        """Chains need at least one cell to know their dimensions."""
        with pytest.raises(DegreeError, match="Chain.empty"):
            Chain.of()
        with pytest.raises(DegreeError, match="no chains"):
            union([])

    def test_support_count(self):
        """Support windows share one box budget across cell dimensions."""
        rule = QuadratureRule(support_boxes=1728)
        assert [rule.support_count(k) for k in (1, 2, 3)] == [1728, 42, 12]


class TestQuadrature:
    """Test integration of forms over chains."""

    def test_reference_rule(self):
        """Reference weights sum to the unit cube volume."""
        for dim in range(4):
            _, weights = reference_rule(5, dim)
            assert weights.sum() == pytest.approx(1.0)

    def test_polynomial_over_square(self, coarse_rule):
        """The integral of x y dx ^ dy over the unit square is 1/4."""
        form = DifferentialForm.basis(2, (0, 1), PolynomialField({(1, 1): 1.0}))
        assert integrate(form, Chain.of(ParamCell.box_cell(UNIT_SQUARE)), coarse_rule) == pytest.approx(0.25, abs=1e-14)

    def test_orientation(self, coarse_rule):
        """Reversing a cell negates its integral."""
        form = DifferentialForm.basis(2, (0, 1), PolynomialField({(1, 1): 1.0}))
        cell = ParamCell.box_cell(UNIT_SQUARE)
        assert integrate(form, Chain.of(cell.reversed()), coarse_rule) == pytest.approx(-0.25)
        assert integrate(form, Chain.of((cell, -2.0)), coarse_rule) == pytest.approx(-0.5)

    def test_annulus_area(self, coarse_rule):
        """The area of the annulus 1 < r < 2 in polar parameters is 3 pi."""
        annulus = Chain.of(polar_cell((1.0, 2.0), (0.0, 2 * math.pi), (False, True)))
        area = integrate(DifferentialForm.basis(2, (0, 1)), annulus, coarse_rule)
        assert area == pytest.approx(3 * math.pi, rel=1e-10)

    def test_point_evaluation(self):
        """Integrating a 0-form over points evaluates it with weights."""
        chain = Chain.of(ParamCell.point([0.3]), (ParamCell.point([0.7]), 2.0))
        value = integrate(DifferentialForm.scalar(1, PolynomialField({(1,): 1.0})), chain)
        assert value == pytest.approx(1.7)

    def test_degree_mismatch(self):
        """Forms integrate only over chains of their own degree."""
        with pytest.raises(DegreeError):
            integrate(DifferentialForm.basis(2, (0,)), Chain.of(ParamCell.box_cell(UNIT_SQUARE)))

    def test_zero_form_integrates_to_zero(self):
        """The zero form needs no quadrature."""
        assert integrate(DifferentialForm.zero(2, 2), Chain.of(ParamCell.box_cell(UNIT_SQUARE))) == 0.0


class TestStokes:
    """Test the integral Stokes identity on box and mapped cells."""

    def test_square(self, coarse_rule):
        """Stokes holds on a rectangle to rounding."""
        rectangle = Chain.of(ParamCell.box_cell(((0.0, 1.0), (0.0, 2.0))))
        assert stokes_residual(polynomial_one_form(), rectangle, coarse_rule) < 1e-10

    def test_polar_sector(self, coarse_rule):
        """Stokes holds on a curved cell."""
        sector = Chain.of(polar_cell((1.0, 2.0), (0.2, 1.4)))
        assert stokes_residual(polynomial_one_form(), sector, coarse_rule) < 1e-9

    def test_periodic_annulus(self, coarse_rule):
        """Stokes holds on an annulus whose angular faces are glued."""
        annulus = Chain.of(polar_cell((1.0, 2.0), (0.0, 2 * math.pi), (False, True)))
        assert stokes_residual(polynomial_one_form(), annulus, coarse_rule) < 1e-9

    def test_segment(self):
        """The fundamental theorem on a segment: int d(x**2) = 4 over [0, 2]."""
        segment = Chain.of(ParamCell.segment([0.0], [2.0]))
        f = DifferentialForm.scalar(1, PolynomialField({(2,): 1.0}))
        assert stokes_residual(f, segment) < 1e-12

    def test_degree_check(self):
        """Stokes needs a form one degree below the chain."""
        with pytest.raises(DegreeError):
            stokes_residual(DifferentialForm.basis(2, (0, 1)), Chain.of(ParamCell.box_cell(UNIT_SQUARE)))


class TestSupportRestriction:
    """Test quadrature restricted to a known support."""

    @staticmethod
    def compact_form(center, radius) -> DifferentialForm:
        c = np.asarray(center)

        def bump(x):
            rho2 = np.sum((x - c) ** 2, axis=-1)
            return np.clip(radius**2 - rho2, 0.0, None) ** 6

        return DifferentialForm.basis(2, (0, 1), ScalarField(bump))

    def test_restricted_matches_full(self):
        """Restricted and full integration agree with the closed form pi R**14 / 7."""
        center, radius = (0.43, 0.57), 0.25
        form = self.compact_form(center, radius)
        square = Chain.of(ParamCell.box_cell(UNIT_SQUARE))
        exact = math.pi * radius**14 / 7
        full = integrate(form, square)
        restricted = integrate(form, square, support=SupportBox.ball(center, radius))
        assert full == pytest.approx(exact, rel=1e-4)
        assert restricted == pytest.approx(exact, rel=1e-4)
        assert restricted == pytest.approx(full, rel=1e-4)

    def test_far_support(self, coarse_rule):
        """A support away from the chain gives exactly 0."""
        form = self.compact_form((5.0, 5.0), 0.1)
        square = Chain.of(ParamCell.box_cell(UNIT_SQUARE))
        assert integrate(form, square, coarse_rule, SupportBox.ball((5.0, 5.0), 0.1)) == 0.0

    def test_points_outside_support(self):
        """Point cells outside the support contribute nothing."""
        chain = Chain.of(ParamCell.point([0.0, 0.0]), ParamCell.point([1.0, 1.0]))
        value = integrate(DifferentialForm.scalar(2, 1.0), chain, support=SupportBox.ball((1.0, 1.0), 0.1))
        assert value == 1.0

    def test_unrefined_rule(self):
        """Edge refinement can be disabled."""
        center, radius = (0.5, 0.5), 0.25
        rule = QuadratureRule(order=8, subcells=16, support_boxes=64, refine_support_edges=False)
        square = Chain.of(ParamCell.box_cell(UNIT_SQUARE))
        value = integrate(self.compact_form(center, radius), square, rule, SupportBox.ball(center, radius))
        assert value == pytest.approx(math.pi * radius**14 / 7, rel=1e-3)
