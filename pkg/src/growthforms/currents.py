"""De Rham currents, bump test forms and the singular balance law ``bd T = S``.

A current of degree ``r`` is a linear functional on compactly supported
``r``-forms. Every variant here is evaluated by quadrature; when the test form
is a :class:`TestForm`, its support ball is passed down so that quadrature only
visits the subcells the bump touches.
"""

from __future__ import annotations

import abc
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, TypeAlias

import numpy as np
from numpy.typing import ArrayLike

from growthforms.constants import DEFAULT_BUMP_AMPLITUDE, DEFAULT_BUMP_RADIUS
from growthforms.exceptions import DegreeError, DimensionMismatchError, DomainError
from growthforms.exterior import (
    DifferentialForm,
    FloatArray,
    ScalarField,
    exterior_derivative,
    wedge,
)
from growthforms.geometry import (
    DEFAULT_RULE,
    Chain,
    ChartDomain,
    ParamCell,
    QuadratureRule,
    SupportBox,
    chain_boundary,
    integrate,
)
from growthforms.logger import get_logger

logger = get_logger(__name__)


# ---------------------------------------------------------------------------
# Bump test forms
# ---------------------------------------------------------------------------


class _BumpProfile:
    """``A e q(s)`` with ``q(s) = exp(-1/(1-s))``, ``s = |x-c|**2 / rho**2``, zero for ``s >= 1``."""

    def __init__(self, center: FloatArray, radius: float, amplitude: float) -> None:
        self.center = center
        self.radius = radius
        self.scale = amplitude * np.e

    def offsets(self, x: FloatArray) -> tuple[FloatArray, FloatArray, FloatArray]:
        d = x - self.center
        s = np.sum(d * d, axis=-1) / self.radius**2
        inside = s < 1.0
        return d, np.where(inside, s, 0.0), inside

    @staticmethod
    def q(s: FloatArray) -> FloatArray:
        return np.exp(-1.0 / (1.0 - s))


class BumpField(ScalarField):
    """Standard exponential bump with exact derivatives up to second order."""

    def __init__(self, center: ArrayLike, radius: float, amplitude: float = 1.0) -> None:
        self.profile = _BumpProfile(np.asarray(center, dtype=float), float(radius), float(amplitude))
        super().__init__(self._value, label="bump")

    def _value(self, x: FloatArray) -> FloatArray:
        _, s, inside = self.profile.offsets(x)
        return np.where(inside, self.profile.scale * self.profile.q(s), 0.0)

    @property
    def has_analytic_partials(self) -> bool:
        return True

    def partial(self, axis: int) -> ScalarField:
        return BumpGradientField(self.profile, axis)


class BumpGradientField(ScalarField):
    def __init__(self, profile: _BumpProfile, axis: int) -> None:
        self.profile = profile
        self.axis = axis
        super().__init__(self._value, label=f"d{axis}(bump)")

    def _value(self, x: FloatArray) -> FloatArray:
        p = self.profile
        d, s, inside = p.offsets(x)
        dq = -p.q(s) / (1.0 - s) ** 2
        return np.where(inside, p.scale * dq * 2.0 * d[..., self.axis] / p.radius**2, 0.0)

    @property
    def has_analytic_partials(self) -> bool:
        return True

    def partial(self, axis: int) -> ScalarField:
        return BumpHessianField(self.profile, self.axis, axis)


class BumpHessianField(ScalarField):
    """Second derivative; built from the sorted axis pair so mixed partials agree bitwise."""

    def __init__(self, profile: _BumpProfile, first: int, second: int) -> None:
        self.profile = profile
        self.pair = (min(first, second), max(first, second))
        super().__init__(self._value, label=f"d{self.pair}(bump)")

    def _value(self, x: FloatArray) -> FloatArray:
        p = self.profile
        i, j = self.pair
        d, s, inside = p.offsets(x)
        q = p.q(s)
        r2 = p.radius**2
        dq = -q / (1.0 - s) ** 2
        ddq = q * (2.0 * s - 1.0) / (1.0 - s) ** 4
        value = ddq * (2.0 * d[..., i] / r2) * (2.0 * d[..., j] / r2)
        if i == j:
            value = value + dq * 2.0 / r2
        return np.where(inside, p.scale * value, 0.0)


@dataclass(frozen=True)
class TestForm:
    """Bump 0-form, or bump times ``dx^covector_axis`` for degree 1."""

    __test__ = False

    center: tuple[float, ...]
    radius: float = DEFAULT_BUMP_RADIUS
    degree: int = 0
    covector_axis: int | None = None
    amplitude: float = DEFAULT_BUMP_AMPLITUDE

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def support(self) -> SupportBox:
        return SupportBox.ball(self.center, self.radius)

    @property
    def bump(self) -> BumpField:
        return BumpField(self.center, self.radius, self.amplitude)

    def as_form(self) -> DifferentialForm:
        if self.degree == 0:
            return DifferentialForm.scalar(self.dim, self.bump)
        assert self.covector_axis is not None
        return DifferentialForm.basis(self.dim, (self.covector_axis,), self.bump)

    def __call__(self, x: ArrayLike) -> FloatArray:
        return self.bump(x)


def make_bump(
    center: ArrayLike,
    radius: float = DEFAULT_BUMP_RADIUS,
    degree: int = 0,
    covector_axis: int | None = None,
    amplitude: float = DEFAULT_BUMP_AMPLITUDE,
    domain: ChartDomain | None = None,
    avoid: Sequence[ArrayLike] = (),
) -> TestForm:
    """Build a bump test form, checking its support against the chart and excluded points."""
    c = tuple(float(v) for v in np.asarray(center, dtype=float))
    if radius <= 0.0:
        raise DomainError(f"bump radius must be positive, got {radius}")
    if degree not in (0, 1):
        raise DegreeError(f"bump test forms have degree 0 or 1, got {degree}")
    if degree == 1 and (covector_axis is None or not 0 <= covector_axis < len(c)):
        raise DegreeError(f"a 1-form bump needs a covector axis in [0, {len(c)}), got {covector_axis}")
    if domain is not None:
        if domain.dim != len(c):
            raise DimensionMismatchError(f"bump center of dimension {len(c)} in a {domain.dim}-dimensional chart")
        if not domain.ball_inside(c, radius):
            raise DomainError(f"bump support around {list(c)} (radius {radius}) leaves the chart")
    for point in avoid:
        if np.linalg.norm(np.asarray(point, dtype=float) - np.asarray(c)) <= radius:
            raise DomainError(f"bump support around {list(c)} touches the excluded point {list(point)}")
    return TestForm(c, float(radius), degree, covector_axis if degree == 1 else None, float(amplitude))


# ---------------------------------------------------------------------------
# Currents
# ---------------------------------------------------------------------------


TestInput: TypeAlias = DifferentialForm | TestForm


class SignConvention(str, Enum):
    """Sign in front of the smooth flux current ``T(psi) = sign * int Jst ^ psi``."""

    GENERAL = "general"
    PLAIN = "plain"

    def factor(self, space_dim: int) -> int:
        if self is SignConvention.GENERAL:
            return (-1) ** (space_dim - 1)
        return 1


class Current(abc.ABC):
    """Linear functional on compactly supported forms of a fixed degree."""

    def __init__(self, degree: int, dim: int) -> None:
        if not 0 <= degree <= dim:
            raise DegreeError(f"current degree {degree} is not valid in dimension {dim}")
        self.degree = degree
        self.dim = dim

    @abc.abstractmethod
    def _evaluate(self, form: DifferentialForm, support: SupportBox | None) -> float:
        """Value on a form of the current's degree."""

    def evaluate(self, test: TestInput, support: SupportBox | None = None) -> float:
        if isinstance(test, TestForm):
            form, support = test.as_form(), test.support
        else:
            form = test
        if form.degree != self.degree:
            raise DegreeError(f"a {self.degree}-current cannot act on a {form.degree}-form")
        if form.dim != self.dim:
            raise DimensionMismatchError(f"current in dimension {self.dim}, form in dimension {form.dim}")
        return self._evaluate(form, support)

    __call__ = evaluate

    def boundary(self) -> Current:
        """``bd T (psi) = T(d psi)``."""
        return BoundaryCurrent(self)

    def boundary_shortcut(self) -> Current:
        """A closed-form representation of the boundary; the definition unless a variant knows better."""
        return self.boundary()

    def __add__(self, other: Current) -> Current:
        return CombinationCurrent(((self, 1.0), (other, 1.0)))

    def __neg__(self) -> Current:
        return CombinationCurrent(((self, -1.0),))

    def __sub__(self, other: Current) -> Current:
        return CombinationCurrent(((self, 1.0), (other, -1.0)))

    def __mul__(self, factor: float) -> Current:
        return CombinationCurrent(((self, float(factor)),))

    __rmul__ = __mul__


class DomainRestrictedCurrent(Current):
    """``T(psi) = sign * int_D form ^ psi`` over a chain ``D`` of full dimension in its chart."""

    def __init__(
        self,
        form: DifferentialForm,
        domain: Chain,
        sign: int = 1,
        rule: QuadratureRule | None = None,
    ) -> None:
        if form.dim != domain.ambient_dim:
            raise DimensionMismatchError(f"form on dimension {form.dim}, domain in dimension {domain.ambient_dim}")
        super().__init__(domain.dimension - form.degree, form.dim)
        self.form = form
        self.domain = domain
        self.sign = sign
        self.rule = rule or DEFAULT_RULE

    def _evaluate(self, form: DifferentialForm, support: SupportBox | None) -> float:
        return self.sign * integrate(wedge(self.form, form), self.domain, self.rule, support)

    def boundary_shortcut(self) -> Current:
        """Stokes on ``D``: ``(-1)**p sign (int_{bd D} form ^ psi - int_D d(form) ^ psi)``."""
        if self.degree == 0:
            raise DegreeError("the boundary of a 0-current is not defined")
        p_sign = (-1) ** self.form.degree
        surface = DomainRestrictedCurrent(self.form, chain_boundary(self.domain), self.sign * p_sign, self.rule)
        interior = DomainRestrictedCurrent(exterior_derivative(self.form), self.domain, -self.sign * p_sign, self.rule)
        return surface + interior


class FormInducedCurrent(DomainRestrictedCurrent):
    """``T(psi) = sign * int phi ^ psi`` over the whole chart.

    Test forms are assumed compactly supported inside the chart, so the
    boundary shortcut is the current induced by ``(-1)**(n-r-1) d phi``.
    """

    def __init__(
        self,
        ambient: Chain,
        phi: DifferentialForm,
        sign: int = 1,
        rule: QuadratureRule | None = None,
    ) -> None:
        super().__init__(phi, ambient, sign, rule)

    @property
    def phi(self) -> DifferentialForm:
        return self.form

    def boundary_shortcut(self) -> Current:
        if self.degree == 0:
            raise DegreeError("the boundary of a 0-current is not defined")
        n, r = self.dim, self.degree
        return FormInducedCurrent(self.domain, exterior_derivative(self.phi), self.sign * (-1) ** (n - r - 1), self.rule)


class ChainInducedCurrent(Current):
    """Integration over an oriented chain."""

    def __init__(self, chain: Chain, rule: QuadratureRule | None = None) -> None:
        super().__init__(chain.dimension, chain.ambient_dim)
        self.chain = chain
        self.rule = rule or DEFAULT_RULE

    def _evaluate(self, form: DifferentialForm, support: SupportBox | None) -> float:
        return integrate(form, self.chain, self.rule, support)

    def boundary_shortcut(self) -> Current:
        if self.degree == 0:
            raise DegreeError("the boundary of a 0-current is not defined")
        return ChainInducedCurrent(chain_boundary(self.chain), self.rule)


WeightedCurve = tuple[ParamCell, ScalarField]


class WeightedCurvesCurrent(Current):
    """``T(omega) = sum_i int_{D_i} u_i omega`` over oriented curves ``D_i``."""

    def __init__(self, curves: Sequence[WeightedCurve], rule: QuadratureRule | None = None) -> None:
        if not curves:
            raise DegreeError("a weighted-curve current needs at least one curve")
        for cell, _ in curves:
            if cell.param_dim != 1:
                raise DegreeError(f"curves are 1-cells, got a {cell.param_dim}-cell")
        super().__init__(1, curves[0][0].target_dim)
        self.curves = tuple(curves)
        self.rule = rule or DEFAULT_RULE

    def _evaluate(self, form: DifferentialForm, support: SupportBox | None) -> float:
        return sum(integrate(form * weight, Chain.of(cell), self.rule, support) for cell, weight in self.curves)

    def boundary_shortcut(self) -> Current:
        return curve_source_current(self.curves, rule=self.rule)


class CombinationCurrent(Current):
    """Finite linear combination of currents of one degree."""

    def __init__(self, terms: Sequence[tuple[Current, float]]) -> None:
        if not terms:
            raise DegreeError("an empty combination has no degree")
        first = terms[0][0]
        for current, _ in terms:
            if (current.degree, current.dim) != (first.degree, first.dim):
                raise DegreeError("combined currents must share degree and dimension")
        super().__init__(first.degree, first.dim)
        self.terms = tuple((c, float(w)) for c, w in terms)

    def _evaluate(self, form: DifferentialForm, support: SupportBox | None) -> float:
        return sum(w * c._evaluate(form, support) for c, w in self.terms)

    def boundary_shortcut(self) -> Current:
        return CombinationCurrent(tuple((c.boundary_shortcut(), w) for c, w in self.terms))


class BoundaryCurrent(Current):
    """The boundary by definition: evaluation on ``d psi``."""

    def __init__(self, parent: Current) -> None:
        if parent.degree == 0:
            raise DegreeError("the boundary of a 0-current is not defined")
        super().__init__(parent.degree - 1, parent.dim)
        self.parent = parent

    def _evaluate(self, form: DifferentialForm, support: SupportBox | None) -> float:
        return self.parent._evaluate(exterior_derivative(form), support)


class FunctionalCurrent(Current):
    """Wraps an arbitrary linear functional ``(form, support) -> value``."""

    def __init__(
        self,
        degree: int,
        dim: int,
        func: Callable[[DifferentialForm, SupportBox | None], float],
        label: str = "functional",
    ) -> None:
        super().__init__(degree, dim)
        self.func = func
        self.label = label

    def _evaluate(self, form: DifferentialForm, support: SupportBox | None) -> float:
        return float(self.func(form, support))


def eval_current(current: Current, test: TestInput) -> float:
    return current.evaluate(test)


def boundary_current(current: Current, shortcut: bool = False) -> Current:
    """``bd T``, either by definition or through the variant's closed form."""
    return current.boundary_shortcut() if shortcut else current.boundary()


def smooth_flux_current(
    spacetime_flux: DifferentialForm,
    ambient: Chain,
    convention: SignConvention = SignConvention.GENERAL,
    rule: QuadratureRule | None = None,
) -> FormInducedCurrent:
    """1-current of a smooth spacetime flux; under the general sign its boundary is ``psi -> int s ^ psi``."""
    n = spacetime_flux.dim - 1
    return FormInducedCurrent(ambient, spacetime_flux, convention.factor(n), rule)


def source_current(
    spacetime_source: DifferentialForm, ambient: Chain, rule: QuadratureRule | None = None
) -> DomainRestrictedCurrent:
    """0-current ``phi -> int s ^ phi`` of a smooth source."""
    return DomainRestrictedCurrent(spacetime_source, ambient, 1, rule)


def _near_any(x: FloatArray, points: Sequence[ArrayLike], tol: float = 1e-9) -> bool:
    return any(np.linalg.norm(x - np.asarray(p, dtype=float)) <= tol for p in points)


def curve_source_current(
    curves: Sequence[WeightedCurve],
    keep_points: Sequence[ArrayLike] | None = None,
    rule: QuadratureRule | None = None,
) -> FunctionalCurrent:
    """Boundary of a weighted-curve current: endpoint atoms minus the line terms ``int du_i ^ phi``.

    With ``keep_points`` only atoms located at those points are kept.
    """
    rule = rule or DEFAULT_RULE
    dim = curves[0][0].target_dim
    pieces = []
    for cell, weight in curves:
        chain = Chain.of(cell)
        du = exterior_derivative(DifferentialForm.scalar(dim, weight))
        atoms = [
            (p.location, w * p.orientation)
            for p, w in chain_boundary(chain).cells
            if keep_points is None or _near_any(p.location, keep_points)
        ]
        pieces.append((chain, weight, du, atoms))

    def source(form: DifferentialForm, support: SupportBox | None) -> float:
        phi = form.coefficient(())
        total = 0.0
        for chain, weight, du, atoms in pieces:
            for x, w in atoms:
                total += w * float(weight(x)) * float(phi(x))
            total -= integrate(wedge(du, form), chain, rule, support)
        return total

    return FunctionalCurrent(0, dim, source, label="curve source")


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TestResult:
    """One test form's comparison."""

    __test__ = False

    center: tuple[float, ...]
    radius: float
    lhs: float
    rhs: float

    @property
    def defect(self) -> float:
        return abs(self.lhs - self.rhs) / max(1.0, abs(self.rhs))

    def to_dict(self) -> dict[str, Any]:
        return {
            "center": list(self.center),
            "radius": self.radius,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "defect": self.defect,
        }


@dataclass(frozen=True)
class CurrentBalanceReport:
    """Outcome of checking ``bd T = S`` against a list of bumps."""

    convention: str
    tests: tuple[TestResult, ...] = field(default_factory=tuple)

    @property
    def vacuous(self) -> bool:
        return not self.tests

    @property
    def max_defect(self) -> float:
        return max((t.defect for t in self.tests), default=0.0)

    def passed(self, tolerance: float) -> bool:
        return self.max_defect < tolerance

    def to_dict(self) -> dict[str, Any]:
        return {
            "convention": self.convention,
            "tests": [t.to_dict() for t in self.tests],
            "max_defect": self.max_defect,
            "vacuous": self.vacuous,
        }


def verify_current_balance(
    current: Current,
    expected_source: Current,
    tests: Sequence[TestForm],
    convention: SignConvention | str = SignConvention.GENERAL,
    shortcut: bool = False,
) -> CurrentBalanceReport:
    """Compare ``bd T(phi)`` with ``S(phi)`` for every bump ``phi``.

    The defect per bump is ``|lhs - rhs| / max(1, |rhs|)``.
    """
    if current.degree != 1:
        raise DegreeError(f"the balance check takes a 1-current, got degree {current.degree}")
    if expected_source.degree != 0:
        raise DegreeError(f"the expected source must be a 0-current, got degree {expected_source.degree}")
    boundary = boundary_current(current, shortcut)
    results = []
    for test in tests:
        if test.degree != 0:
            raise DegreeError("balance test forms must be 0-form bumps")
        results.append(TestResult(test.center, test.radius, boundary(test), expected_source(test)))
    label = convention.value if isinstance(convention, SignConvention) else str(convention)
    report = CurrentBalanceReport(label, tuple(results))
    logger.info("current balance", tests=len(results), max_defect=report.max_defect, convention=label)
    return report
