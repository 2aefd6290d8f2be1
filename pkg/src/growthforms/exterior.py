"""Differential forms on a single coordinate chart.

Forms are sparse maps from strictly increasing multi-indices to scalar
coefficient fields. Fields are evaluated on arrays of points with shape
``(..., dim)`` and return arrays of shape ``(...)``. Derivatives are analytic
whenever the fields know them (sums, products, quotients, polynomials,
user supplied gradients) and fall back to central finite differences
otherwise.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from types import MappingProxyType
from typing import TypeAlias

import numpy as np
from numpy.typing import ArrayLike, NDArray

from growthforms.constants import DEFAULT_FD_STEP
from growthforms.exceptions import (
    DegenerateFieldError,
    DegenerateVolumeElementError,
    DegreeError,
    DimensionMismatchError,
)

FloatArray = NDArray[np.float64]
PointFunction = Callable[[FloatArray], ArrayLike]
MultiIndex = tuple[int, ...]
Coefficient: TypeAlias = "ScalarField | float | int"


def as_points(x: ArrayLike) -> FloatArray:
    """Coerce to a float array of points; a single point is a 1-d array."""
    return np.asarray(x, dtype=float)


def _fill(values: ArrayLike, shape: tuple[int, ...]) -> FloatArray:
    arr = np.asarray(values, dtype=float)
    if arr.shape != shape:
        arr = np.broadcast_to(arr, shape).copy()
    return arr


def permutation_sign(axes: Iterable[int]) -> int:
    """Sign of the permutation sorting ``axes``; 0 when an axis repeats."""
    seq = list(axes)
    if len(set(seq)) != len(seq):
        return 0
    inversions = sum(1 for i, j in itertools.combinations(range(len(seq)), 2) if seq[i] > seq[j])
    return -1 if inversions % 2 else 1


def canonicalize(axes: Iterable[int]) -> tuple[int, MultiIndex]:
    """Return ``(sign, sorted_axes)`` for an unsorted multi-index."""
    seq = tuple(int(a) for a in axes)
    return permutation_sign(seq), tuple(sorted(seq))


def multi_indices(dim: int, degree: int) -> list[MultiIndex]:
    """All strictly increasing multi-indices of a given length, in lexicographic order."""
    return list(itertools.combinations(range(dim), degree))


# ---------------------------------------------------------------------------
# Scalar fields
# ---------------------------------------------------------------------------


class ScalarField:
    """Smooth real function on a chart.

    Args:
        func: maps points ``(..., d)`` to values ``(...)``.
        partials: optional analytic gradient, points ``(..., d)`` to ``(..., d)``.
        fd_step: relative central-difference step used when ``partials`` is absent.
        label: short name for reprs and logs.
    """

    is_zero = False

    def __init__(
        self,
        func: PointFunction,
        partials: PointFunction | None = None,
        *,
        fd_step: float = DEFAULT_FD_STEP,
        label: str = "f",
    ) -> None:
        self._func = func
        self._partials = partials
        self.fd_step = fd_step
        self.label = label

    def __call__(self, x: ArrayLike) -> FloatArray:
        pts = as_points(x)
        return _fill(self._evaluate(pts), pts.shape[:-1])

    def _evaluate(self, pts: FloatArray) -> ArrayLike:
        return self._func(pts)

    @property
    def has_analytic_partials(self) -> bool:
        return self._partials is not None

    def partial(self, axis: int) -> ScalarField:
        """Partial derivative along ``axis`` as a new field."""
        if self._partials is not None:
            grad = self._partials
            return ScalarField(
                lambda x: np.asarray(grad(x), dtype=float)[..., axis],
                fd_step=self.fd_step,
                label=f"d{axis}({self.label})",
            )
        return FiniteDifferenceField(self, axis)

    def gradient(self, x: ArrayLike) -> FloatArray:
        pts = as_points(x)
        return np.stack([self.partial(i)(pts) for i in range(pts.shape[-1])], axis=-1)

    # Algebra -------------------------------------------------------------

    def __add__(self, other: Coefficient) -> ScalarField:
        other = as_field(other)
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        return SumField((self, other))

    __radd__ = __add__

    def __neg__(self) -> ScalarField:
        return self * -1.0

    def __sub__(self, other: Coefficient) -> ScalarField:
        return self + (-as_field(other))

    def __rsub__(self, other: Coefficient) -> ScalarField:
        return as_field(other) + (-self)

    def __mul__(self, other: Coefficient) -> ScalarField:
        other = as_field(other)
        if self.is_zero or other.is_zero:
            return ZERO
        if isinstance(other, ConstantField) and other.value == 1.0:
            return self
        if isinstance(self, ConstantField) and self.value == 1.0:
            return other
        if isinstance(self, ConstantField) and isinstance(other, ConstantField):
            return ConstantField(self.value * other.value)
        return ProductField(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other: Coefficient) -> ScalarField:
        other = as_field(other)
        if isinstance(other, ConstantField):
            if other.value == 0.0:
                raise DegenerateFieldError(f"division of {self.label} by the zero constant")
            return self * (1.0 / other.value)
        return QuotientField(self, other)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.label})"

    @staticmethod
    def constant(value: float) -> ScalarField:
        return ConstantField(value)


class ConstantField(ScalarField):
    """Field with the same value everywhere."""

    def __init__(self, value: float) -> None:
        super().__init__(lambda x: self.value, label=f"{value:g}")
        self.value = float(value)

    @property
    def is_zero(self) -> bool:  # type: ignore[override]
        return self.value == 0.0

    @property
    def has_analytic_partials(self) -> bool:
        return True

    def partial(self, axis: int) -> ScalarField:
        return ZERO


ZERO = ConstantField(0.0)
ONE = ConstantField(1.0)


def as_field(value: Coefficient) -> ScalarField:
    if isinstance(value, ScalarField):
        return value
    return ConstantField(float(value))


class SumField(ScalarField):
    def __init__(self, terms: tuple[ScalarField, ...]) -> None:
        self.terms = terms
        super().__init__(self._sum, label="+".join(t.label for t in terms))

    def _sum(self, x: FloatArray) -> FloatArray:
        total = np.zeros(x.shape[:-1])
        for term in self.terms:
            total = total + term(x)
        return total

    @property
    def has_analytic_partials(self) -> bool:
        return all(t.has_analytic_partials for t in self.terms)

    def partial(self, axis: int) -> ScalarField:
        result: ScalarField = ZERO
        for term in self.terms:
            result = result + term.partial(axis)
        return result


class ProductField(ScalarField):
    def __init__(self, left: ScalarField, right: ScalarField) -> None:
        self.left = left
        self.right = right
        super().__init__(lambda x: self.left(x) * self.right(x), label=f"({left.label})*({right.label})")

    @property
    def has_analytic_partials(self) -> bool:
        return self.left.has_analytic_partials and self.right.has_analytic_partials

    def partial(self, axis: int) -> ScalarField:
        return self.left.partial(axis) * self.right + self.left * self.right.partial(axis)


class QuotientField(ScalarField):
    """``num / den``; evaluation raises when ``den`` vanishes at a point."""

    def __init__(
        self,
        num: ScalarField,
        den: ScalarField,
        error: type[DegenerateFieldError] = DegenerateFieldError,
    ) -> None:
        self.num = num
        self.den = den
        self.error = error
        super().__init__(self._divide, label=f"({num.label})/({den.label})")

    def _divide(self, x: FloatArray) -> FloatArray:
        den = self.den(x)
        if np.any(den == 0.0):
            raise self.error(f"denominator {self.den.label} vanishes at an evaluation point")
        return self.num(x) / den

    @property
    def has_analytic_partials(self) -> bool:
        return self.num.has_analytic_partials and self.den.has_analytic_partials

    def partial(self, axis: int) -> ScalarField:
        top = self.num.partial(axis) * self.den - self.num * self.den.partial(axis)
        if top.is_zero:
            return ZERO
        return QuotientField(top, self.den * self.den, self.error)


class FiniteDifferenceField(ScalarField):
    """Central difference of ``base`` along ``axis`` with step ``fd_step * max(1, |x|)``."""

    def __init__(self, base: ScalarField, axis: int) -> None:
        self.base = base
        self.axis = axis
        super().__init__(self._difference, fd_step=base.fd_step, label=f"fd{axis}({base.label})")

    def _difference(self, x: FloatArray) -> FloatArray:
        h = self.fd_step * np.maximum(1.0, np.abs(x[..., self.axis]))
        plus = x.copy()
        minus = x.copy()
        plus[..., self.axis] += h
        minus[..., self.axis] -= h
        return (self.base(plus) - self.base(minus)) / (2.0 * h)

    @property
    def has_analytic_partials(self) -> bool:
        return False


class PolynomialField(ScalarField):
    """Multivariate polynomial ``sum c * prod x_i**e_i`` with exact partials of every order."""

    def __init__(self, terms: Mapping[tuple[int, ...], float]) -> None:
        self.terms = {tuple(int(e) for e in k): float(c) for k, c in terms.items() if c != 0.0}
        super().__init__(self._polynomial, label="poly")

    def _polynomial(self, x: FloatArray) -> FloatArray:
        total = np.zeros(x.shape[:-1])
        for exps, c in self.terms.items():
            term = np.full(x.shape[:-1], c)
            for axis, e in enumerate(exps):
                if e:
                    term = term * x[..., axis] ** e
            total = total + term
        return total

    @property
    def has_analytic_partials(self) -> bool:
        return True

    def partial(self, axis: int) -> ScalarField:
        out: dict[tuple[int, ...], float] = {}
        for exps, c in self.terms.items():
            if axis < len(exps) and exps[axis] > 0:
                lowered = list(exps)
                lowered[axis] -= 1
                out[tuple(lowered)] = out.get(tuple(lowered), 0.0) + c * exps[axis]
        if not out:
            return ZERO
        return PolynomialField(out)


class EmbeddedField(ScalarField):
    """Field on a sub-chart read through the coordinates ``axes`` of a larger chart."""

    def __init__(self, base: ScalarField, axes: tuple[int, ...]) -> None:
        self.base = base
        self.axes = axes
        super().__init__(lambda x: self.base(x[..., list(self.axes)]), fd_step=base.fd_step, label=base.label)

    @property
    def has_analytic_partials(self) -> bool:
        return self.base.has_analytic_partials

    def partial(self, axis: int) -> ScalarField:
        if axis not in self.axes:
            return ZERO
        inner = self.base.partial(self.axes.index(axis))
        if inner.is_zero:
            return ZERO
        return EmbeddedField(inner, self.axes)


class FrozenField(ScalarField):
    """Restriction of ``base`` to the slice where coordinate ``axis`` equals ``value``."""

    def __init__(self, base: ScalarField, axis: int, value: float) -> None:
        self.base = base
        self.axis = axis
        self.value = float(value)
        super().__init__(self._restrict, fd_step=base.fd_step, label=f"{base.label}|x{axis}={value:g}")

    def _restrict(self, x: FloatArray) -> FloatArray:
        return self.base(np.insert(x, self.axis, self.value, axis=-1))

    @property
    def has_analytic_partials(self) -> bool:
        return self.base.has_analytic_partials

    def partial(self, axis: int) -> ScalarField:
        inner = self.base.partial(axis if axis < self.axis else axis + 1)
        if inner.is_zero:
            return ZERO
        return FrozenField(inner, self.axis, self.value)


# ---------------------------------------------------------------------------
# Forms and vector fields
# ---------------------------------------------------------------------------


class DifferentialForm:
    """Degree-``degree`` form on a ``dim``-dimensional chart.

    Keys may be given unsorted; they are sorted with the permutation sign folded
    into the coefficient. Absent keys and structurally zero coefficients are zero.
    """

    __slots__ = ("dim", "degree", "_coeffs")

    def __init__(
        self,
        dim: int,
        degree: int,
        coeffs: Mapping[Iterable[int], Coefficient] | None = None,
    ) -> None:
        if dim < 0 or not 0 <= degree <= dim:
            raise DegreeError(f"degree {degree} is not valid on a {dim}-dimensional chart")
        self.dim = dim
        self.degree = degree
        merged: dict[MultiIndex, ScalarField] = {}
        for key, value in (coeffs or {}).items():
            sign, index = canonicalize(key)
            if len(index) != degree:
                raise DegreeError(f"multi-index {index} does not have length {degree}")
            if index and index[-1] >= dim:
                raise DimensionMismatchError(f"axis {index[-1]} out of range for dimension {dim}")
            field = as_field(value)
            if sign == 0 or field.is_zero:
                continue
            term = field if sign == 1 else -field
            merged[index] = merged[index] + term if index in merged else term
        self._coeffs = {k: v for k, v in merged.items() if not v.is_zero}

    @classmethod
    def zero(cls, dim: int, degree: int) -> DifferentialForm:
        return cls(dim, degree)

    @classmethod
    def scalar(cls, dim: int, value: Coefficient) -> DifferentialForm:
        return cls(dim, 0, {(): value})

    @classmethod
    def basis(cls, dim: int, axes: Iterable[int], coefficient: Coefficient = 1.0) -> DifferentialForm:
        """``coefficient * dx^{a1} ^ ... ^ dx^{ar}``."""
        axes = tuple(axes)
        return cls(dim, len(axes), {axes: coefficient})

    @property
    def coeffs(self) -> Mapping[MultiIndex, ScalarField]:
        return MappingProxyType(self._coeffs)

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def coefficient(self, axes: Iterable[int]) -> ScalarField:
        sign, index = canonicalize(axes)
        field = self._coeffs.get(index, ZERO)
        return field if sign >= 0 else -field

    def evaluate(self, points: ArrayLike) -> dict[MultiIndex, FloatArray]:
        pts = as_points(points)
        return {k: f(pts) for k, f in self._coeffs.items()}

    def component_array(self, points: ArrayLike) -> FloatArray:
        """Dense coefficients ``(..., C(dim, degree))`` in ``multi_indices`` order."""
        pts = as_points(points)
        columns = [
            self._coeffs[k](pts) if k in self._coeffs else np.zeros(pts.shape[:-1])
            for k in multi_indices(self.dim, self.degree)
        ]
        return np.stack(columns, axis=-1)

    def max_abs(self, points: ArrayLike) -> FloatArray:
        """Largest absolute coefficient at each point."""
        pts = as_points(points)
        if not self._coeffs:
            return np.zeros(pts.shape[:-1])
        return np.max(np.abs(np.stack([f(pts) for f in self._coeffs.values()], axis=-1)), axis=-1)

    def map_coefficients(self, fn: Callable[[ScalarField], ScalarField]) -> DifferentialForm:
        return DifferentialForm(self.dim, self.degree, {k: fn(f) for k, f in self._coeffs.items()})

    def _check_compatible(self, other: DifferentialForm) -> None:
        if self.dim != other.dim:
            raise DimensionMismatchError(f"forms live on dimensions {self.dim} and {other.dim}")
        if self.degree != other.degree:
            raise DegreeError(f"cannot add forms of degree {self.degree} and {other.degree}")

    def __add__(self, other: DifferentialForm) -> DifferentialForm:
        self._check_compatible(other)
        coeffs: dict[MultiIndex, ScalarField] = dict(self._coeffs)
        for k, f in other._coeffs.items():
            coeffs[k] = coeffs[k] + f if k in coeffs else f
        return DifferentialForm(self.dim, self.degree, coeffs)

    def __neg__(self) -> DifferentialForm:
        return self.map_coefficients(lambda f: -f)

    def __sub__(self, other: DifferentialForm) -> DifferentialForm:
        return self + (-other)

    def __mul__(self, factor: Coefficient) -> DifferentialForm:
        field = as_field(factor)
        return self.map_coefficients(lambda f: f * field)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        terms = ", ".join(f"{k}: {f!r}" for k, f in self._coeffs.items()) or "0"
        return f"DifferentialForm(dim={self.dim}, degree={self.degree}, {{{terms}}})"


def as_form(dim: int, value: DifferentialForm | Coefficient) -> DifferentialForm:
    """Promote fields and numbers to 0-forms."""
    if isinstance(value, DifferentialForm):
        return value
    return DifferentialForm.scalar(dim, value)


@dataclass(frozen=True)
class VectorField:
    """Vector field given by its chart components."""

    components: tuple[ScalarField, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(as_field(c) for c in self.components))

    @property
    def dim(self) -> int:
        return len(self.components)

    @classmethod
    def basis(cls, dim: int, axis: int) -> VectorField:
        return cls(tuple(ONE if i == axis else ZERO for i in range(dim)))

    @classmethod
    def zero(cls, dim: int) -> VectorField:
        return cls((ZERO,) * dim)

    def __call__(self, points: ArrayLike) -> FloatArray:
        pts = as_points(points)
        return np.stack([c(pts) for c in self.components], axis=-1)


@dataclass(frozen=True)
class VolumeElement:
    """Top-degree form with a nowhere-vanishing coefficient."""

    form: DifferentialForm

    def __post_init__(self) -> None:
        if self.form.degree != self.form.dim:
            raise DegreeError(f"a volume element needs degree {self.form.dim}, got {self.form.degree}")
        if self.form.is_zero:
            raise DegenerateVolumeElementError("volume element is identically zero")

    @classmethod
    def standard(cls, dim: int, density: Coefficient = 1.0) -> VolumeElement:
        return cls(DifferentialForm.basis(dim, range(dim), density))

    @property
    def dim(self) -> int:
        return self.form.dim

    @property
    def coefficient(self) -> ScalarField:
        return self.form.coefficient(range(self.dim))

    def check_nonvanishing(self, points: ArrayLike) -> None:
        if np.any(self.coefficient(points) == 0.0):
            raise DegenerateVolumeElementError("volume element vanishes at a sampled point")

    def scaled(self, factor: Coefficient) -> VolumeElement:
        return VolumeElement(self.form * factor)


# ---------------------------------------------------------------------------
# Algebra
# ---------------------------------------------------------------------------


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    """Exterior product ``a ^ b``."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"cannot wedge forms on dimensions {a.dim} and {b.dim}")
    degree = a.degree + b.degree
    if degree > a.dim:
        raise DegreeError(f"wedge of degrees {a.degree} and {b.degree} exceeds dimension {a.dim}")
    coeffs: dict[MultiIndex, ScalarField] = {}
    for i, f in a.coeffs.items():
        for j, g in b.coeffs.items():
            sign, index = canonicalize(i + j)
            if sign == 0:
                continue
            term = f * g if sign == 1 else -(f * g)
            coeffs[index] = coeffs[index] + term if index in coeffs else term
    return DifferentialForm(a.dim, degree, coeffs)


def exterior_derivative(a: DifferentialForm) -> DifferentialForm:
    """``d a``; the derivative of a top-degree form is the zero top-degree form."""
    if a.degree == a.dim:
        return DifferentialForm.zero(a.dim, a.dim)
    coeffs: dict[MultiIndex, ScalarField] = {}
    for index, f in a.coeffs.items():
        for axis in range(a.dim):
            if axis in index:
                continue
            df = f.partial(axis)
            if df.is_zero:
                continue
            position = sum(1 for i in index if i < axis)
            term = df if position % 2 == 0 else -df
            key = tuple(sorted(index + (axis,)))
            coeffs[key] = coeffs[key] + term if key in coeffs else term
    return DifferentialForm(a.dim, a.degree + 1, coeffs)


def contract(v: VectorField, a: DifferentialForm) -> DifferentialForm:
    """Interior product ``v _| a``."""
    if v.dim != a.dim:
        raise DimensionMismatchError(f"vector field of dimension {v.dim} on a {a.dim}-form chart")
    if a.degree == 0:
        raise DegreeError("cannot contract a vector field with a 0-form")
    coeffs: dict[MultiIndex, ScalarField] = {}
    for index, f in a.coeffs.items():
        for k, axis in enumerate(index):
            component = v.components[axis]
            if component.is_zero:
                continue
            term = component * f
            if k % 2:
                term = -term
            key = index[:k] + index[k + 1 :]
            coeffs[key] = coeffs[key] + term if key in coeffs else term
    return DifferentialForm(a.dim, a.degree - 1, coeffs)


class ChartMap:
    """Smooth map from a ``source_dim`` parameter box into a ``target_dim`` chart.

    Args:
        func: parameters ``(..., source_dim)`` to chart points ``(..., target_dim)``.
        source_dim: parameter dimension.
        target_dim: chart dimension.
        jacobian: optional analytic Jacobian ``(..., target_dim, source_dim)``.
        fd_step: relative step of the finite-difference Jacobian.
    """

    def __init__(
        self,
        func: PointFunction,
        source_dim: int,
        target_dim: int,
        jacobian: PointFunction | None = None,
        fd_step: float = DEFAULT_FD_STEP,
    ) -> None:
        self._func = func
        self._jacobian = jacobian
        self.source_dim = source_dim
        self.target_dim = target_dim
        self.fd_step = fd_step

    @classmethod
    def identity(cls, dim: int) -> ChartMap:
        return cls(
            lambda u: u,
            dim,
            dim,
            jacobian=lambda u: np.broadcast_to(np.eye(dim), u.shape[:-1] + (dim, dim)),
        )

    @classmethod
    def affine(cls, origin: ArrayLike, matrix: ArrayLike) -> ChartMap:
        """``u -> origin + matrix @ u``."""
        x0 = np.asarray(origin, dtype=float)
        m = np.asarray(matrix, dtype=float).reshape(x0.shape[0], -1)
        return cls(
            lambda u: x0 + u @ m.T,
            m.shape[1],
            m.shape[0],
            jacobian=lambda u: np.broadcast_to(m, u.shape[:-1] + m.shape),
        )

    @classmethod
    def constant(cls, point: ArrayLike) -> ChartMap:
        x0 = np.asarray(point, dtype=float)
        return cls(
            lambda u: np.broadcast_to(x0, u.shape[:-1] + x0.shape),
            0,
            x0.shape[0],
            jacobian=lambda u: np.zeros(u.shape[:-1] + (x0.shape[0], 0)),
        )

    @property
    def has_analytic_jacobian(self) -> bool:
        return self._jacobian is not None

    def __call__(self, u: ArrayLike) -> FloatArray:
        params = as_points(u)
        return _fill(self._func(params), params.shape[:-1] + (self.target_dim,))

    def jacobian(self, u: ArrayLike) -> FloatArray:
        params = as_points(u)
        shape = params.shape[:-1] + (self.target_dim, self.source_dim)
        if self._jacobian is not None:
            return _fill(self._jacobian(params), shape)
        columns = []
        for axis in range(self.source_dim):
            h = self.fd_step * np.maximum(1.0, np.abs(params[..., axis]))
            plus = params.copy()
            minus = params.copy()
            plus[..., axis] += h
            minus[..., axis] -= h
            columns.append((self(plus) - self(minus)) / (2.0 * h)[..., None])
        if not columns:
            return np.zeros(shape)
        return np.stack(columns, axis=-1)

    def restrict(self, axis: int, value: float) -> ChartMap:
        """The map on the face where parameter ``axis`` is held at ``value``."""
        parent = self

        def lift(u: FloatArray) -> FloatArray:
            return np.insert(u, axis, value, axis=-1)

        jac = None
        if self._jacobian is not None:
            jac = lambda u: np.delete(parent.jacobian(lift(u)), axis, axis=-1)  # noqa: E731
        return ChartMap(lambda u: parent(lift(u)), self.source_dim - 1, self.target_dim, jac, self.fd_step)


def pullback_density(a: DifferentialForm, chart_map: ChartMap, u: ArrayLike) -> FloatArray:
    """Coefficient of the pullback of a top-degree-on-parameters form, evaluated at ``u``."""
    params = as_points(u)
    if a.degree != chart_map.source_dim:
        raise DegreeError(f"pullback density needs degree {chart_map.source_dim}, got {a.degree}")
    x = chart_map(params)
    if a.degree == 0:
        return a.coefficient(())(x) if not a.is_zero else np.zeros(params.shape[:-1])
    jac = chart_map.jacobian(params)
    total = np.zeros(params.shape[:-1])
    for index, f in a.coeffs.items():
        total = total + f(x) * np.linalg.det(jac[..., list(index), :])
    return total


def pullback(chart_map: ChartMap, a: DifferentialForm) -> DifferentialForm:
    """Pullback of ``a`` along ``chart_map`` as a form on the parameter box.

    Degrees above the parameter dimension pull back to the zero top form of the box.
    """
    if chart_map.target_dim != a.dim:
        raise DimensionMismatchError(f"map targets dimension {chart_map.target_dim}, form lives on {a.dim}")
    k = chart_map.source_dim
    if a.degree > k:
        return DifferentialForm.zero(k, k)
    coeffs: dict[MultiIndex, ScalarField] = {}
    for key in multi_indices(k, a.degree):
        coeffs[key] = ScalarField(
            _pullback_coefficient(a, chart_map, key),
            fd_step=chart_map.fd_step,
            label=f"pullback{key}",
        )
    return DifferentialForm(k, a.degree, coeffs)


def _pullback_coefficient(a: DifferentialForm, chart_map: ChartMap, key: MultiIndex) -> PointFunction:
    def coefficient(u: FloatArray) -> FloatArray:
        x = chart_map(u)
        if not key:
            return a.coefficient(())(x) if not a.is_zero else np.zeros(u.shape[:-1])
        jac = chart_map.jacobian(u)
        total = np.zeros(u.shape[:-1])
        for index, f in a.coeffs.items():
            minor = jac[..., list(index), :][..., list(key)]
            total = total + f(x) * np.linalg.det(minor)
        return total

    return coefficient


# ---------------------------------------------------------------------------
# Time-dependent spatial forms
# ---------------------------------------------------------------------------


class TimeDependentForm:
    """Spatial ``degree``-form whose coefficients depend on ``(t, x)``.

    Coefficient fields are evaluated on spacetime points ``(..., 1 + space_dim)``
    with time in column 0. Internally the family is stored as the dt-free form on
    spacetime, which is exactly its lift.
    """

    __slots__ = ("space_dim", "degree", "_lifted")

    def __init__(
        self,
        space_dim: int,
        degree: int,
        coeffs: Mapping[Iterable[int], Coefficient] | None = None,
    ) -> None:
        spatial = DifferentialForm(space_dim, degree, coeffs)
        self.space_dim = space_dim
        self.degree = degree
        self._lifted = DifferentialForm(
            space_dim + 1,
            degree,
            {tuple(i + 1 for i in k): f for k, f in spatial.coeffs.items()},
        )

    @classmethod
    def from_spacetime(cls, form: DifferentialForm) -> TimeDependentForm:
        """Inverse of the lift; ``form`` must not contain dt."""
        for key in form.coeffs:
            if 0 in key:
                raise DegreeError(f"component {key} contains dt and is not a spatial form")
        return cls(
            form.dim - 1,
            form.degree,
            {tuple(i - 1 for i in k): f for k, f in form.coeffs.items()},
        )

    @classmethod
    def static(cls, form: DifferentialForm) -> TimeDependentForm:
        """Time-independent family equal to ``form`` at every instant."""
        axes = tuple(range(1, form.dim + 1))
        return cls(form.dim, form.degree, {k: EmbeddedField(f, axes) for k, f in form.coeffs.items()})

    @classmethod
    def zero(cls, space_dim: int, degree: int) -> TimeDependentForm:
        return cls(space_dim, degree)

    @property
    def spacetime_form(self) -> DifferentialForm:
        return self._lifted

    @property
    def coeffs(self) -> Mapping[MultiIndex, ScalarField]:
        return MappingProxyType({tuple(i - 1 for i in k): f for k, f in self._lifted.coeffs.items()})

    @property
    def is_zero(self) -> bool:
        return self._lifted.is_zero

    def at(self, t: float) -> DifferentialForm:
        """The spatial form at the instant ``t``."""
        return DifferentialForm(
            self.space_dim,
            self.degree,
            {k: FrozenField(f, 0, t) for k, f in self.coeffs.items()},
        )

    def time_derivative(self) -> TimeDependentForm:
        return TimeDependentForm.from_spacetime(self._lifted.map_coefficients(lambda f: f.partial(0)))

    def spatial_derivative(self) -> TimeDependentForm:
        """Spatial exterior derivative, t held fixed."""
        if self.degree == self.space_dim:
            return TimeDependentForm.zero(self.space_dim, self.space_dim)
        full = exterior_derivative(self._lifted)
        return TimeDependentForm.from_spacetime(
            DifferentialForm(full.dim, full.degree, {k: f for k, f in full.coeffs.items() if 0 not in k})
        )

    def evaluate(self, points: ArrayLike) -> dict[MultiIndex, FloatArray]:
        return {tuple(i - 1 for i in k): v for k, v in self._lifted.evaluate(points).items()}

    def max_abs(self, points: ArrayLike) -> FloatArray:
        return self._lifted.max_abs(points)

    def __add__(self, other: TimeDependentForm) -> TimeDependentForm:
        return TimeDependentForm.from_spacetime(self._lifted + other._lifted)

    def __neg__(self) -> TimeDependentForm:
        return TimeDependentForm.from_spacetime(-self._lifted)

    def __sub__(self, other: TimeDependentForm) -> TimeDependentForm:
        return self + (-other)

    def __mul__(self, factor: Coefficient) -> TimeDependentForm:
        return TimeDependentForm.from_spacetime(self._lifted * factor)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"TimeDependentForm(space_dim={self.space_dim}, degree={self.degree}, {dict(self.coeffs)!r})"


FormFamily: TypeAlias = TimeDependentForm | Callable[[float], DifferentialForm]


def as_family(form: TimeDependentForm | DifferentialForm) -> TimeDependentForm:
    if isinstance(form, TimeDependentForm):
        return form
    return TimeDependentForm.static(form)


def time_partial(family: FormFamily, t: float, fd_step: float = DEFAULT_FD_STEP) -> DifferentialForm:
    """``beta = d(rho)/dt`` at the instant ``t``.

    A :class:`TimeDependentForm` is differentiated through its coefficient fields;
    a plain callable ``t -> form`` is differenced centrally in ``t``.
    """
    if isinstance(family, TimeDependentForm):
        return family.time_derivative().at(t)
    h = fd_step * max(1.0, abs(t))
    return (family(t + h) - family(t - h)) * (1.0 / (2.0 * h))
