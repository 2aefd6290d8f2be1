"""Chart domains, box chains and quadrature of forms over chains."""

from __future__ import annotations

import functools
import itertools
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from growthforms.constants import (
    DEFAULT_QUAD_ORDER,
    DEFAULT_SUBCELLS,
    DEFAULT_SUPPORT_BOXES,
    MAX_BATCH_NODES,
)
from growthforms.exceptions import DegreeError, DimensionMismatchError, DomainError
from growthforms.exterior import ChartMap, DifferentialForm, FloatArray, as_points, exterior_derivative, pullback_density
from growthforms.logger import get_logger

logger = get_logger(__name__)

Interval = tuple[float, float]


@dataclass(frozen=True)
class ChartDomain:
    """Axis-aligned chart domain.

    ``excluded`` lists axes whose lower bound is an open exclusion (``r > 0``);
    those lower bounds must be strictly positive.
    """

    bounds: tuple[Interval, ...]
    periodic: tuple[bool, ...] = ()
    excluded: tuple[int, ...] = ()
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        object.__setattr__(self, "bounds", bounds)
        if not self.periodic:
            object.__setattr__(self, "periodic", (False,) * len(bounds))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"x{i}" for i in range(len(bounds))))
        if len(self.periodic) != len(bounds) or len(self.labels) != len(bounds):
            raise DimensionMismatchError("bounds, periodic flags and labels must have the same length")
        for lo, hi in bounds:
            if not lo < hi:
                raise DomainError(f"chart interval [{lo}, {hi}] is empty")
        for axis in self.excluded:
            if bounds[axis][0] <= 0.0:
                raise DomainError(f"axis {self.labels[axis]} excludes 0 but its lower bound is {bounds[axis][0]}")

    @property
    def dim(self) -> int:
        return len(self.bounds)

    @property
    def lower(self) -> FloatArray:
        return np.array([b[0] for b in self.bounds])

    @property
    def upper(self) -> FloatArray:
        return np.array([b[1] for b in self.bounds])

    def contains(self, points: ArrayLike, tol: float = 0.0) -> np.ndarray:
        """Boolean mask of points inside the closed domain (periodic axes always pass)."""
        pts = as_points(points)
        if pts.shape[-1] != self.dim:
            raise DimensionMismatchError(f"points of dimension {pts.shape[-1]} in a {self.dim}-dimensional chart")
        inside = (pts >= self.lower - tol) & (pts <= self.upper + tol)
        inside[..., list(self.periodic)] = True
        return np.all(inside, axis=-1)

    def sample(self, count: int, rng: np.random.Generator) -> FloatArray:
        """Uniform random points, shape ``(count, dim)``."""
        return rng.uniform(self.lower, self.upper, size=(count, self.dim))

    def ball_inside(self, center: ArrayLike, radius: float) -> bool:
        """True when the closed ball lies in the open domain on every axis."""
        c = np.asarray(center, dtype=float)
        return bool(np.all(c - radius > self.lower) and np.all(c + radius < self.upper))


@dataclass(frozen=True)
class ParamCell:
    """Oriented image of a parameter box under a chart map.

    A cell with an empty box is a point cell.
    """

    box: tuple[Interval, ...]
    map: ChartMap
    orientation: int = 1
    periodic: tuple[bool, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "box", tuple((float(lo), float(hi)) for lo, hi in self.box))
        if not self.periodic:
            object.__setattr__(self, "periodic", (False,) * len(self.box))
        if self.orientation not in (1, -1):
            raise ValueError(f"orientation must be +1 or -1, got {self.orientation}")
        if self.map.source_dim != len(self.box):
            raise DimensionMismatchError(f"map takes {self.map.source_dim} parameters, box has {len(self.box)}")

    @property
    def param_dim(self) -> int:
        return len(self.box)

    @property
    def target_dim(self) -> int:
        return self.map.target_dim

    @classmethod
    def box_cell(cls, bounds: Sequence[Interval], periodic: Sequence[bool] = ()) -> ParamCell:
        """A chart box parameterized by itself."""
        return cls(tuple(bounds), ChartMap.identity(len(bounds)), 1, tuple(periodic))

    @classmethod
    def point(cls, x: ArrayLike, orientation: int = 1) -> ParamCell:
        return cls((), ChartMap.constant(x), orientation)

    @classmethod
    def segment(cls, start: ArrayLike, end: ArrayLike) -> ParamCell:
        """Straight segment from ``start`` to ``end`` over ``u in [0, 1]``."""
        a = np.asarray(start, dtype=float)
        b = np.asarray(end, dtype=float)
        return cls(((0.0, 1.0),), ChartMap.affine(a, (b - a).reshape(-1, 1)))

    @property
    def location(self) -> FloatArray:
        """Chart point of a point cell."""
        if self.param_dim:
            raise DegreeError("only point cells have a single location")
        return self.map(np.zeros((1, 0)))[0]

    def face(self, axis: int, at_upper: bool) -> ParamCell:
        """Boundary face with the induced orientation ``(-1)**axis`` (upper) or its negative (lower)."""
        lo, hi = self.box[axis]
        sign = (-1) ** axis if at_upper else -((-1) ** axis)
        return ParamCell(
            self.box[:axis] + self.box[axis + 1 :],
            self.map.restrict(axis, hi if at_upper else lo),
            self.orientation * sign,
            self.periodic[:axis] + self.periodic[axis + 1 :],
        )

    def reversed(self) -> ParamCell:
        return ParamCell(self.box, self.map, -self.orientation, self.periodic)

    def corners(self) -> FloatArray:
        """Chart images of the box corners."""
        if not self.box:
            return self.map(np.zeros((1, 0)))
        grid = np.array(list(itertools.product(*self.box)))
        return self.map(grid)


@dataclass(frozen=True)
class Chain:
    """Weighted formal sum of cells of one dimension in one chart."""

    cells: tuple[tuple[ParamCell, float], ...]
    dimension: int
    ambient_dim: int

    def __post_init__(self) -> None:
        for cell, _ in self.cells:
            if cell.param_dim != self.dimension:
                raise DegreeError(f"cell of dimension {cell.param_dim} in a {self.dimension}-chain")
            if cell.target_dim != self.ambient_dim:
                raise DimensionMismatchError(f"cell maps into dimension {cell.target_dim}, chain lives in {self.ambient_dim}")

    @classmethod
    def of(cls, *cells: ParamCell | tuple[ParamCell, float]) -> Chain:
        """Chain from cells (weight 1) or ``(cell, weight)`` pairs; at least one cell."""
        if not cells:
            raise DegreeError("Chain.of needs at least one cell; use Chain.empty for an empty chain")
        pairs = tuple(c if isinstance(c, tuple) else (c, 1.0) for c in cells)
        first = pairs[0][0]
        return cls(tuple((c, float(w)) for c, w in pairs), first.param_dim, first.target_dim)

    @classmethod
    def empty(cls, dimension: int, ambient_dim: int) -> Chain:
        return cls((), dimension, ambient_dim)

    @classmethod
    def from_domain(cls, domain: ChartDomain) -> Chain:
        """The whole chart as a single cell."""
        return cls.of(ParamCell.box_cell(domain.bounds, domain.periodic))

    @property
    def is_empty(self) -> bool:
        return not self.cells

    def _check(self, other: Chain) -> None:
        if (self.dimension, self.ambient_dim) != (other.dimension, other.ambient_dim):
            raise DegreeError(
                f"cannot combine a {self.dimension}-chain in dimension {self.ambient_dim} "
                f"with a {other.dimension}-chain in dimension {other.ambient_dim}"
            )

    def __add__(self, other: Chain) -> Chain:
        self._check(other)
        return Chain(self.cells + other.cells, self.dimension, self.ambient_dim)

    def __neg__(self) -> Chain:
        return self.scale(-1.0)

    def __sub__(self, other: Chain) -> Chain:
        return self + (-other)

    def scale(self, factor: float) -> Chain:
        return Chain(tuple((c, w * factor) for c, w in self.cells), self.dimension, self.ambient_dim)

    __rmul__ = scale

    def simplify(self) -> Chain:
        """Merge coincident point cells and drop zero weights; other chains are returned unchanged."""
        if self.dimension != 0:
            return self
        merged: dict[tuple[float, ...], list] = {}
        for cell, weight in self.cells:
            x = cell.location
            key = tuple(np.round(x, 12).tolist())
            if key in merged:
                merged[key][1] += weight * cell.orientation
            else:
                merged[key] = [x, weight * cell.orientation]
        cells = tuple((ParamCell.point(x), w) for x, w in merged.values() if w != 0.0)
        return Chain(cells, 0, self.ambient_dim)


@dataclass(frozen=True)
class SupportBox:
    """Axis-aligned box outside of which an integrand vanishes, with its enclosed ball."""

    lower: FloatArray
    upper: FloatArray
    center: FloatArray
    radius: float

    @classmethod
    def ball(cls, center: ArrayLike, radius: float) -> SupportBox:
        c = np.asarray(center, dtype=float)
        return cls(c - radius, c + radius, c, float(radius))

    def contains(self, x: ArrayLike) -> bool:
        return bool(np.linalg.norm(np.asarray(x, dtype=float) - self.center) < self.radius)


@functools.lru_cache(maxsize=64)
def reference_rule(order: int, dim: int) -> tuple[FloatArray, FloatArray]:
    """Tensor-product Gauss-Legendre nodes ``(Q, dim)`` and weights ``(Q,)`` on the unit cube."""
    q, w = np.polynomial.legendre.leggauss(order)
    q = 0.5 * (q + 1.0)
    w = 0.5 * w
    if dim == 0:
        return np.zeros((1, 0)), np.ones(1)
    points = np.array(list(itertools.product(q, repeat=dim)))
    weights = np.prod(np.array(list(itertools.product(w, repeat=dim))), axis=1)
    return points, weights


@dataclass(frozen=True)
class QuadratureRule:
    """Composite tensor-product Gauss-Legendre rule.

    Attributes:
        order: Gauss points per axis and subcell.
        subcells: uniform subcells per parameter axis.
        support_boxes: subcells per re-gridded support window; a k-cell gets about
            the k-th root of this per axis.
        refine_support_edges: split subcells straddling a support sphere into ``2**k``.
    """

    order: int = DEFAULT_QUAD_ORDER
    subcells: int = DEFAULT_SUBCELLS
    support_boxes: int = DEFAULT_SUPPORT_BOXES
    refine_support_edges: bool = True

    def grid(self, box: Sequence[Interval], count: int | None = None) -> tuple[FloatArray, FloatArray]:
        """Lower and upper corners ``(M, k)`` of the uniform subdivision of ``box``."""
        n = self.subcells if count is None else count
        edges = [np.linspace(lo, hi, n + 1) for lo, hi in box]
        lows = np.array(list(itertools.product(*[e[:-1] for e in edges])))
        highs = np.array(list(itertools.product(*[e[1:] for e in edges])))
        return lows, highs

    def support_count(self, param_dim: int) -> int:
        """Per-axis subcells when re-gridding the support window of a ``param_dim``-cell."""
        return max(1, round(self.support_boxes ** (1.0 / max(1, param_dim))))


DEFAULT_RULE = QuadratureRule()


def _box_images(cell: ParamCell, lo: FloatArray, hi: FloatArray) -> tuple[FloatArray, FloatArray]:
    """Padded chart bounding boxes of subcell images, from corners and centres."""
    k = lo.shape[1]
    signs = np.array(list(itertools.product((0.0, 1.0), repeat=k)))
    spots = lo[:, None, :] + signs[None, :, :] * (hi - lo)[:, None, :]
    spots = np.concatenate([spots, (0.5 * (lo + hi))[:, None, :]], axis=1)
    images = cell.map(spots)
    img_lo = images.min(axis=1)
    img_hi = images.max(axis=1)
    margin = 0.25 * (img_hi - img_lo) + 1e-12
    return img_lo - margin, img_hi + margin


def _meets(img_lo: FloatArray, img_hi: FloatArray, support: SupportBox) -> np.ndarray:
    return np.all((img_hi >= support.lower) & (img_lo <= support.upper), axis=1)


def _straddles(img_lo: FloatArray, img_hi: FloatArray, support: SupportBox) -> np.ndarray:
    nearest = np.clip(support.center, img_lo, img_hi)
    near = np.linalg.norm(nearest - support.center, axis=1)
    far_corner = np.maximum(np.abs(img_lo - support.center), np.abs(img_hi - support.center))
    far = np.linalg.norm(far_corner, axis=1)
    return (near < support.radius) & (far > support.radius)


def _split(lo: FloatArray, hi: FloatArray) -> tuple[FloatArray, FloatArray]:
    k = lo.shape[1]
    signs = np.array(list(itertools.product((0.0, 1.0), repeat=k)))
    half = (0.5 * (hi - lo))[:, None, :]
    new_lo = lo[:, None, :] + signs[None, :, :] * half
    new_hi = new_lo + half
    return new_lo.reshape(-1, k), new_hi.reshape(-1, k)


def _support_boxes(
    cell: ParamCell, rule: QuadratureRule, support: SupportBox
) -> tuple[FloatArray, FloatArray]:
    lo, hi = rule.grid(cell.box)
    keep = _meets(*_box_images(cell, lo, hi), support)
    if not np.any(keep):
        return lo[:0], hi[:0]
    zoom = tuple(zip(lo[keep].min(axis=0), hi[keep].max(axis=0)))
    lo, hi = rule.grid(zoom, rule.support_count(cell.param_dim))
    img_lo, img_hi = _box_images(cell, lo, hi)
    keep = _meets(img_lo, img_hi, support)
    lo, hi, img_lo, img_hi = lo[keep], hi[keep], img_lo[keep], img_hi[keep]
    if rule.refine_support_edges and len(lo):
        edge = _straddles(img_lo, img_hi, support)
        if np.any(edge):
            split_lo, split_hi = _split(lo[edge], hi[edge])
            lo = np.concatenate([lo[~edge], split_lo])
            hi = np.concatenate([hi[~edge], split_hi])
    return lo, hi


def _integrate_cell(
    form: DifferentialForm, cell: ParamCell, rule: QuadratureRule, support: SupportBox | None
) -> float:
    k = cell.param_dim
    if k == 0:
        if support is not None and not support.contains(cell.location):
            return 0.0
        return float(pullback_density(form, cell.map, np.zeros((1, 0)))[0])

    if support is None:
        lo, hi = rule.grid(cell.box)
    else:
        lo, hi = _support_boxes(cell, rule, support)
        if len(lo) == 0:
            return 0.0

    nodes, weights = reference_rule(rule.order, k)
    per_box = max(1, MAX_BATCH_NODES // len(weights))
    sums: list[float] = []
    for start in range(0, len(lo), per_box):
        blo = lo[start : start + per_box]
        bhi = hi[start : start + per_box]
        width = bhi - blo
        pts = blo[:, None, :] + width[:, None, :] * nodes[None, :, :]
        vals = pullback_density(form, cell.map, pts.reshape(-1, k)).reshape(len(blo), len(weights))
        box_sums = (vals * weights[None, :]).sum(axis=1) * np.prod(width, axis=1)
        sums.extend(box_sums.tolist())
    logger.debug("integrated cell", param_dim=k, subcells=len(lo), restricted=support is not None)
    return math.fsum(sums)


def integrate(
    form: DifferentialForm,
    chain: Chain,
    rule: QuadratureRule | None = None,
    support: SupportBox | None = None,
) -> float:
    """Integral of ``form`` over ``chain``.

    When ``support`` is given the integrand is assumed to vanish outside it and
    only subcells meeting it are integrated.
    """
    if form.degree != chain.dimension:
        raise DegreeError(f"cannot integrate a {form.degree}-form over a {chain.dimension}-chain")
    if form.dim != chain.ambient_dim:
        raise DimensionMismatchError(f"form on dimension {form.dim}, chain in dimension {chain.ambient_dim}")
    if form.is_zero:
        return 0.0
    rule = rule or DEFAULT_RULE
    terms = [w * cell.orientation * _integrate_cell(form, cell, rule, support) for cell, w in chain.cells]
    return math.fsum(terms)


def chain_boundary(chain: Chain) -> Chain:
    """Oriented boundary; periodic parameter axes contribute no faces."""
    if chain.dimension == 0:
        raise DegreeError("a 0-chain has no boundary")
    faces: list[tuple[ParamCell, float]] = []
    for cell, weight in chain.cells:
        for axis in range(cell.param_dim):
            if cell.periodic[axis]:
                continue
            faces.append((cell.face(axis, at_upper=True), weight))
            faces.append((cell.face(axis, at_upper=False), weight))
    return Chain(tuple(faces), chain.dimension - 1, chain.ambient_dim).simplify()


def stokes_residual(
    form: DifferentialForm,
    chain: Chain,
    rule: QuadratureRule | None = None,
    support: SupportBox | None = None,
) -> float:
    """``|int_c da - int_{bd c} a|``."""
    if form.degree != chain.dimension - 1:
        raise DegreeError(f"Stokes needs a {chain.dimension - 1}-form, got degree {form.degree}")
    inner = integrate(exterior_derivative(form), chain, rule, support)
    outer = integrate(form, chain_boundary(chain), rule, support)
    return abs(inner - outer)


def union(chains: Iterable[Chain]) -> Chain:
    """Formal sum of chains of one dimension."""
    items = list(chains)
    if not items:
        raise DegreeError("cannot take the union of no chains")
    total = items[0]
    for extra in items[1:]:
        total = total + extra
    return total
