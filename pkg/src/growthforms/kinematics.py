"""Kinematic flux fields and worldlines (body points)."""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike
from scipy.spatial.distance import directed_hausdorff

from growthforms.constants import DEFAULT_MAX_STEPS, DEFAULT_ODE_STEP, INTERIOR_TOLERANCE, MEMBERSHIP_TOLERANCE
from growthforms.exceptions import DegenerateVolumeElementError, DegreeError, DimensionMismatchError, DomainError
from growthforms.exterior import (
    ZERO,
    DifferentialForm,
    FloatArray,
    QuotientField,
    ScalarField,
    VectorField,
    VolumeElement,
    as_points,
    contract,
)
from growthforms.geometry import ChartDomain
from growthforms.logger import get_logger

logger = get_logger(__name__)


class WorldlineStatus(str, Enum):
    """Why a worldline integration stopped."""

    COMPLETED = "completed"
    LEFT_DOMAIN = "left_domain"
    MAX_STEPS = "max_steps"


@dataclass(frozen=True)
class Worldline:
    """Sampled integral curve of a vector field."""

    params: FloatArray
    points: FloatArray
    seed: FloatArray
    step: float
    status: WorldlineStatus

    def __len__(self) -> int:
        return len(self.params)

    @property
    def end(self) -> FloatArray:
        return self.points[-1]

    @property
    def times(self) -> FloatArray:
        """Axis-0 coordinate along the curve (time on a spacetime chart)."""
        return self.points[:, 0]


def kinematic_flux(flux: DifferentialForm, theta: VolumeElement) -> VectorField:
    """The vector field ``v`` with ``v _| theta = flux``.

    Component ``k`` is ``(-1)**k`` times the flux coefficient omitting axis ``k``,
    divided by the volume element coefficient.
    """
    d = theta.dim
    if flux.dim != d:
        raise DimensionMismatchError(f"flux on dimension {flux.dim}, volume element on {d}")
    if flux.degree != d - 1:
        raise DegreeError(f"a kinematic flux needs a {d - 1}-form, got degree {flux.degree}")
    density = theta.coefficient
    components: list[ScalarField] = []
    for k in range(d):
        coefficient = flux.coefficient(tuple(i for i in range(d) if i != k))
        if coefficient.is_zero:
            components.append(ZERO)
            continue
        signed = coefficient if k % 2 == 0 else -coefficient
        components.append(QuotientField(signed, density, DegenerateVolumeElementError))
    return VectorField(tuple(components))


def flux_space_membership(
    v: VectorField,
    flux: DifferentialForm,
    x: ArrayLike,
    tol: float = INTERIOR_TOLERANCE,
) -> bool:
    """True when ``v _| flux`` vanishes (below ``tol``) at every point of ``x``."""
    residual = contract(v, flux).max_abs(x)
    return bool(np.all(residual < tol))


def _rk4_step(v: VectorField, x: FloatArray, h: float) -> FloatArray:
    k1 = v(x)
    k2 = v(x + 0.5 * h * k1)
    k3 = v(x + 0.5 * h * k2)
    k4 = v(x + h * k3)
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_worldline(
    v: VectorField,
    seed: ArrayLike,
    step: float = DEFAULT_ODE_STEP,
    max_steps: int = DEFAULT_MAX_STEPS,
    domain: ChartDomain | None = None,
    param_end: float | None = None,
) -> Worldline:
    """Classical fixed-step RK4 for ``dc/dp = v(c)``.

    Stops at the last in-domain point, after ``max_steps`` steps, or once
    ``|p|`` reaches ``|param_end|``. A negative ``step`` integrates backwards.
    """
    x = as_points(seed).copy()
    if x.shape != (v.dim,):
        raise DimensionMismatchError(f"seed of shape {x.shape} for a {v.dim}-dimensional field")
    if step == 0.0:
        raise ValueError("step must be nonzero")
    if domain is not None and not domain.contains(x):
        raise DomainError(f"seed {x.tolist()} lies outside the chart domain")

    limit, status = max_steps, WorldlineStatus.MAX_STEPS
    last_step = step
    if param_end is not None:
        span = abs(param_end)
        full = math.floor(span / abs(step) + 1e-9)
        remainder = span - full * abs(step)
        wanted = full
        if remainder > 1e-12 * max(1.0, span):
            wanted, last_step = full + 1, math.copysign(remainder, step)
        if wanted <= max_steps:
            limit, status = wanted, WorldlineStatus.COMPLETED

    points = [x]
    sizes: list[float] = []
    for i in range(limit):
        h = last_step if i == limit - 1 and status is WorldlineStatus.COMPLETED else step
        x_next = _rk4_step(v, x, h)
        if domain is not None and not domain.contains(x_next, MEMBERSHIP_TOLERANCE):
            status = WorldlineStatus.LEFT_DOMAIN
            break
        points.append(x_next)
        sizes.append(h)
        x = x_next

    path = np.array(points)
    params = np.concatenate([[0.0], np.cumsum(sizes)])
    logger.debug("worldline integrated", seed=path[0].tolist(), steps=len(path) - 1, status=status.value)
    return Worldline(params, path, path[0].copy(), float(step), status)


def integrate_worldlines(
    v: VectorField,
    seeds: Iterable[ArrayLike],
    step: float = DEFAULT_ODE_STEP,
    max_steps: int = DEFAULT_MAX_STEPS,
    domain: ChartDomain | None = None,
    param_end: float | None = None,
) -> list[Worldline]:
    """One worldline per seed, integrated independently."""
    return [integrate_worldline(v, s, step, max_steps, domain, param_end) for s in seeds]


def volume_element_invariance(
    flux: DifferentialForm,
    theta1: VolumeElement,
    theta2: VolumeElement,
    samples: ArrayLike,
) -> float:
    """Largest parallelism defect between the kinematic fluxes of two volume elements.

    The defect is the norm of the component of ``v1`` orthogonal to ``v2``,
    relative to ``|v1|``; points where ``v1`` vanishes count as 0.
    """
    pts = as_points(samples)
    theta1.check_nonvanishing(pts)
    theta2.check_nonvanishing(pts)
    v1 = kinematic_flux(flux, theta1)(pts)
    v2 = kinematic_flux(flux, theta2)(pts)
    n1 = np.linalg.norm(v1, axis=-1)
    n2sq = np.sum(v2 * v2, axis=-1)
    safe = np.where(n2sq > 0.0, n2sq, 1.0)
    coeff = np.where(n2sq > 0.0, np.sum(v1 * v2, axis=-1) / safe, 0.0)
    orthogonal = np.linalg.norm(v1 - coeff[..., None] * v2, axis=-1)
    defect = np.where(n1 > 0.0, orthogonal / np.where(n1 > 0.0, n1, 1.0), 0.0)
    return float(np.max(defect)) if defect.size else 0.0


def resample_by_arclength(points: FloatArray, count: int) -> FloatArray:
    """``count`` points equally spaced in chart arc length along a polyline."""
    if len(points) < 2:
        return np.repeat(points[:1], count, axis=0)
    seg = np.linalg.norm(np.diff(points, axis=0), axis=1)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    if s[-1] == 0.0:
        return np.repeat(points[:1], count, axis=0)
    targets = np.linspace(0.0, s[-1], count)
    return np.stack([np.interp(targets, s, points[:, j]) for j in range(points.shape[1])], axis=1)


def _clip_to_times(points: FloatArray, t_lo: float, t_hi: float) -> FloatArray:
    """Portion of a curve monotone in axis 0 between two times, endpoints interpolated."""
    t = points[:, 0]
    if t[0] > t[-1]:
        points = points[::-1]
        t = points[:, 0]
    inner = points[(t > t_lo) & (t < t_hi)]
    ends = [np.array([np.interp(tt, t, points[:, j]) for j in range(points.shape[1])]) for tt in (t_lo, t_hi)]
    return np.vstack([ends[0][None, :], inner, ends[1][None, :]])


def worldline_image_distance(first: Worldline, second: Worldline, samples: int = 2000) -> float:
    """Symmetric Hausdorff distance between two worldline images over their common time range."""
    t_lo = max(first.times.min(), second.times.min())
    t_hi = min(first.times.max(), second.times.max())
    if t_hi <= t_lo:
        a, b = first.points, second.points
    else:
        a = _clip_to_times(first.points, t_lo, t_hi)
        b = _clip_to_times(second.points, t_lo, t_hi)
    a = resample_by_arclength(a, samples)
    b = resample_by_arclength(b, samples)
    return float(max(directed_hausdorff(a, b)[0], directed_hausdorff(b, a)[0]))
