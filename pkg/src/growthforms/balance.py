"""Residuals of the differential, integral and weak balance laws."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from growthforms.exceptions import DegreeError, DimensionMismatchError
from growthforms.exterior import (
    DifferentialForm,
    TimeDependentForm,
    as_family,
    as_points,
    exterior_derivative,
    pullback,
    wedge,
)
from growthforms.geometry import Chain, ParamCell, QuadratureRule, SupportBox, chain_boundary, integrate
from growthforms.logger import get_logger

logger = get_logger(__name__)

SpatialForm = TimeDependentForm | DifferentialForm


@dataclass(frozen=True)
class BalanceReport:
    """Pointwise residual summary over a sample set."""

    max_residual: float
    mean_residual: float
    sample_count: int
    worst_point: tuple[float, ...]
    seed: int | None = None

    def passed(self, tolerance: float) -> bool:
        return self.max_residual < tolerance

    def to_dict(self) -> dict[str, Any]:
        return {
            "max_residual": self.max_residual,
            "mean_residual": self.mean_residual,
            "samples": self.sample_count,
            "worst_point": list(self.worst_point),
            "seed": self.seed,
        }


def summarize(residuals: np.ndarray, points: np.ndarray, seed: int | None = None) -> BalanceReport:
    """Build a report from per-point residuals."""
    if residuals.size == 0:
        return BalanceReport(0.0, 0.0, 0, (), seed)
    worst = int(np.argmax(residuals))
    return BalanceReport(
        float(residuals[worst]),
        float(np.mean(residuals)),
        int(residuals.size),
        tuple(float(c) for c in points[worst]),
        seed,
    )


def _space_dim(form: SpatialForm) -> int:
    return form.space_dim if isinstance(form, TimeDependentForm) else form.dim


def _check_spatial_degrees(beta: SpatialForm, flux: SpatialForm, sigma: SpatialForm) -> int:
    n = _space_dim(beta)
    if {_space_dim(flux), _space_dim(sigma)} != {n}:
        raise DimensionMismatchError("rate, flux and source live on different spaces")
    if (beta.degree, flux.degree, sigma.degree) != (n, n - 1, n):
        raise DegreeError(
            f"balance needs degrees ({n}, {n - 1}, {n}), got ({beta.degree}, {flux.degree}, {sigma.degree})"
        )
    return n


def spatial_balance_residual(
    beta: SpatialForm,
    flux: SpatialForm,
    sigma: SpatialForm,
    samples: ArrayLike,
    seed: int | None = None,
) -> BalanceReport:
    """Max and mean of ``|beta + dJ - sigma|`` over the samples.

    Samples may be spacetime points ``(t, x)`` or purely spatial points, which are read at ``t = 0``.
    """
    n = _check_spatial_degrees(beta, flux, sigma)
    pts = as_points(samples)
    if pts.shape[-1] == n:
        pts = np.concatenate([np.zeros(pts.shape[:-1] + (1,)), pts], axis=-1)
    residual = as_family(beta) + as_family(flux).spatial_derivative() - as_family(sigma)
    report = summarize(residual.max_abs(pts), pts, seed)
    logger.debug("spatial balance", max_residual=report.max_residual, samples=report.sample_count)
    return report


def spacetime_balance_residual(
    spacetime_flux: DifferentialForm,
    spacetime_source: DifferentialForm,
    samples: ArrayLike,
    seed: int | None = None,
) -> BalanceReport:
    """Max and mean of ``|d Jst - s|`` over spacetime samples."""
    if spacetime_flux.dim != spacetime_source.dim:
        raise DimensionMismatchError("spacetime flux and source live on different charts")
    d = spacetime_flux.dim
    if (spacetime_flux.degree, spacetime_source.degree) != (d - 1, d):
        raise DegreeError(
            f"spacetime balance needs degrees ({d - 1}, {d}), "
            f"got ({spacetime_flux.degree}, {spacetime_source.degree})"
        )
    pts = as_points(samples)
    residual = exterior_derivative(spacetime_flux) - spacetime_source
    report = summarize(residual.max_abs(pts), pts, seed)
    logger.debug("spacetime balance", max_residual=report.max_residual, samples=report.sample_count)
    return report


def at_time(form: SpatialForm, t: float) -> DifferentialForm:
    return form.at(t) if isinstance(form, TimeDependentForm) else form


def region_balance_residual(
    beta: SpatialForm,
    flux: SpatialForm,
    sigma: SpatialForm,
    region: Chain,
    t: float = 0.0,
    rule: QuadratureRule | None = None,
) -> float:
    """``|int_R beta + int_{bd R} J - int_R sigma|`` at the instant ``t``."""
    n = _check_spatial_degrees(beta, flux, sigma)
    if region.dimension != n:
        raise DegreeError(f"region must be a {n}-chain, got dimension {region.dimension}")
    b, j, s = at_time(beta, t), at_time(flux, t), at_time(sigma, t)
    return abs(integrate(b, region, rule) + integrate(j, chain_boundary(region), rule) - integrate(s, region, rule))


def integral_balance_defect(
    beta: SpatialForm,
    flux: SpatialForm,
    sigma: SpatialForm,
    region: Chain,
    t: float = 0.0,
    rule: QuadratureRule | None = None,
) -> float:
    """``|int_R (beta + dJ) - int_R sigma|`` at the instant ``t``; no boundary quadrature involved."""
    n = _check_spatial_degrees(beta, flux, sigma)
    if region.dimension != n:
        raise DegreeError(f"region must be a {n}-chain, got dimension {region.dimension}")
    b, j, s = at_time(beta, t), at_time(flux, t), at_time(sigma, t)
    return abs(integrate(b + exterior_derivative(j), region, rule) - integrate(s, region, rule))


def boundary_flux_density(flux: DifferentialForm, boundary_cell: ParamCell) -> DifferentialForm:
    """The flux density on a boundary piece: the pullback of ``J`` to its parameter box.

    The cell orientation is not folded in; it applies when the density is integrated.
    """
    if flux.degree != boundary_cell.param_dim:
        raise DegreeError(f"a {flux.degree}-form cannot be restricted to a {boundary_cell.param_dim}-cell")
    return pullback(boundary_cell.map, flux)


def total_flux(flux: DifferentialForm, boundary: Chain, rule: QuadratureRule | None = None) -> float:
    """Total outflow through a boundary chain."""
    return integrate(flux, boundary, rule)


def power_functional(
    beta: SpatialForm,
    flux: SpatialForm,
    sigma: SpatialForm,
    phi: DifferentialForm,
    region: Chain,
    t: float = 0.0,
    rule: QuadratureRule | None = None,
    support: SupportBox | None = None,
) -> tuple[float, float]:
    """Both sides of the power balance for a potential ``phi`` on a region.

    ``lhs = int beta^phi + int_{bd R} J^phi`` and
    ``rhs = (-1)**(n-1) int J^dphi + int sigma^phi``.
    """
    n = _check_spatial_degrees(beta, flux, sigma)
    if phi.degree != 0 or phi.dim != n:
        raise DegreeError(f"potential must be a 0-form on dimension {n}")
    b, j, s = at_time(beta, t), at_time(flux, t), at_time(sigma, t)
    lhs = integrate(wedge(b, phi), region, rule, support) + integrate(
        wedge(j, phi), chain_boundary(region), rule, support
    )
    rhs = (-1) ** (n - 1) * integrate(wedge(j, exterior_derivative(phi)), region, rule, support) + integrate(
        wedge(s, phi), region, rule, support
    )
    return lhs, rhs


def spacetime_power_functional(
    spacetime_flux: DifferentialForm,
    spacetime_source: DifferentialForm,
    phi: DifferentialForm,
    region: Chain,
    rule: QuadratureRule | None = None,
    support: SupportBox | None = None,
) -> tuple[float, float]:
    """``int_{bd R} Jst^phi`` against ``(-1)**n int Jst^dphi + int s^phi`` on a spacetime region."""
    n = spacetime_flux.degree
    if phi.degree != 0 or spacetime_source.degree != n + 1 or region.dimension != n + 1:
        raise DegreeError("spacetime power needs a 0-form potential, an (n+1)-source and an (n+1)-region")
    lhs = integrate(wedge(spacetime_flux, phi), chain_boundary(region), rule, support)
    rhs = (-1) ** n * integrate(wedge(spacetime_flux, exterior_derivative(phi)), region, rule, support) + integrate(
        wedge(spacetime_source, phi), region, rule, support
    )
    return lhs, rhs
