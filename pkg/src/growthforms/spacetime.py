"""Product spacetime: lifting spatial forms and assembling the spacetime flux and source."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from growthforms.exceptions import DegreeError, DimensionMismatchError
from growthforms.exterior import (
    DifferentialForm,
    TimeDependentForm,
    VectorField,
    as_family,
    contract,
    wedge,
)
from growthforms.geometry import Chain, ChartDomain, Interval

SpatialForm = TimeDependentForm | DifferentialForm


@dataclass(frozen=True)
class SpacetimeChart:
    """Time interval times a spatial chart; time is axis 0 and never periodic."""

    space: ChartDomain
    time_bounds: Interval

    @property
    def space_dim(self) -> int:
        return self.space.dim

    @property
    def dim(self) -> int:
        return self.space.dim + 1

    @cached_property
    def chart(self) -> ChartDomain:
        return ChartDomain(
            (self.time_bounds,) + self.space.bounds,
            (False,) + self.space.periodic,
            tuple(a + 1 for a in self.space.excluded),
            ("t",) + self.space.labels,
        )

    @property
    def dt(self) -> DifferentialForm:
        return time_covector(self.space_dim)

    @property
    def d_t(self) -> VectorField:
        return VectorField.basis(self.dim, 0)

    def ambient_chain(self) -> Chain:
        return Chain.from_domain(self.chart)


def time_covector(space_dim: int) -> DifferentialForm:
    return DifferentialForm.basis(space_dim + 1, (0,))


def lift(a: SpatialForm) -> DifferentialForm:
    """Spacetime form with the same spatial components; ``d_t _| lift(a) = 0``."""
    return as_family(a).spacetime_form


def _same_space(*forms: SpatialForm) -> int:
    dims = {f.space_dim if isinstance(f, TimeDependentForm) else f.dim for f in forms}
    if len(dims) != 1:
        raise DimensionMismatchError(f"spatial forms live on different dimensions {sorted(dims)}")
    return dims.pop()


def assemble_spacetime_flux(rho: SpatialForm, flux: SpatialForm) -> DifferentialForm:
    """``-dt ^ J + rho`` from a density n-form and a flux (n-1)-form."""
    n = _same_space(rho, flux)
    if rho.degree != n or flux.degree != n - 1:
        raise DegreeError(f"need degrees ({n}, {n - 1}), got ({rho.degree}, {flux.degree})")
    return lift(rho) - wedge(time_covector(n), lift(flux))


def assemble_spacetime_source(sigma: SpatialForm) -> DifferentialForm:
    """``dt ^ sigma``."""
    n = _same_space(sigma)
    if sigma.degree != n:
        raise DegreeError(f"a source density has degree {n}, got {sigma.degree}")
    return wedge(time_covector(n), lift(sigma))


def assemble_spacetime_rate(beta: SpatialForm) -> DifferentialForm:
    """``dt ^ beta``, the rate form whose balance with the flux reproduces the source."""
    n = _same_space(beta)
    if beta.degree != n:
        raise DegreeError(f"a density rate has degree {n}, got {beta.degree}")
    return wedge(time_covector(n), lift(beta))


def project_flux(spacetime_flux: DifferentialForm) -> TimeDependentForm:
    """Spatial flux ``J = -(d_t _| Jst)``."""
    d_t = VectorField.basis(spacetime_flux.dim, 0)
    return TimeDependentForm.from_spacetime(-contract(d_t, spacetime_flux))


def extract_density(spacetime_flux: DifferentialForm) -> TimeDependentForm:
    """The dt-free part of the spacetime flux."""
    return TimeDependentForm.from_spacetime(
        DifferentialForm(
            spacetime_flux.dim,
            spacetime_flux.degree,
            {k: f for k, f in spacetime_flux.coeffs.items() if 0 not in k},
        )
    )


def extract_source(spacetime_source: DifferentialForm) -> TimeDependentForm:
    """Spatial source ``sigma = d_t _| s``."""
    d_t = VectorField.basis(spacetime_source.dim, 0)
    return TimeDependentForm.from_spacetime(contract(d_t, spacetime_source))
