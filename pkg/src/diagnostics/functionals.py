"""Integral and supremum functionals of a state, evaluated as runtime monitors.

Every integral goes through :func:`src.domain.norms.midpoint_integral`, so the
functionals share one quadrature with the transport kernels' cell measure.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
import math

import numpy as np

from src.diagnostics.weights import zeta_weight
from src.domain.grid import RadialGrid
from src.domain.norms import (
    l2_norm,
    midpoint_integral,
    radial_derivative,
    sup_norm,
    weighted_lp_norm,
)
from src.domain.state import ReformState
from src.errors import DomainError
from src.kernels.strain import strain_dissipation
from src.params.admissibility import p_star
from src.params.physical import PhysParams
from src.transform.variables import positive_power


def mass(state, grid: RadialGrid) -> float:
    """∫ r²ρ dr."""

    return weighted_lp_norm(grid, np.ones(grid.n), state.rho, p=1.0, r_pow=2.0, rho_pow=1.0)


def _pressure_part(state, grid: RadialGrid, params: PhysParams) -> float:
    r2 = grid.nodes**2
    return midpoint_integral(grid, r2 * positive_power(state.rho, params.gamma)) / (
        params.gamma - 1.0
    )


def viscosity(state, params: PhysParams) -> np.ndarray:
    """μ = ρh/2 for the reformulated fields, ρ^δ for a primitive state."""

    if isinstance(state, ReformState):
        return 0.5 * state.rho * state.h
    return positive_power(state.rho, params.delta)


def dissipation_terms(
    state, grid: RadialGrid, params: PhysParams, *, outer_bc: str = "dirichlet"
) -> tuple[float, float]:
    """(expansion, shear) parts of the viscous dissipation rate on the faces.

    This is the quadratic form whose gradient is the viscous force of the
    momentum solve; see :mod:`src.kernels.strain`.
    """

    return strain_dissipation(grid, state.u, viscosity(state, params), params.delta, outer_bc)


def step_dissipation(
    first, second, grid: RadialGrid, params: PhysParams, *, outer_bc: str = "dirichlet"
) -> float:
    """Dissipation over the interval between two states, by the midpoint rule.

    Velocity and viscosity are both averaged between the end points, matching
    the time-centred coefficients of the momentum step.
    """

    u = 0.5 * (first.u + second.u)
    mu = 0.5 * (viscosity(first, params) + viscosity(second, params))
    expansion, shear = strain_dissipation(grid, u, mu, params.delta, outer_bc)
    return (second.t - first.t) * (expansion + shear)


def energy_and_bd(
    state: ReformState, grid: RadialGrid, params: PhysParams, *, outer_bc: str = "dirichlet"
) -> tuple[float, float, float, float]:
    """(energy, bd_energy, dissipation_expansion, dissipation_shear) for γ > 1."""

    if params.isothermal:
        raise DomainError("energy_and_bd needs gamma > 1; use isothermal_energy")
    r2 = grid.nodes**2
    pressure = _pressure_part(state, grid, params)
    energy = midpoint_integral(grid, 0.5 * r2 * state.rho * state.u**2) + pressure
    bd_energy = midpoint_integral(grid, 0.5 * r2 * state.rho * state.v**2) + pressure
    return (energy, bd_energy, *dissipation_terms(state, grid, params, outer_bc=outer_bc))


def isothermal_energy(state: ReformState, grid: RadialGrid) -> tuple[float, float]:
    """γ = 1 energies ∫(r²ρu²/2 + r²ρ ln ρ) and the same with v."""

    r2 = grid.nodes**2
    internal = midpoint_integral(grid, r2 * state.rho * np.log(state.rho))
    return (
        midpoint_integral(grid, 0.5 * r2 * state.rho * state.u**2) + internal,
        midpoint_integral(grid, 0.5 * r2 * state.rho * state.v**2) + internal,
    )


def dissipation_split_identity(delta, r, u, u_r):
    """Both sides of the split of the viscous dissipation density (without ρ^δ).

    lhs = 2δ(r u_r)² + (8δ − 4)u² + (8δ − 8) r u u_r
    rhs = (2δ − 4/3) r²(u_r + 2u/r)² + (4/3) r²(u_r − u/r)²

    Arithmetic runs in the widest dtype of the inputs, 4/3 included.
    """

    kind = np.result_type(delta, r, u, u_r, 1.0).type
    four_thirds = kind(4) / kind(3)
    lhs = (
        2 * delta * (r * u_r) ** 2
        + (8 * delta - 4) * u**2
        + (8 * delta - 8) * r * u * u_r
    )
    expansion = u_r + 2 * u / r
    shear = u_r - u / r
    rhs = (2 * delta - four_thirds) * r**2 * expansion**2 + four_thirds * r**2 * shear**2
    return lhs, rhs


def dissipation_split_gap(delta, r, u, u_r):
    """|lhs − rhs| / max(|lhs|, 1), with both sides evaluated in extended precision."""

    wide = (np.asarray(x, dtype=np.longdouble) for x in (delta, r, u, u_r))
    lhs, rhs = dissipation_split_identity(*wide)
    return np.asarray(np.abs(lhs - rhs) / np.maximum(np.abs(lhs), 1), dtype=float)


def gamma1_entropy(state, grid: RadialGrid, params: PhysParams) -> tuple[float, float]:
    """(−∫r²ρ ln ρ dr, ∫r^{2+α}ρ dr) for the isothermal case."""

    if not params.isothermal:
        raise DomainError("gamma1_entropy needs gamma = 1")
    rho = positive_power(state.rho, 1.0)
    log_entropy = -midpoint_integral(grid, grid.nodes**2 * rho * np.log(rho))
    return log_entropy, moment(state, grid, params.alpha)


def moment(state, grid: RadialGrid, alpha: float) -> float:
    """∫ r^{2+α} ρ dr."""

    return midpoint_integral(grid, grid.nodes ** (2.0 + alpha) * state.rho)


def zeta_moment(state, grid: RadialGrid, alpha: float, radius: float) -> float:
    """∫ r^{2+α} ζ(r/radius) ρ dr."""

    if not radius > 0.0:
        raise DomainError(f"radius must be positive, got {radius}")
    weight = zeta_weight(grid.nodes / radius)
    return midpoint_integral(grid, grid.nodes ** (2.0 + alpha) * weight * state.rho)


def density_bound_functionals(state, grid: RadialGrid, params: PhysParams) -> tuple[float, float]:
    """(sup ρ^{δ−1/2}, ‖∂_r ρ^{δ−1/2}‖₂)."""

    field = positive_power(state.rho, params.delta - 0.5)
    return sup_norm(field), l2_norm(grid, radial_derivative(grid, field))


def bd_dissipation(state, grid: RadialGrid, params: PhysParams) -> float:
    """2γδ ∫ r² ρ^{γ+δ−3} ρ_r² dr."""

    rho_r = radial_derivative(grid, state.rho)
    weight = positive_power(state.rho, params.gamma + params.delta - 3.0)
    return (
        2.0
        * params.gamma
        * params.delta
        * midpoint_integral(grid, grid.nodes**2 * weight * rho_r**2)
    )


@dataclass(frozen=True)
class DiagnosticsReport:
    mass: float
    energy: float
    bd_energy: float
    dissipation_expansion: float
    dissipation_shear: float
    rho_sup: float
    r_field_sup: float
    wlp_u: float
    wlp_v: float
    moment_alpha: float
    log_entropy: float
    ru_l2: float
    rv_l2: float
    v_sup: float
    r_field_grad_l2: float
    bd_dissipation: float
    moment_zeta: float
    ru_r_l2: float
    u_sup: float

    @property
    def dissipation(self) -> float:
        return self.dissipation_expansion + self.dissipation_shear

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def full_report(
    state: ReformState,
    grid: RadialGrid,
    params: PhysParams,
    *,
    zeta_radius: float | None = None,
    outer_bc: str = "dirichlet",
) -> DiagnosticsReport:
    """Evaluate every monitor on ``state``.

    ``zeta_radius`` defaults to half the truncation radius.
    """

    state.check_grid(grid)
    r = grid.nodes
    if params.isothermal:
        energy, bd_energy = isothermal_energy(state, grid)
        expansion, shear = dissipation_terms(state, grid, params, outer_bc=outer_bc)
        log_entropy, moment_alpha = gamma1_entropy(state, grid, params)
    else:
        energy, bd_energy, expansion, shear = energy_and_bd(
            state, grid, params, outer_bc=outer_bc
        )
        log_entropy, moment_alpha = math.nan, moment(state, grid, 0.0)

    p = p_star(params.delta)
    r_field_sup, r_field_grad_l2 = density_bound_functionals(state, grid, params)
    radius = 0.5 * grid.r_max if zeta_radius is None else zeta_radius
    return DiagnosticsReport(
        mass=mass(state, grid),
        energy=energy,
        bd_energy=bd_energy,
        dissipation_expansion=expansion,
        dissipation_shear=shear,
        rho_sup=sup_norm(state.rho),
        r_field_sup=r_field_sup,
        wlp_u=weighted_lp_norm(grid, state.u, state.rho, p, 2.0 / p, 1.0 / p),
        wlp_v=weighted_lp_norm(grid, state.v, state.rho, p, 2.0 / p, 1.0 / p),
        moment_alpha=moment_alpha,
        log_entropy=log_entropy,
        ru_l2=l2_norm(grid, r * state.u),
        rv_l2=l2_norm(grid, r * state.v),
        v_sup=sup_norm(state.v),
        r_field_grad_l2=r_field_grad_l2,
        bd_dissipation=bd_dissipation(state, grid, params),
        moment_zeta=zeta_moment(state, grid, params.moment_exponent, radius),
        ru_r_l2=l2_norm(grid, r * radial_derivative(grid, state.u)),
        u_sup=sup_norm(state.u),
    )
