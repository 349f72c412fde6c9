"""Semi-implicit momentum update with the degenerate viscous operator.

Both forms share one θ-weighted tridiagonal solve per call.

- ``conservative`` (default) solves the velocity equation multiplied by ρ,

      ρ(u_t + u u_r) = −P_r + (δρh E)_r − (2/r)(ρh)_r u,    E = u_r + 2u/r.

  Since (ρh)_r/ρ = v − u and P_r/ρ = (γ/2δ)φ(v − u), this is the same equation
  as the reformulated one: the (v − u) sources become the coefficient gradient
  of the viscous term, which is the strain operator of
  :mod:`src.kernels.strain` with μ = ρh/2, treated θ-implicitly. The pressure
  force is the enthalpy jump carried by the continuity face fluxes and the
  advection is the skew-symmetric flux form, so a converged step trades
  kinetic, internal and dissipated energy with no spatial residue.
- ``reformulated`` keeps the advective form: δh(u_r + 2u/r)_r is implicit on
  faces with w = r²u, so u = c/r² lies exactly in the kernel of the discrete
  operator, and advection plus the (v − u) sources are explicit.

With ``include_sources`` off only the frozen-h diffusion and the forcing remain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Mapping

import numpy as np

from src.domain.grid import RadialGrid
from src.domain.state import ReformState
from src.errors import DomainError
from src.kernels.strain import ViscousOperator, face_weights, strain_operator
from src.kernels.transport import OuterBC, check_cfl, face_mass, face_velocity
from src.kernels.tridiagonal import solve_tridiagonal
from src.params.physical import PhysParams
from src.transform.identities import momentum_source
from src.transform.variables import enthalpy

MomentumForm = Literal["conservative", "reformulated"]


@dataclass(frozen=True)
class MomentumSolveConfig:
    theta: float = 1.0
    outer_bc: OuterBC = "dirichlet"
    include_sources: bool = True
    form: MomentumForm = "conservative"

    def __post_init__(self) -> None:
        if not 0.5 <= self.theta <= 1.0:
            raise DomainError(f"theta must lie in [0.5, 1], got {self.theta}")
        if self.outer_bc not in ("dirichlet", "neumann"):
            raise DomainError(f"unknown outer boundary condition {self.outer_bc!r}")
        if self.form not in ("conservative", "reformulated"):
            raise DomainError(f"unknown momentum form {self.form!r}")

    @classmethod
    def from_mapping(cls, mapping: Mapping) -> "MomentumSolveConfig":
        return cls(
            theta=float(mapping.get("theta", 1.0)),
            outer_bc=mapping.get("outer_bc", "dirichlet"),
            include_sources=bool(mapping.get("include_sources", True)),
            form=mapping.get("momentum_form", "conservative"),
        )


def viscous_operator(
    grid: RadialGrid,
    outer_bc: OuterBC = "dirichlet",
    inner_value: float = 0.0,
    outer_value: float = 0.0,
) -> ViscousOperator:
    """Assemble the three-point discretisation of (r^{-2}(r²u)_r)_r."""

    r, faces, dr = grid.nodes, grid.faces, grid.dr
    n = grid.n
    # coupling[f] multiplies the jump of r²u across face f.
    coupling = np.empty(n + 1)
    coupling[1:-1] = 1.0 / (np.diff(r) * faces[1:-1] ** 2)
    coupling[0] = 1.0 / ((r[0] - grid.a) * grid.a**2)
    coupling[-1] = 1.0 / ((grid.r_max - r[-1]) * grid.r_max**2)

    lower = np.zeros(n)
    upper = np.zeros(n)
    lower[1:] = coupling[1:-1] * r[:-1] ** 2 / dr[1:]
    upper[:-1] = coupling[1:-1] * r[1:] ** 2 / dr[:-1]
    diag = -(coupling[:-1] + coupling[1:]) * r**2 / dr

    boundary = np.zeros(n)
    boundary[0] = coupling[0] * grid.a**2 * inner_value / dr[0]
    if outer_bc == "dirichlet":
        boundary[-1] = coupling[-1] * grid.r_max**2 * outer_value / dr[-1]
    elif outer_bc == "neumann":
        # Zero gradient: the outer face carries u_r + 2u/r = 2u/r_max.
        diag[-1] = (2.0 / grid.r_max - coupling[-2] * r[-1] ** 2) / dr[-1]
    else:
        raise DomainError(f"unknown outer boundary condition {outer_bc!r}")
    return ViscousOperator(lower=lower, diag=diag, upper=upper, boundary=boundary)


def _advective_gradient(
    u: np.ndarray,
    speed: np.ndarray,
    grid: RadialGrid,
    outer_bc: OuterBC,
    inner_value: float,
    outer_value: float,
) -> np.ndarray:
    """Upwind ∂_r u against ``speed``, using the boundary data at the two ends."""

    padded_r = np.concatenate(([grid.a], grid.nodes, [grid.r_max]))
    padded_u = _padded(u, outer_bc, inner_value, outer_value)
    gaps = np.diff(padded_u) / np.diff(padded_r)
    return np.where(speed > 0.0, gaps[:-1], gaps[1:])


def _padded(u: np.ndarray, outer_bc: OuterBC, inner_value: float, outer_value: float):
    outer = outer_value if outer_bc == "dirichlet" else u[-1]
    return np.concatenate(([inner_value], u, [outer]))


def pressure_force(mass: np.ndarray, w: np.ndarray, grid: RadialGrid) -> np.ndarray:
    """Pressure force V_i·ρ_i·w_r from the enthalpy ``w`` and the face masses r_f²ρ_f.

    Each interior face jump mass_f·(w_hi − w_lo) is shared between its two nodes
    with the weights of the face velocity interpolation, so that
    Σ_i u_i·force_i = Σ_f mass_f·u_f·(w_hi − w_lo) for the interpolated u_f, the
    work the continuity fluxes do on the internal energy. The two end nodes have
    a single face jump and take all of it; the extra work is second order in
    the spacing because u vanishes at the walls.
    """

    jump = mass[1:-1] * np.diff(w)
    alpha = face_weights(grid)
    force = np.zeros(grid.n)
    force[:-1] += (1.0 - alpha) * jump
    force[1:] += alpha * jump
    force[0] += alpha[0] * jump[0]
    force[-1] += (1.0 - alpha[-1]) * jump[-1]
    return force


def _solve(
    operator: ViscousOperator,
    inertia: np.ndarray | float,
    start: np.ndarray,
    explicit: np.ndarray,
    dt: float,
    theta: float,
) -> np.ndarray:
    rhs = (
        inertia * start
        + (1.0 - theta) * dt * operator.apply(start)
        + theta * dt * operator.boundary
        + dt * explicit
    )
    scale = theta * dt
    return solve_tridiagonal(
        -scale * operator.lower,
        inertia - scale * operator.diag,
        -scale * operator.upper,
        rhs,
    )


def _reformulated_step(
    state: ReformState,
    start: np.ndarray,
    dt: float,
    grid: RadialGrid,
    params: PhysParams,
    cfg: MomentumSolveConfig,
    forcing: np.ndarray | None,
    inner_value: float,
    outer_value: float,
) -> np.ndarray:
    u = state.u
    diffusivity = params.delta * state.h
    laplacian = viscous_operator(grid, cfg.outer_bc, inner_value, outer_value)
    operator = ViscousOperator(
        lower=diffusivity * laplacian.lower,
        diag=diffusivity * laplacian.diag,
        upper=diffusivity * laplacian.upper,
        boundary=diffusivity * laplacian.boundary,
    )

    explicit = np.zeros(grid.n)
    if cfg.include_sources:
        speed = u - params.delta * (state.v - u)
        check_cfl(speed, dt, grid)
        u_r = _advective_gradient(u, speed, grid, cfg.outer_bc, inner_value, outer_value)
        damping = params.damping_coeff * state.phi * (state.v - u)
        explicit = -u * u_r - damping + momentum_source(u, state.v, u_r, grid.nodes, params.delta)
    if forcing is not None:
        explicit = explicit + forcing
    return _solve(operator, 1.0, start, explicit, dt, cfg.theta)


def _conservative_step(
    state: ReformState,
    old: ReformState,
    start: np.ndarray,
    dt: float,
    grid: RadialGrid,
    params: PhysParams,
    cfg: MomentumSolveConfig,
    forcing: np.ndarray | None,
    mass: np.ndarray | None,
    inner_value: float,
    outer_value: float,
) -> np.ndarray:
    bc = cfg.outer_bc
    # Time-centred frozen velocity and coefficients.
    frozen = 0.5 * (start + state.u)
    check_cfl(frozen, dt, grid)
    rho = 0.5 * (old.rho + state.rho)
    mu = 0.25 * (old.rho * old.h + state.rho * state.h)
    if mass is None:
        mass = face_mass(rho, grid, face_velocity(grid, start, bc, inner_value, outer_value))
    elif np.shape(mass) != (grid.n + 1,):
        raise DomainError(f"mass needs {grid.n + 1} entries, got {np.shape(mass)}")

    flux = mass * face_velocity(grid, frozen, bc, inner_value, outer_value)
    padded = _padded(frozen, bc, inner_value, outer_value)
    advection = -0.5 * (flux[1:] * (padded[2:] - frozen) + flux[:-1] * (frozen - padded[:-2]))
    w = 0.5 * (enthalpy(old.rho, params) + enthalpy(state.rho, params))
    inertia = grid.nodes**2 * grid.dr * rho
    explicit = advection - pressure_force(mass, w, grid)
    if forcing is not None:
        explicit = explicit + inertia * forcing

    operator = strain_operator(grid, mu, params.delta, bc, inner_value, outer_value)
    return _solve(operator, inertia, start, explicit, dt, cfg.theta)


def step_momentum(
    state: ReformState,
    dt: float,
    grid: RadialGrid,
    params: PhysParams,
    cfg: MomentumSolveConfig,
    *,
    u_old: np.ndarray | None = None,
    forcing: np.ndarray | None = None,
    inner_value: float = 0.0,
    outer_value: float = 0.0,
    previous: ReformState | None = None,
    mass: np.ndarray | None = None,
) -> np.ndarray:
    """Advance u by one θ-step.

    ``state`` supplies the coefficients of the new level (ρ, h, φ, v) and the
    iterate u used by the explicit terms. ``previous`` is the old time level
    (defaults to ``state``) and ``u_old`` the velocity the step starts from
    (defaults to ``previous.u``). ``forcing`` is an acceleration added to the
    right-hand side. ``mass`` holds the face coefficients r_f²ρ_f of the
    continuity fluxes that produced ``state.rho``; the conservative pressure
    force is built from them.
    """

    state.check_grid(grid)
    if not dt > 0.0:
        raise DomainError(f"dt must be positive, got {dt}")
    old = state if previous is None else previous
    old.check_grid(grid)
    start = old.u if u_old is None else grid.check_field(u_old, "u_old")
    if forcing is not None:
        forcing = grid.check_field(forcing, "forcing")

    if cfg.include_sources and cfg.form == "conservative":
        return _conservative_step(
            state, old, start, dt, grid, params, cfg, forcing, mass, inner_value, outer_value
        )
    return _reformulated_step(
        state, start, dt, grid, params, cfg, forcing, inner_value, outer_value
    )
