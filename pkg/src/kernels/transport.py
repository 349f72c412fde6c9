"""Transport kernels for ρ, the advected scalars h and φ, and the effective velocity.

Assumptions
-----------
- Node velocities live at cell centres; :func:`face_velocity` interpolates them
  to faces and imposes u(a) = 0 together with the outer condition.
- The density update is a finite-volume flux difference with the spherical cell
  measure V_i = r_i² dr_i, so Σ ρ_i V_i changes only through the boundary faces.
- h, φ and v are advected in non-conservative form with first-order upwinding
  (or a semi-Lagrangian foot-point interpolation in ``characteristics`` mode).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Mapping

import numpy as np

from src.domain.grid import RadialGrid
from src.errors import CFLViolation, DomainError, PositivityError
from src.kernels.strain import face_weights
from src.params.physical import PhysParams

TransportMode = Literal["conservative_fv", "upwind_fd", "characteristics"]
Limiter = Literal["none", "minmod"]
OuterBC = Literal["dirichlet", "neumann"]

CFL_LIMIT = 0.9


@dataclass(frozen=True)
class TransportScheme:
    """How h and φ are advected, and which limiter the density fluxes use.

    The density always goes through the conservative finite-volume update, so
    ``mode`` only selects the scheme for the non-conservative scalars.
    """

    mode: TransportMode = "conservative_fv"
    limiter: Limiter = "none"

    def __post_init__(self) -> None:
        if self.mode not in ("conservative_fv", "upwind_fd", "characteristics"):
            raise DomainError(f"unknown transport mode {self.mode!r}")
        if self.limiter not in ("none", "minmod"):
            raise DomainError(f"unknown limiter {self.limiter!r}")

    @property
    def scalar_mode(self) -> TransportMode:
        # h and φ have no conservative form; fall back to upwinding.
        return "upwind_fd" if self.mode == "conservative_fv" else self.mode

    @classmethod
    def from_mapping(cls, mapping: Mapping) -> "TransportScheme":
        return cls(
            mode=mapping.get("transport_mode", "conservative_fv"),
            limiter=mapping.get("limiter", "none"),
        )


def check_cfl(
    speed: np.ndarray | float, dt: float, grid: RadialGrid, limit: float = CFL_LIMIT
) -> float:
    """Return the CFL number max|speed|·dt/min(dr), raising above ``limit``."""

    if not dt > 0.0:
        raise DomainError(f"dt must be positive, got {dt}")
    number = float(np.max(np.abs(speed))) * dt / grid.min_dr
    if not number <= limit:
        raise CFLViolation(f"CFL number {number:.4g} exceeds {limit}")
    return number


def face_velocity(
    grid: RadialGrid,
    u: np.ndarray,
    outer_bc: OuterBC = "dirichlet",
    inner_value: float = 0.0,
    outer_value: float = 0.0,
) -> np.ndarray:
    """Interpolate node velocities to the n + 1 faces."""

    u = grid.check_field(u, "u")
    weight = face_weights(grid)
    out = np.empty(grid.n + 1)
    out[1:-1] = u[:-1] + weight * (u[1:] - u[:-1])
    out[0] = inner_value
    if outer_bc == "dirichlet":
        out[-1] = outer_value
    elif outer_bc == "neumann":
        out[-1] = u[-1]
    else:
        raise DomainError(f"unknown outer boundary condition {outer_bc!r}")
    return out


def volumetric_expansion(grid: RadialGrid, u_face: np.ndarray) -> np.ndarray:
    """Cell average of u_r + 2u/r = r^{-2}(r²u)_r from face velocities."""

    flux = grid.faces**2 * u_face
    return np.diff(flux) / (grid.nodes**2 * grid.dr)


def _minmod(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    return np.where(left * right > 0.0, np.sign(left) * np.minimum(abs(left), abs(right)), 0.0)


def _face_states(
    rho: np.ndarray, grid: RadialGrid, limiter: Limiter
) -> tuple[np.ndarray, np.ndarray]:
    """Left and right density states at the interior faces."""

    if limiter == "none":
        return rho[:-1], rho[1:]
    gaps = np.diff(rho) / np.diff(grid.nodes)
    slope = np.zeros_like(rho)
    slope[1:-1] = _minmod(gaps[:-1], gaps[1:])
    inner_faces = grid.faces[1:-1]
    left = rho[:-1] + slope[:-1] * (inner_faces - grid.nodes[:-1])
    right = rho[1:] - slope[1:] * (grid.nodes[1:] - inner_faces)
    return left, right


def face_mass(
    rho: np.ndarray,
    grid: RadialGrid,
    direction: np.ndarray,
    limiter: Limiter = "none",
) -> np.ndarray:
    """r_f²·ρ_f on the n + 1 faces, with ρ_f taken upwind of ``direction``.

    Interior faces where ``direction`` vanishes take the mean of the two states;
    the wall faces take the neighbouring node value.
    """

    rho = grid.check_field(rho, "rho")
    direction = np.asarray(direction, dtype=float)
    if direction.shape != (grid.n + 1,):
        raise DomainError(f"direction needs {grid.n + 1} entries, got {direction.shape}")
    left, right = _face_states(rho, grid, limiter)
    inner = direction[1:-1]
    density = np.empty(grid.n + 1)
    mean = 0.5 * (left + right)
    density[1:-1] = np.where(inner > 0.0, left, np.where(inner < 0.0, right, mean))
    density[0] = rho[0]
    density[-1] = rho[-1]
    return grid.faces**2 * density


def step_continuity(
    rho: np.ndarray,
    u_face: np.ndarray,
    dt: float,
    grid: RadialGrid,
    limiter: Limiter = "none",
    *,
    mass: np.ndarray | None = None,
) -> np.ndarray:
    """One finite-volume step of ρ_t + r^{-2}(r²ρu)_r = 0 with fluxes mass·u_face.

    ``mass`` holds the face coefficients r_f²ρ_f; by default they come from
    ``rho`` upwinded against ``u_face`` (a forward-Euler step).
    """

    rho = grid.check_field(rho, "rho")
    u_face = np.asarray(u_face, dtype=float)
    if u_face.shape != (grid.n + 1,):
        raise DomainError(f"u_face needs {grid.n + 1} entries, got {u_face.shape}")
    check_cfl(u_face, dt, grid)
    if mass is None:
        mass = face_mass(rho, grid, u_face, limiter)
    elif np.shape(mass) != (grid.n + 1,):
        raise DomainError(f"mass needs {grid.n + 1} entries, got {np.shape(mass)}")

    flux = mass * u_face
    volume = grid.nodes**2 * grid.dr
    return rho - dt * np.diff(flux) / volume


def _upwind_gradient(q: np.ndarray, speed: np.ndarray, grid: RadialGrid) -> np.ndarray:
    """One-sided ∂_r q taken against the flow; zero-gradient ghosts at the ends."""

    spacing = np.diff(grid.nodes)
    gaps = np.diff(q) / spacing
    backward = np.concatenate(([0.0], gaps))
    forward = np.concatenate((gaps, [0.0]))
    return np.where(speed > 0.0, backward, forward)


def _advect(
    q: np.ndarray, u: np.ndarray, dt: float, grid: RadialGrid, mode: TransportMode
) -> np.ndarray:
    if mode == "characteristics":
        if not dt > 0.0:
            raise DomainError(f"dt must be positive, got {dt}")
        feet = np.clip(grid.nodes - dt * u, grid.nodes[0], grid.nodes[-1])
        return np.interp(feet, grid.nodes, q)
    check_cfl(u, dt, grid)
    return q - dt * u * _upwind_gradient(q, u, grid)


def step_advected_scalar(
    q: np.ndarray,
    u: np.ndarray,
    coeff: float,
    dt: float,
    grid: RadialGrid,
    *,
    outer_bc: OuterBC = "dirichlet",
    mode: TransportMode = "upwind_fd",
) -> np.ndarray:
    """Advance q_t + u q_r + coeff·q·(u_r + 2u/r) = 0 by one step.

    The stretching factor 1 − dt·coeff·div is applied after the advection, so
    positivity survives whenever dt·|coeff|·max|div| < 1.
    """

    q = grid.check_field(q, "q")
    u = grid.check_field(u, "u")
    advected = _advect(q, u, dt, grid, mode)

    divergence = volumetric_expansion(grid, face_velocity(grid, u, outer_bc))
    stretch = dt * abs(coeff) * float(np.max(np.abs(divergence), initial=0.0))
    if stretch >= 1.0:
        raise PositivityError(f"stretching number {stretch:.4g} >= 1; reduce dt")
    result = advected * (1.0 - dt * coeff * divergence)
    if np.any(q > 0.0) and not np.all(result > 0.0):
        raise PositivityError("advected scalar lost positivity; reduce dt")
    return result


def step_effective_velocity(
    v: np.ndarray,
    u: np.ndarray,
    phi: np.ndarray,
    dt: float,
    grid: RadialGrid,
    params: PhysParams,
) -> np.ndarray:
    """Advance v_t + u v_r + (γ/2δ)φ(v − u) = 0: upwind advection, then exact damping."""

    v = grid.check_field(v, "v")
    u = grid.check_field(u, "u")
    phi = grid.check_field(phi, "phi")
    advected = _advect(v, u, dt, grid, "upwind_fd")
    decay = np.exp(-params.damping_coeff * phi * dt)
    return u + (advected - u) * decay
