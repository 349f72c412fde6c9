"""Face-based strain rates and the viscous operator they generate.

The viscous dissipation of a radial flow splits into an expansion and a shear
part,

    D(u) = Σ_f μ_f r_f² Δ_f [(2δ − 4/3) E_f² + (4/3) S_f²],

with E = u_r + 2u/r = r^{-2}(r²u)_r and S = u_r − u/r = E − 3u/r evaluated on
faces. The momentum kernel's viscous force is minus the gradient of the same
quadratic form, so the dissipation a step removes from the energy is exactly the
functional the diagnostics report.

Conventions
-----------
- Face f sits between nodes f − 1 ("lo") and f ("hi"); Δ_f is the node gap,
  or the half cell between a wall and its neighbouring node.
- Walls carry prescribed velocities (``inner_value``, ``outer_value``); a
  ``neumann`` outer boundary copies the last node velocity to the wall.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.domain.grid import RadialGrid
from src.errors import DomainError
from src.kernels.tridiagonal import tridiagonal_matvec


@dataclass(frozen=True)
class ViscousOperator:
    """Bands of a tridiagonal operator plus the contribution of the boundary data."""

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    boundary: np.ndarray

    def apply(self, u: np.ndarray) -> np.ndarray:
        return tridiagonal_matvec(self.lower, self.diag, self.upper, u) + self.boundary


@dataclass(frozen=True)
class StrainStencil:
    """E_f = e_lo·u_lo + e_hi·u_hi + e_wall, and likewise S_f, on the n + 1 faces."""

    e_lo: np.ndarray
    e_hi: np.ndarray
    e_wall: np.ndarray
    s_lo: np.ndarray
    s_hi: np.ndarray
    s_wall: np.ndarray
    measure: np.ndarray

    def rates(self, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        padded = np.concatenate(([0.0], u, [0.0]))
        lo, hi = padded[:-1], padded[1:]
        expansion = self.e_lo * lo + self.e_hi * hi + self.e_wall
        shear = self.s_lo * lo + self.s_hi * hi + self.s_wall
        return expansion, shear


def face_weights(grid: RadialGrid) -> np.ndarray:
    """Weight of the upper node in the linear interpolation to each interior face."""

    nodes = grid.nodes
    return (grid.faces[1:-1] - nodes[:-1]) / (nodes[1:] - nodes[:-1])


def strain_stencil(
    grid: RadialGrid,
    outer_bc: str = "dirichlet",
    inner_value: float = 0.0,
    outer_value: float = 0.0,
) -> StrainStencil:
    r, x = grid.nodes, grid.faces
    n = grid.n
    spacing = np.concatenate(([r[0] - grid.a], np.diff(r), [grid.r_max - r[-1]]))
    denom = x**2 * spacing

    e_lo, e_hi, e_wall = np.zeros(n + 1), np.zeros(n + 1), np.zeros(n + 1)
    w_lo, w_hi, u_wall = np.zeros(n + 1), np.zeros(n + 1), np.zeros(n + 1)
    e_lo[1:] = -(r**2) / denom[1:]
    e_hi[:-1] = r**2 / denom[:-1]
    alpha = face_weights(grid)
    w_lo[1:-1] = 1.0 - alpha
    w_hi[1:-1] = alpha

    e_wall[0] = -inner_value / spacing[0]
    u_wall[0] = inner_value
    if outer_bc == "dirichlet":
        e_wall[-1] = outer_value / spacing[-1]
        u_wall[-1] = outer_value
    elif outer_bc == "neumann":
        # Zero gradient: the wall carries the last node velocity, E = 2u/r_max.
        e_lo[-1] = 2.0 / grid.r_max
        w_lo[-1] = 1.0
    else:
        raise DomainError(f"unknown outer boundary condition {outer_bc!r}")

    return StrainStencil(
        e_lo=e_lo,
        e_hi=e_hi,
        e_wall=e_wall,
        s_lo=e_lo - 3.0 * w_lo / x,
        s_hi=e_hi - 3.0 * w_hi / x,
        s_wall=e_wall - 3.0 * u_wall / x,
        measure=denom,
    )


def face_viscosity(mu: np.ndarray) -> np.ndarray:
    """Arithmetic face averages of μ; walls take the neighbouring node value."""

    return np.concatenate(([mu[0]], 0.5 * (mu[:-1] + mu[1:]), [mu[-1]]))


def _split_coefficients(delta: float) -> tuple[float, float]:
    return 2.0 * delta - 4.0 / 3.0, 4.0 / 3.0


def strain_dissipation(
    grid: RadialGrid,
    u: np.ndarray,
    mu: np.ndarray,
    delta: float,
    outer_bc: str = "dirichlet",
    inner_value: float = 0.0,
    outer_value: float = 0.0,
) -> tuple[float, float]:
    """(expansion, shear) parts of D(u) for the node viscosity ``mu``."""

    u = grid.check_field(u, "u")
    mu = grid.check_field(mu, "mu")
    stencil = strain_stencil(grid, outer_bc, inner_value, outer_value)
    expansion, shear = stencil.rates(u)
    weight = face_viscosity(mu) * stencil.measure
    c_e, c_s = _split_coefficients(delta)
    return (
        float(np.sum(weight * c_e * expansion**2)),
        float(np.sum(weight * c_s * shear**2)),
    )


def strain_operator(
    grid: RadialGrid,
    mu: np.ndarray,
    delta: float,
    outer_bc: str = "dirichlet",
    inner_value: float = 0.0,
    outer_value: float = 0.0,
) -> ViscousOperator:
    """Viscous force −½∂D/∂u_i per node, as bands plus the wall-data vector.

    ``apply(u) · u = −D(u)`` for zero wall data; the bands are symmetric and,
    for δ ≥ 2/3, negative semidefinite.
    """

    mu = grid.check_field(mu, "mu")
    stencil = strain_stencil(grid, outer_bc, inner_value, outer_value)
    weight = face_viscosity(mu) * stencil.measure
    c_e, c_s = _split_coefficients(delta)
    k_e, k_s = c_e * weight, c_s * weight
    e_lo, e_hi, s_lo, s_hi = stencil.e_lo, stencil.e_hi, stencil.s_lo, stencil.s_hi

    diag = (k_e * e_hi**2 + k_s * s_hi**2)[:-1] + (k_e * e_lo**2 + k_s * s_lo**2)[1:]
    coupling = (k_e * e_lo * e_hi + k_s * s_lo * s_hi)[1:-1]
    wall = (k_e * e_hi * stencil.e_wall + k_s * s_hi * stencil.s_wall)[:-1] + (
        k_e * e_lo * stencil.e_wall + k_s * s_lo * stencil.s_wall
    )[1:]

    lower = np.zeros(grid.n)
    upper = np.zeros(grid.n)
    lower[1:] = -coupling
    upper[:-1] = -coupling
    return ViscousOperator(lower=lower, diag=-diag, upper=upper, boundary=-wall)
