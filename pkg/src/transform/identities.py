"""Numerical checks of the algebraic identities linking the two systems."""

from __future__ import annotations

from typing import Literal

import numpy as np

from src.domain.grid import RadialGrid
from src.domain.norms import radial_derivative
from src.domain.state import ReformState
from src.errors import DomainError
from src.params.physical import PhysParams
from src.transform.variables import positive_power

Grouping = Literal["reformulated", "expanded"]


def momentum_source(
    u: np.ndarray,
    v: np.ndarray,
    u_r: np.ndarray,
    r: np.ndarray,
    delta: float,
    grouping: Grouping = "reformulated",
) -> np.ndarray:
    """The (v − u) source group of the momentum equation.

    ``reformulated``: δ(v−u)u_r + (δ−1)(v−u)(2/r)u.
    ``expanded``:     (v−u)u_r + (δ−1)(v−u)(u_r + 2u/r).
    """

    w = np.asarray(v, dtype=float) - np.asarray(u, dtype=float)
    if grouping == "reformulated":
        return delta * w * u_r + (delta - 1.0) * w * (2.0 / r) * u
    if grouping == "expanded":
        return w * u_r + (delta - 1.0) * w * (u_r + 2.0 * u / r)
    raise DomainError(f"unknown source grouping {grouping!r}")


def momentum_forms_agree(state: ReformState, grid: RadialGrid, params: PhysParams) -> float:
    """Largest nodal gap between the two source groupings."""

    u_r = radial_derivative(grid, state.u)
    first = momentum_source(state.u, state.v, u_r, grid.nodes, params.delta, "reformulated")
    second = momentum_source(state.u, state.v, u_r, grid.nodes, params.delta, "expanded")
    return float(np.max(np.abs(first - second)))


def pressure_gradient_identity_residual(
    state: ReformState, params: PhysParams, grid: RadialGrid
) -> float:
    """max |∂_r(ρ^γ) − (γ/2δ) ρ^{γ+1−δ} (v − u)| over the nodes."""

    state.check_grid(grid)
    pressure = positive_power(state.rho, params.gamma)
    lhs = radial_derivative(grid, pressure)
    rhs = (
        params.damping_coeff
        * positive_power(state.rho, params.gamma + 1.0 - params.delta)
        * (state.v - state.u)
    )
    return float(np.max(np.abs(lhs - rhs)))
