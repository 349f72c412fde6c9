"""Change of variables between (ρ, u) and (ρ, h, φ, v, u).

Powers of ρ are taken as exp(k·ln ρ) so densities near the floor neither
underflow nor lose relative precision for negative exponents.
"""

from __future__ import annotations

from typing import Literal

import numpy as np

from src.domain.grid import RadialGrid
from src.domain.norms import radial_derivative
from src.domain.state import PrimitiveState, ReformState
from src.errors import DomainError, PositivityError
from src.params.physical import PhysParams

Via = Literal["h", "rho"]


def positive_power(values: np.ndarray, exponent: float, name: str = "rho") -> np.ndarray:
    """Return values**exponent in log space, rejecting non-positive entries."""

    values = np.asarray(values, dtype=float)
    if values.size and not np.all(values > 0.0):
        raise PositivityError(f"{name} must be strictly positive, min={values.min()!r}")
    return np.exp(exponent * np.log(values))


def effective_velocity(
    grid: RadialGrid,
    rho: np.ndarray,
    u: np.ndarray,
    params: PhysParams,
    via: Via = "h",
) -> np.ndarray:
    """v = u + 2δρ^{δ−2}ρ_r, evaluated either through h = 2ρ^{δ−1} or through ρ."""

    delta = params.delta
    if via == "h":
        h = 2.0 * positive_power(rho, delta - 1.0)
        return np.asarray(u, dtype=float) + delta / (delta - 1.0) * radial_derivative(grid, h)
    if via == "rho":
        coeff = 2.0 * delta * positive_power(rho, delta - 2.0)
        return np.asarray(u, dtype=float) + coeff * radial_derivative(grid, rho)
    raise DomainError(f"unknown derivative route {via!r}")


def to_reformulated(
    state: PrimitiveState,
    params: PhysParams,
    grid: RadialGrid,
    via: Via = "h",
) -> ReformState:
    """Build (ρ, h, φ, v, u) from a primitive state."""

    state.check_grid(grid)
    rho = state.rho
    h = 2.0 * positive_power(rho, params.delta - 1.0)
    phi = positive_power(rho, params.gamma - params.delta)
    v = effective_velocity(grid, rho, state.u, params, via=via)
    return ReformState(t=state.t, rho=rho, h=h, phi=phi, v=v, u=state.u)


def to_primitive(state: ReformState, params: PhysParams) -> PrimitiveState:
    """Recover ρ = (h/2)^{1/(δ−1)} and keep u."""

    rho = positive_power(0.5 * state.h, 1.0 / (params.delta - 1.0), name="h")
    return PrimitiveState(t=state.t, rho=rho, u=state.u)


def sound_speed(rho: np.ndarray, params: PhysParams) -> np.ndarray:
    """c_s = √(P'(ρ)) = √(γρ^{γ−1})."""

    return np.sqrt(params.gamma * positive_power(rho, params.gamma - 1.0))


def enthalpy(rho: np.ndarray, params: PhysParams) -> np.ndarray:
    """Specific enthalpy w with w_r = P_r/ρ = (γ/2δ)φ(v − u).

    γ/(γ − 1)·ρ^{γ−1} for γ > 1 and ln ρ in the isothermal case.
    """

    if params.isothermal:
        rho = np.asarray(rho, dtype=float)
        if rho.size and not np.all(rho > 0.0):
            raise PositivityError(f"rho must be strictly positive, min={rho.min()!r}")
        return np.log(rho)
    gamma = params.gamma
    return gamma / (gamma - 1.0) * positive_power(rho, gamma - 1.0)
