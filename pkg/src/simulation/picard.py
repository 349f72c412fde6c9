"""Per-step Picard iteration over the linearised reformulated system."""

from __future__ import annotations

from dataclasses import dataclass
import logging
import math
from typing import Mapping

import numpy as np

from src.domain.grid import RadialGrid
from src.domain.norms import midpoint_integral
from src.domain.state import ReformState
from src.errors import DomainError, NonContractionError, PositivityError
from src.kernels.momentum import MomentumSolveConfig, step_momentum
from src.kernels.transport import (
    TransportScheme,
    face_mass,
    face_velocity,
    step_advected_scalar,
    step_continuity,
    step_effective_velocity,
)
from src.params.physical import PhysParams
from src.transform.variables import positive_power

logger = logging.getLogger(__name__)

# Γ growing this many iterations in a row aborts the step.
MAX_CONSECUTIVE_INCREASES = 3


@dataclass(frozen=True)
class PicardConfig:
    max_iters: int = 20
    gamma_tol: float = 1e-18
    track_contraction: bool = True
    derived_fields: bool = False

    def __post_init__(self) -> None:
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise DomainError(f"max_iters must be an integer >= 1, got {self.max_iters}")
        if not self.gamma_tol > 0.0:
            raise DomainError(f"gamma_tol must be positive, got {self.gamma_tol}")

    @classmethod
    def from_mapping(cls, mapping: Mapping) -> "PicardConfig":
        return cls(
            max_iters=int(mapping.get("max_iters", cls.max_iters)),
            gamma_tol=float(mapping.get("gamma_tol", cls.gamma_tol)),
            track_contraction=bool(mapping.get("track_contraction", cls.track_contraction)),
            derived_fields=bool(mapping.get("derived_fields", cls.derived_fields)),
        )


@dataclass(frozen=True)
class ContractionTrace:
    """Γ^k of every iterate of one step, and the smallest density it produced."""

    gammas: tuple[float, ...]
    converged: bool
    min_density: float = math.inf

    @property
    def ratios(self) -> tuple[float, ...]:
        return tuple(
            nxt / cur if cur > 0.0 else math.nan
            for cur, nxt in zip(self.gammas[:-1], self.gammas[1:])
        )

    @property
    def iterations(self) -> int:
        return len(self.gammas)

    @property
    def last(self) -> float:
        return self.gammas[-1] if self.gammas else 0.0


def _weighted_squares(
    rho: np.ndarray,
    h: np.ndarray,
    phi: np.ndarray,
    v: np.ndarray,
    u: np.ndarray,
    h_weight: np.ndarray,
    grid: RadialGrid,
) -> float:
    integrand = rho**2 + phi**2 + v**2 + (h * phi) ** 2 + h**2 + h_weight * u**2
    return midpoint_integral(grid, integrand)


def contraction_functional(new: ReformState, old: ReformState, grid: RadialGrid) -> float:
    """Γ between two iterates; the velocity gap is weighted by the newer h."""

    return _weighted_squares(
        new.rho - old.rho,
        new.h - old.h,
        new.phi - old.phi,
        new.v - old.v,
        new.u - old.u,
        new.h,
        grid,
    )


def state_scale(state: ReformState, grid: RadialGrid) -> float:
    """The same sum of squares applied to the state itself."""

    return _weighted_squares(state.rho, state.h, state.phi, state.v, state.u, state.h, grid)


def check_density(rho: np.ndarray) -> np.ndarray:
    """Return ``rho`` unchanged, raising unless it is finite and strictly positive.

    The density is never lifted, so the continuity fluxes alone decide the mass.
    """

    if not np.all(np.isfinite(rho)) or not np.all(rho > 0.0):
        raise PositivityError(f"density reached {np.min(rho)!r}")
    return rho


def _iterate(
    old: ReformState,
    previous: ReformState,
    dt: float,
    grid: RadialGrid,
    params: PhysParams,
    scheme: TransportScheme,
    momentum: MomentumSolveConfig,
    derived: bool,
) -> ReformState:
    bc = momentum.outer_bc
    # Time-centred transport velocity; the upwind side stays fixed by u^n.
    midpoint = 0.5 * (old.u + previous.u)
    direction = face_velocity(grid, old.u, bc)
    mass = face_mass(0.5 * (old.rho + previous.rho), grid, direction, scheme.limiter)
    rho = step_continuity(old.rho, face_velocity(grid, midpoint, bc), dt, grid, mass=mass)
    rho = check_density(rho)

    if derived:
        h = 2.0 * positive_power(rho, params.delta - 1.0)
        phi = positive_power(rho, params.gamma - params.delta)
    else:
        mode = scheme.scalar_mode
        h = step_advected_scalar(
            old.h, midpoint, params.delta - 1.0, dt, grid, outer_bc=bc, mode=mode
        )
        phi = step_advected_scalar(
            old.phi, midpoint, params.gamma - params.delta, dt, grid, outer_bc=bc, mode=mode
        )
    v = step_effective_velocity(old.v, midpoint, phi, dt, grid, params)

    staged = ReformState(t=old.t + dt, rho=rho, h=h, phi=phi, v=v, u=previous.u)
    u = step_momentum(staged, dt, grid, params, momentum, previous=old, mass=mass)
    return staged.with_fields(u=u)


def picard_step(
    state: ReformState,
    dt: float,
    grid: RadialGrid,
    params: PhysParams,
    cfg: PicardConfig,
    *,
    scheme: TransportScheme = TransportScheme(),
    momentum: MomentumSolveConfig = MomentumSolveConfig(),
) -> tuple[ReformState, ContractionTrace]:
    """Advance one time step by fixed-point iteration on the frozen velocity.

    Iterate k transports ρ, h, φ and v from the previous time level with the
    mean of u^n and the velocity of iterate k − 1, then solves the momentum
    equation with coefficients averaged between the old level and iterate k.
    The density fluxes of the continuity update are handed to the momentum
    solve, which builds its pressure force from them. With ``max_iters = 1``
    this is a single linearly implicit pass.
    """

    state.check_grid(grid)
    scale = state_scale(state, grid)
    previous = state
    gammas: list[float] = []
    increases = 0
    converged = False

    for k in range(1, cfg.max_iters + 1):
        current = _iterate(state, previous, dt, grid, params, scheme, momentum, cfg.derived_fields)
        gamma = contraction_functional(current, previous, grid)
        if gammas and gamma > gammas[-1]:
            increases += 1
        else:
            increases = 0
        gammas.append(gamma)
        previous = current
        if increases >= MAX_CONSECUTIVE_INCREASES:
            raise NonContractionError(
                f"contraction functional grew {increases} times in a row at t={state.t!r}, "
                f"dt={dt!r}: {gammas}"
            )
        if gamma <= cfg.gamma_tol * scale:
            converged = True
            break

    if not converged:
        logger.warning(
            "Picard iteration stopped after %d iterations at t=%g with gamma=%.3e",
            cfg.max_iters,
            previous.t,
            gammas[-1],
        )

    recorded = tuple(gammas) if cfg.track_contraction else (gammas[-1],)
    return previous, ContractionTrace(
        gammas=recorded, converged=converged, min_density=float(previous.rho.min())
    )
