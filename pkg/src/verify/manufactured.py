"""Manufactured solutions for the primitive system and their refinement studies.

Manufactured fields are closed-form descriptors carrying their own value and
derivatives, so the source terms carry no differentiation error. Each preset
drives the kernels with the matching sources on a ladder of grids and measures
the error against the exact field at the final time.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import logging
import math
from typing import Callable, Optional, Sequence

import numpy as np

from src.domain.grid import RadialGrid, make_grid
from src.domain.norms import l2_norm
from src.domain.state import PrimitiveState, ReformState
from src.errors import DomainError, PositivityError
from src.kernels.momentum import MomentumSolveConfig, step_momentum
from src.kernels.transport import face_velocity, step_continuity
from src.params.physical import PhysParams
from src.transform.variables import to_reformulated
from src.verify.convergence import convergence_order, local_orders

logger = logging.getLogger(__name__)

Profile = Callable[[np.ndarray, float], np.ndarray]


@dataclass(frozen=True)
class FieldDescriptor:
    """A closed-form field f(r, t) with ∂_r f, ∂_rr f and ∂_t f."""

    value: Profile
    dr: Profile
    drr: Profile
    dt: Profile
    name: str = "field"

    def __call__(self, r, t: float) -> np.ndarray:
        return self.value(np.asarray(r, dtype=float), t)


def _zeros(r, t):
    return np.zeros_like(np.asarray(r, dtype=float))


def constant(c: float) -> FieldDescriptor:
    return FieldDescriptor(
        value=lambda r, t: np.full_like(np.asarray(r, dtype=float), c),
        dr=_zeros,
        drr=_zeros,
        dt=_zeros,
        name=f"constant({c})",
    )


def sine_profile(a: float, r_max: float, amplitude: float = 1.0, decay: float = 0.0):
    """A·e^{−decay·t}·sin(π(r − a)/(r_max − a)); vanishes at both ends."""

    k = math.pi / (r_max - a)

    def value(r, t):
        return amplitude * math.exp(-decay * t) * np.sin(k * (r - a))

    return FieldDescriptor(
        value=value,
        dr=lambda r, t: amplitude * math.exp(-decay * t) * k * np.cos(k * (r - a)),
        drr=lambda r, t: -(k**2) * value(r, t),
        dt=lambda r, t: -decay * value(r, t),
        name="sine",
    )


def gaussian(
    base: float,
    amplitude: float,
    center: float,
    width: float,
    modulation: float = 0.0,
    omega: float = 1.0,
) -> FieldDescriptor:
    """base + A(1 + m·sin ωt)·exp(−(r − c)²/w²)."""

    def bump(r):
        return np.exp(-(((r - center) / width) ** 2))

    def scale(t):
        return amplitude * (1.0 + modulation * math.sin(omega * t))

    return FieldDescriptor(
        value=lambda r, t: base + scale(t) * bump(r),
        dr=lambda r, t: scale(t) * (-2.0 * (r - center) / width**2) * bump(r),
        drr=lambda r, t: scale(t)
        * (4.0 * (r - center) ** 2 / width**4 - 2.0 / width**2)
        * bump(r),
        dt=lambda r, t: amplitude * modulation * omega * math.cos(omega * t) * bump(r),
        name="gaussian",
    )


def exponential(modulation: float = 0.0, omega: float = 1.0) -> FieldDescriptor:
    """e^{−r}(1 + m·sin ωt)."""

    def value(r, t):
        return np.exp(-r) * (1.0 + modulation * math.sin(omega * t))

    return FieldDescriptor(
        value=value,
        dr=lambda r, t: -value(r, t),
        drr=value,
        dt=lambda r, t: np.exp(-r) * modulation * omega * math.cos(omega * t),
        name="exponential",
    )


def inverse_square(c: float) -> FieldDescriptor:
    """c/r², for which u_r + 2u/r vanishes."""

    return FieldDescriptor(
        value=lambda r, t: c / r**2,
        dr=lambda r, t: -2.0 * c / r**3,
        drr=lambda r, t: 6.0 * c / r**4,
        dt=_zeros,
        name="inverse_square",
    )


def mms_sources(
    rho_m: FieldDescriptor,
    u_m: FieldDescriptor,
    grid: RadialGrid,
    params: PhysParams,
    t: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Residuals of the continuity and momentum equations at the nodes.

    The momentum residual is that of the conservative form
    (ρu)_t + r^{-2}(r²ρu²)_r + P_r − [(2μ + λ)(u_r + 2u/r)]_r + 4μ_r u/r.
    """

    r = grid.nodes
    rho, rho_r, rho_t = rho_m(r, t), rho_m.dr(r, t), rho_m.dt(r, t)
    if not np.all(rho > 0.0):
        raise PositivityError("manufactured density must be positive on the grid")
    u, u_r, u_rr, u_t = u_m(r, t), u_m.dr(r, t), u_m.drr(r, t), u_m.dt(r, t)
    gamma, delta = params.gamma, params.delta

    source_rho = rho_t + rho_r * u + rho * u_r + 2.0 * rho * u / r
    div = u_r + 2.0 * u / r
    div_r = u_rr + 2.0 * u_r / r - 2.0 * u / r**2
    mu = rho**delta
    mu_over_rho = rho ** (delta - 1.0)
    viscous = (
        2.0 * delta * mu * div_r
        + 2.0 * delta * mu_over_rho * rho_r * u_r
        + 2.0 * delta * (delta - 1.0) * mu_over_rho * rho_r * div
    )
    pressure_r = gamma * rho ** (gamma - 1.0) * rho_r
    source_u = u * source_rho + rho * (u_t + u * u_r) + pressure_r - viscous
    return source_rho, source_u


def velocity_forcing(
    rho_m: FieldDescriptor,
    u_m: FieldDescriptor,
    grid: RadialGrid,
    params: PhysParams,
    t: float,
) -> np.ndarray:
    """Forcing of the non-conservative u equation: (S_u − u S_ρ)/ρ."""

    source_rho, source_u = mms_sources(rho_m, u_m, grid, params, t)
    r = grid.nodes
    return (source_u - u_m(r, t) * source_rho) / rho_m(r, t)


def diffusion_forcing(
    u_m: FieldDescriptor, h: float, grid: RadialGrid, params: PhysParams, t: float
) -> np.ndarray:
    """Forcing of the pure diffusion u_t = δh(u_r + 2u/r)_r with constant h."""

    r = grid.nodes
    u, u_r, u_rr = u_m(r, t), u_m.dr(r, t), u_m.drr(r, t)
    div_r = u_rr + 2.0 * u_r / r - 2.0 * u / r**2
    return u_m.dt(r, t) - params.delta * h * div_r


@dataclass(frozen=True)
class MMSPreset:
    name: str
    min_slope: float
    t_end: float
    params: PhysParams


@dataclass(frozen=True)
class StudyRow:
    n: int
    spacing: float
    error: float
    slope: float


@dataclass(frozen=True)
class ConvergenceStudy:
    preset: str
    rows: tuple[StudyRow, ...]
    slope: float
    min_slope: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.slope) and self.slope >= self.min_slope


DEFAULT_PARAMS = PhysParams(gamma=1.2, delta=0.8, a=1.0)

PRESETS: dict[str, MMSPreset] = {
    "transport": MMSPreset("transport", min_slope=0.8, t_end=0.25, params=DEFAULT_PARAMS),
    "diffusion": MMSPreset("diffusion", min_slope=1.8, t_end=0.1, params=DEFAULT_PARAMS),
    "coupled": MMSPreset("coupled", min_slope=0.8, t_end=0.1, params=DEFAULT_PARAMS),
}

DEFAULT_LADDER = (32, 64, 128, 256)


def _time_levels(t_end: float, dt: float) -> list[tuple[float, float]]:
    """(t_n, dt_n) pairs covering [0, t_end] with equal steps no larger than dt."""

    steps = max(1, math.ceil(t_end / dt - 1e-12))
    step = t_end / steps
    return [(k * step, step) for k in range(steps)]


def _transport_error(grid: RadialGrid, preset: MMSPreset) -> float:
    a, r_max = grid.a, grid.r_max
    width = r_max - a
    u_m = sine_profile(a, r_max, amplitude=0.5)
    rho_m = gaussian(1.0, 0.5, a + 0.5 * width, 0.15 * width, modulation=0.5, omega=2.0)
    u_face = u_m(grid.faces, 0.0)
    rho = rho_m(grid.nodes, 0.0)
    for t, dt in _time_levels(preset.t_end, 0.4 * grid.min_dr / 0.5):
        source_rho, _ = mms_sources(rho_m, u_m, grid, preset.params, t)
        rho = step_continuity(rho, u_face, dt, grid) + dt * source_rho
    return l2_norm(grid, rho - rho_m(grid.nodes, preset.t_end))


def _diffusion_error(grid: RadialGrid, preset: MMSPreset) -> float:
    params = preset.params
    u_m = sine_profile(grid.a, grid.r_max, amplitude=1.0, decay=1.0)
    cfg = MomentumSolveConfig(theta=0.5, include_sources=False)
    ones = np.ones(grid.n)
    u = u_m(grid.nodes, 0.0)
    # Unit density: h = 2 and φ = 1 stay frozen.
    for t, dt in _time_levels(preset.t_end, 0.5 * grid.min_dr):
        frozen = ReformState(t=t, rho=ones, h=2.0 * ones, phi=ones, v=u, u=u)
        forcing = diffusion_forcing(u_m, 2.0, grid, params, t + 0.5 * dt)
        u = step_momentum(frozen, dt, grid, params, cfg, forcing=forcing)
    return l2_norm(grid, u - u_m(grid.nodes, preset.t_end))


def _coupled_error(grid: RadialGrid, preset: MMSPreset) -> float:
    params = preset.params
    a, r_max = grid.a, grid.r_max
    width = r_max - a
    u_m = sine_profile(a, r_max, amplitude=0.3, decay=1.0)
    rho_m = gaussian(1.0, 0.2, a + 0.5 * width, 0.2 * width, modulation=0.5, omega=2.0)
    cfg = MomentumSolveConfig(theta=1.0)
    rho = rho_m(grid.nodes, 0.0)
    u = u_m(grid.nodes, 0.0)
    for t, dt in _time_levels(preset.t_end, 0.2 * grid.min_dr):
        source_rho, _ = mms_sources(rho_m, u_m, grid, params, t)
        rho = step_continuity(rho, face_velocity(grid, u), dt, grid) + dt * source_rho
        staged = to_reformulated(PrimitiveState(t=t + dt, rho=rho, u=u), params, grid)
        forcing = velocity_forcing(rho_m, u_m, grid, params, t)
        u = step_momentum(staged, dt, grid, params, cfg, forcing=forcing)
    rho_err = l2_norm(grid, rho - rho_m(grid.nodes, preset.t_end))
    u_err = l2_norm(grid, u - u_m(grid.nodes, preset.t_end))
    return math.hypot(rho_err, u_err)


_DRIVERS: dict[str, Callable[[RadialGrid, MMSPreset], float]] = {
    "transport": _transport_error,
    "diffusion": _diffusion_error,
    "coupled": _coupled_error,
}


def mms_error(preset: str, n: int, *, a: float = 1.0, r_max: float = 2.0, **overrides) -> float:
    """Final-time L² error of one preset on a uniform grid with ``n`` cells."""

    setup = _preset(preset, **overrides)
    return _DRIVERS[preset](make_grid(a, r_max, n), setup)


def _preset(name: str, **overrides) -> MMSPreset:
    if name not in PRESETS:
        raise DomainError(f"unknown manufactured preset {name!r}; choose from {sorted(PRESETS)}")
    base = PRESETS[name]
    return MMSPreset(
        name=name,
        min_slope=overrides.get("min_slope", base.min_slope),
        t_end=overrides.get("t_end", base.t_end),
        params=overrides.get("params") or base.params,
    )


def run_mms_study(
    preset: str,
    ladder: Sequence[int] = DEFAULT_LADDER,
    *,
    a: float = 1.0,
    r_max: float = 2.0,
    params: Optional[PhysParams] = None,
    t_end: Optional[float] = None,
    max_workers: Optional[int] = None,
) -> ConvergenceStudy:
    """Run one preset on every grid of ``ladder`` and fit the observed order."""

    ladder = sorted(int(n) for n in ladder)
    if len(ladder) < 3 or len(set(ladder)) != len(ladder):
        raise DomainError("the refinement ladder needs at least three distinct cell counts")
    overrides = {"params": params}
    if t_end is not None:
        overrides["t_end"] = t_end
    setup = _preset(preset, **overrides)
    grids = [make_grid(a, r_max, n) for n in ladder]
    driver = _DRIVERS[preset]

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        errors = list(pool.map(lambda grid: driver(grid, setup), grids))

    spacings = [grid.min_dr for grid in grids]
    positive = all(error > 0.0 for error in errors)
    slope = convergence_order(errors, spacings) if positive else math.nan
    if positive:
        locals_ = [math.nan, *local_orders(errors, spacings)]
    else:
        locals_ = [math.nan] * len(errors)
    rows = tuple(
        StudyRow(n=n, spacing=h, error=e, slope=s)
        for n, h, e, s in zip(ladder, spacings, errors, locals_)
    )
    logger.info("mms %s: errors=%s slope=%.3f", preset, errors, slope)
    return ConvergenceStudy(preset=preset, rows=rows, slope=slope, min_slope=setup.min_slope)
