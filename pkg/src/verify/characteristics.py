"""Method-of-characteristics reference for the continuity equation.

Along dr/ds = u(r, s) the density obeys dρ/ds = −ρ(u_r + 2u/r). The oracle
integrates each path backward from the query point to s = 0 with an
adaptive high-order integrator and shares no code with the grid solvers.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from src.domain.grid import RadialGrid, make_grid
from src.domain.norms import l2_norm
from src.errors import CharacteristicExitError, DomainError
from src.kernels.transport import step_continuity
from src.verify.convergence import convergence_order, local_orders
from src.verify.manufactured import FieldDescriptor, StudyRow, gaussian, sine_profile

logger = logging.getLogger(__name__)

ODE_RTOL = 1e-10
ODE_ATOL = 1e-12


def characteristics_oracle(
    rho0: FieldDescriptor,
    u: FieldDescriptor,
    t: float,
    r_query: np.ndarray,
    *,
    a: float,
    r_max: float,
) -> np.ndarray:
    """ρ(r_query, t) for ρ_t + r^{-2}(r²ρu)_r = 0 with ρ(·, 0) = rho0."""

    r_query = np.asarray(r_query, dtype=float)
    if np.any(r_query < a) or np.any(r_query > r_max):
        raise CharacteristicExitError("query points must lie inside [a, r_max]")
    if t == 0.0:
        return rho0(r_query, 0.0)
    if t < 0.0:
        raise DomainError(f"t must be nonnegative, got {t}")

    n = r_query.size

    def rhs(s, y):
        x = y[:n]
        div = u.dr(x, s) + 2.0 * u(x, s) / x
        return np.concatenate((u(x, s), div))

    def leaves(s, y):
        x = y[:n]
        return min(float(np.min(x - a)), float(np.min(r_max - x)))

    leaves.terminal = True  # type: ignore[attr-defined]

    # The second block accumulates −∫ div ds from t back to s.
    y0 = np.concatenate((r_query, np.zeros(n)))
    sol = solve_ivp(
        rhs,
        (t, 0.0),
        y0,
        method="DOP853",
        rtol=ODE_RTOL,
        atol=ODE_ATOL,
        events=leaves,
    )
    if sol.status == 1:
        raise CharacteristicExitError(f"a characteristic left [{a}, {r_max}] at s={sol.t[-1]!r}")
    if not sol.success:
        raise CharacteristicExitError(f"characteristic integration failed: {sol.message}")

    feet = sol.y[:n, -1]
    log_gain = sol.y[n:, -1]
    return rho0(feet, 0.0) * np.exp(log_gain)


@dataclass(frozen=True)
class TransportStudy:
    rows: tuple[StudyRow, ...]
    slope: float


def transport_error(
    n: int,
    *,
    a: float = 1.0,
    r_max: float = 2.0,
    t_end: float = 0.25,
    cfl: float = 0.4,
    amplitude: float = 0.5,
) -> float:
    """L² gap between the finite-volume density and the oracle on ``n`` cells."""

    grid = make_grid(a, r_max, n)
    rho0, u = _transport_fields(grid, amplitude)
    rho = rho0(grid.nodes, 0.0)
    u_face = u(grid.faces, 0.0)
    steps = max(1, math.ceil(t_end / (cfl * grid.min_dr / amplitude) - 1e-12))
    dt = t_end / steps
    for _ in range(steps):
        rho = step_continuity(rho, u_face, dt, grid)
    exact = characteristics_oracle(rho0, u, t_end, grid.nodes, a=a, r_max=r_max)
    return l2_norm(grid, rho - exact)


def _transport_fields(
    grid: RadialGrid, amplitude: float
) -> tuple[FieldDescriptor, FieldDescriptor]:
    width = grid.r_max - grid.a
    rho0 = gaussian(0.5, 1.0, grid.a + 0.4 * width, 0.12 * width)
    return rho0, sine_profile(grid.a, grid.r_max, amplitude=amplitude)


def transport_error_study(
    ladder: Sequence[int] = (128, 256, 512, 1024),
    *,
    a: float = 1.0,
    r_max: float = 2.0,
    t_end: float = 0.25,
    cfl: float = 0.4,
    amplitude: float = 0.5,
    max_workers: Optional[int] = None,
) -> TransportStudy:
    """Refinement study of the upwind continuity update against the oracle."""

    ladder = sorted(int(n) for n in ladder)

    def member(n: int) -> float:
        return transport_error(n, a=a, r_max=r_max, t_end=t_end, cfl=cfl, amplitude=amplitude)

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        errors = list(pool.map(member, ladder))

    spacings = [(r_max - a) / n for n in ladder]
    slope = convergence_order(errors, spacings)
    slopes = [math.nan, *local_orders(errors, spacings)]
    rows = tuple(
        StudyRow(n=n, spacing=h, error=e, slope=s)
        for n, h, e, s in zip(ladder, spacings, errors, slopes)
    )
    logger.info("transport study: errors=%s slope=%.3f", errors, slope)
    return TransportStudy(rows=rows, slope=slope)
