"""Time-integration driver for the regularised radial problem.

Assumptions
-----------
- Vacuum is removed by shifting the initial density by a constant η > 0. The
  density is never lifted afterwards: a step that would make it nonpositive
  fails, and the smallest density reached is reported with the run.
- Each time step is a Picard fixed point over the frozen velocity (see
  :mod:`src.simulation.picard`); the step size comes from
  :func:`stable_time_step` and never grows by more than 20 % per step.
- Observers (the diagnostics collector among them) are scheduled on step
  counts, in registration order, after the step that makes them due.

Default parameters are chosen for quick experiments on modest grids: a Courant
number of 0.4, outputs every ten steps and a Dirichlet outer boundary.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
import logging
import math
from typing import Callable, Dict, Iterable, Mapping, Optional, Sequence

import numpy as np

from src.diagnostics.collector import DiagnosticsCollector, Snapshot
from src.diagnostics.functionals import DiagnosticsReport
from src.domain.grid import RadialGrid
from src.domain.norms import l2_norm, radial_derivative
from src.domain.state import PrimitiveState, ReformState
from src.errors import AdmissibilityError, DomainError, RadialNSError, SolverFailure
from src.kernels.momentum import MomentumForm, MomentumSolveConfig
from src.kernels.transport import CFL_LIMIT, TransportScheme, face_velocity, volumetric_expansion
from src.params.admissibility import AdmissibilityReport, check_admissibility
from src.params.physical import PhysParams
from src.simulation.picard import ContractionTrace, PicardConfig, picard_step
from src.transform.variables import positive_power, sound_speed, to_reformulated

logger = logging.getLogger(__name__)

StepCallback = Callable[[Dict, int], None]

MAX_GROWTH = 1.2
# Keeps the Courant denominator positive for a fluid at rest.
_SPEED_EPS = 1e-12


@dataclass(frozen=True)
class RunConfig:
    """Time-integration settings shared by every member of a study."""

    t_end: float
    cfl: float = 0.4
    eta: float = 0.0
    output_every: int = 10
    scheme: TransportScheme = field(default_factory=TransportScheme)
    momentum: MomentumSolveConfig = field(default_factory=MomentumSolveConfig)
    picard: PicardConfig = field(default_factory=PicardConfig)
    override_admissibility: bool = False
    max_steps: int = 10_000_000

    def __post_init__(self) -> None:
        if not self.t_end > 0.0:
            raise DomainError(f"t_end must be positive, got {self.t_end}")
        if not 0.0 < self.cfl <= CFL_LIMIT:
            raise DomainError(f"cfl must lie in (0, {CFL_LIMIT}], got {self.cfl}")
        if not self.eta >= 0.0:
            raise DomainError(f"eta must be nonnegative, got {self.eta}")
        if int(self.output_every) != self.output_every or self.output_every < 1:
            raise DomainError(f"output_every must be an integer >= 1, got {self.output_every}")

    @classmethod
    def from_mapping(cls, mapping: Mapping) -> "RunConfig":
        """Build a run configuration from a flat dictionary-like source."""

        return cls(
            t_end=float(mapping["t_end"]),
            cfl=float(mapping.get("cfl", cls.cfl)),
            eta=float(mapping.get("eta", cls.eta)),
            output_every=int(mapping.get("output_every", cls.output_every)),
            scheme=TransportScheme.from_mapping(mapping),
            momentum=MomentumSolveConfig.from_mapping(mapping),
            picard=PicardConfig.from_mapping(mapping),
            override_admissibility=bool(mapping.get("override_admissibility", False)),
            max_steps=int(mapping.get("max_steps", cls.max_steps)),
        )


def regularize_initial(
    rho0: np.ndarray,
    u0: np.ndarray,
    eta: float,
    *,
    grid: RadialGrid,
    params: PhysParams,
    t: float = 0.0,
) -> ReformState:
    """Shift the density by η and derive (h, φ, v) from the shifted data."""

    rho0 = grid.check_field(rho0, "rho0")
    if np.any(rho0 < 0.0):
        raise DomainError("initial density must be nonnegative")
    if eta < 0.0:
        raise DomainError(f"eta must be nonnegative, got {eta}")
    if eta == 0.0 and not np.all(rho0 > 0.0):
        raise DomainError("eta = 0 needs strictly positive initial density")
    shifted = PrimitiveState(t=t, rho=rho0 + eta, u=grid.check_field(u0, "u0"))
    return to_reformulated(shifted, params, grid)


def source_rate(
    state: ReformState,
    grid: RadialGrid,
    params: PhysParams,
    outer_bc: str = "dirichlet",
    form: MomentumForm = "conservative",
) -> np.ndarray:
    """Pointwise rate of the explicit source and stretching terms."""

    divergence = volumetric_expansion(grid, face_velocity(grid, state.u, outer_bc))
    stretch = max(abs(params.gamma - params.delta), abs(params.delta - 1.0))
    rate = stretch * np.abs(divergence)
    if form == "reformulated":
        # The damping and (v − u) sources are explicit only in this form.
        rate = (
            rate
            + params.damping_coeff * state.phi
            + abs(params.delta - 1.0) * np.abs(state.v - state.u) * 2.0 / grid.nodes
        )
    return rate


def stable_time_step(
    state: ReformState,
    grid: RadialGrid,
    params: PhysParams,
    cfl: float,
    previous: Optional[float] = None,
    *,
    outer_bc: str = "dirichlet",
    form: MomentumForm = "conservative",
) -> float:
    """Largest step allowed by the transport, acoustic and source limits."""

    speed = np.abs(state.u) + sound_speed(state.rho, params)
    if form == "reformulated":
        speed = speed + params.delta * np.abs(state.v - state.u)
    dt = cfl * grid.min_dr / float(np.max(speed + _SPEED_EPS))
    rate = float(np.max(source_rate(state, grid, params, outer_bc, form)))
    if rate > 0.0:
        dt = min(dt, 0.5 / rate)
    if previous is not None:
        dt = min(dt, MAX_GROWTH * previous)
    return dt


def compatibility_g_norm(
    rho0: np.ndarray, u0: np.ndarray, grid: RadialGrid, params: PhysParams
) -> float:
    """‖g‖₂ for g = 2ρ₀^{δ−1} ∂_r(u₀,r + 2u₀/r), the compatibility datum."""

    u0 = grid.check_field(u0, "u0")
    expansion = radial_derivative(grid, u0) + 2.0 * u0 / grid.nodes
    g = 2.0 * positive_power(rho0, params.delta - 1.0) * radial_derivative(grid, expansion)
    return l2_norm(grid, g)


class SimulationEngine:
    """Step scheduler advancing a :class:`ReformState` and notifying observers."""

    def __init__(
        self,
        config: RunConfig,
        params: PhysParams,
        grid: RadialGrid,
        initial: ReformState,
    ):
        initial.check_grid(grid)
        self.config = config
        self.params = params
        self.grid = grid
        self.step = 0
        self.state: Dict = {
            "fields": initial,
            "dt": None,
            "trace": None,
            "min_density": float(initial.rho.min()),
            "observers": {},
        }
        self._schedule: Dict[int, list[str]] = {}

    @property
    def fields(self) -> ReformState:
        return self.state["fields"]

    @property
    def finished(self) -> bool:
        remaining = self.config.t_end - self.fields.t
        return remaining <= 1e-12 * self.config.t_end

    def register_observer(
        self,
        name: str,
        callback: StepCallback,
        *,
        start_step: int = 0,
        interval: int = 1,
    ) -> None:
        """Register an observer and schedule its first call."""

        self.state["observers"][name] = {
            "callback": callback,
            "interval": max(1, interval),
        }
        self._schedule.setdefault(start_step, []).append(name)

    def _run_callbacks(self, names: Iterable[str]) -> None:
        for name in names:
            observer = self.state["observers"][name]
            observer["callback"](self.state, self.step)
            next_step = self.step + observer["interval"]
            self._schedule.setdefault(next_step, []).append(name)

    def notify(self) -> None:
        """Run the observers due at the current step."""

        self._run_callbacks(list(self._schedule.pop(self.step, [])))

    def advance_step(self) -> None:
        """Take one Picard step, clipped to land on ``t_end``, then notify."""

        current = self.fields
        dt = stable_time_step(
            current,
            self.grid,
            self.params,
            self.config.cfl,
            self.state["dt"],
            outer_bc=self.config.momentum.outer_bc,
            form=self.config.momentum.form,
        )
        self.state["dt"] = dt
        dt = min(dt, self.config.t_end - current.t)
        try:
            new, trace = picard_step(
                current,
                dt,
                self.grid,
                self.params,
                self.config.picard,
                scheme=self.config.scheme,
                momentum=self.config.momentum,
            )
        except RadialNSError as exc:
            logger.error("step %d failed at t=%g: %s", self.step + 1, current.t, exc)
            raise SolverFailure(f"{type(exc).__name__}: {exc}", t=current.t) from exc

        self.state["fields"] = new
        self.state["trace"] = trace
        self.state["min_density"] = min(self.state["min_density"], trace.min_density)
        self.step += 1
        logger.debug(
            "step %d t=%.6g dt=%.3e iters=%d gamma=%.3e",
            self.step,
            new.t,
            dt,
            trace.iterations,
            trace.last,
        )
        self.notify()

    def run(self) -> None:
        """Advance until ``t_end`` or the step limit is reached."""

        while not self.finished:
            if self.step >= self.config.max_steps:
                raise SolverFailure(
                    f"step limit {self.config.max_steps} reached", t=self.fields.t
                )
            self.advance_step()


@dataclass(frozen=True)
class RunResult:
    snapshots: tuple[Snapshot, ...]
    final: ReformState
    steps: int
    min_density: float
    compatibility_g: float
    admissibility: AdmissibilityReport

    @property
    def history(self) -> list[tuple[float, ReformState, DiagnosticsReport]]:
        return [(snap.t, snap.state, snap.report) for snap in self.snapshots]


def run(
    init: PrimitiveState,
    run_cfg: RunConfig,
    params: PhysParams,
    grid: RadialGrid,
    *,
    on_snapshot: Optional[Callable[[Snapshot], None]] = None,
) -> RunResult:
    """Integrate from ``init`` (vacuum data, before the η shift) to ``t_end``."""

    init.check_grid(grid)
    verdict = check_admissibility(params)
    if not verdict.admissible:
        if not run_cfg.override_admissibility:
            raise AdmissibilityError(f"delta={params.delta}: {verdict.reason}")
        logger.warning("running outside the admissible range: %s", verdict.reason)

    initial = regularize_initial(
        init.rho, init.u, run_cfg.eta, grid=grid, params=params, t=init.t
    )
    g_norm = compatibility_g_norm(initial.rho, initial.u, grid, params)
    collector = DiagnosticsCollector(
        grid=grid,
        params=params,
        admissible=verdict.admissible,
        outer_bc=run_cfg.momentum.outer_bc,
    )
    engine = SimulationEngine(run_cfg, params, grid, initial)

    def accumulate(state: Dict, step: int) -> None:
        collector.accumulate(state["fields"])

    def record(state: Dict, step: int) -> None:
        trace: Optional[ContractionTrace] = state["trace"]
        snapshot = collector.record(
            state["fields"],
            step=step,
            picard_iters=trace.iterations if trace else 0,
            gamma_last=trace.last if trace else 0.0,
        )
        if on_snapshot is not None:
            on_snapshot(snapshot)

    engine.register_observer("dissipation", accumulate)
    engine.register_observer("snapshots", record, interval=run_cfg.output_every)

    logger.info(
        "run start: n=%d t_end=%g eta=%g gamma=%g delta=%g",
        grid.n,
        run_cfg.t_end,
        run_cfg.eta,
        params.gamma,
        params.delta,
    )
    engine.notify()
    engine.run()
    if collector.latest is None or collector.latest.step != engine.step:
        record(engine.state, engine.step)
    logger.info("run end: %d steps, t=%g", engine.step, engine.fields.t)

    return RunResult(
        snapshots=tuple(collector.snapshots),
        final=engine.fields,
        steps=engine.step,
        min_density=engine.state["min_density"],
        compatibility_g=g_norm,
        admissibility=verdict,
    )


@dataclass(frozen=True)
class ContinuationResult:
    etas: tuple[float, ...]
    finals: tuple[Optional[ReformState], ...]
    errors: tuple[Optional[str], ...]
    distances: tuple[float, ...]


def _validate_etas(etas: Sequence[float]) -> tuple[float, ...]:
    values = tuple(float(eta) for eta in etas)
    if not values:
        raise DomainError("eta_continuation needs at least one eta")
    if any(not eta > 0.0 for eta in values):
        raise DomainError("every eta must be positive")
    if any(nxt > cur for cur, nxt in zip(values[:-1], values[1:])):
        raise DomainError("etas must be non-increasing")
    return values


def eta_continuation(
    init: PrimitiveState,
    etas: Sequence[float],
    run_cfg: RunConfig,
    params: PhysParams,
    grid: RadialGrid,
    *,
    max_workers: Optional[int] = None,
) -> ContinuationResult:
    """Solve the same problem for each η and compare neighbouring members.

    The distance between members j and j + 1 is the L² norm of
    (ρ^{η_j} − η_j) − (ρ^{η_{j+1}} − η_{j+1}) at t_end; failed members give nan.
    """

    values = _validate_etas(etas)

    def member(eta: float) -> tuple[Optional[ReformState], Optional[str]]:
        try:
            return run(init, replace(run_cfg, eta=eta), params, grid).final, None
        except RadialNSError as exc:
            logger.warning("continuation member eta=%g failed: %s", eta, exc)
            return None, str(exc)

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        outcomes = list(pool.map(member, values))

    finals = tuple(state for state, _ in outcomes)
    distances = []
    for j in range(len(values) - 1):
        first, second = finals[j], finals[j + 1]
        if first is None or second is None:
            distances.append(math.nan)
            continue
        gap = (first.rho - values[j]) - (second.rho - values[j + 1])
        distances.append(l2_norm(grid, gap))

    return ContinuationResult(
        etas=values,
        finals=finals,
        errors=tuple(error for _, error in outcomes),
        distances=tuple(distances),
    )
