"""Collects diagnostics snapshots and the time-integrated dissipation of a run."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from src.diagnostics.functionals import DiagnosticsReport, full_report, step_dissipation
from src.domain.grid import RadialGrid
from src.domain.state import ReformState
from src.params.physical import PhysParams


@dataclass(frozen=True)
class Snapshot:
    """One emitted output row: the state, its report and run bookkeeping."""

    t: float
    step: int
    state: ReformState
    report: DiagnosticsReport
    picard_iters: int
    gamma_last: float
    admissible: bool
    diss_integral: float
    energy_residual: float


@dataclass
class DiagnosticsCollector:
    """Tracks the energy balance across steps and rolls up snapshots."""

    grid: RadialGrid
    params: PhysParams
    admissible: bool = True
    zeta_radius: Optional[float] = None
    outer_bc: str = "dirichlet"
    snapshots: List[Snapshot] = field(default_factory=list)
    diss_integral: float = 0.0

    _initial_energy: Optional[float] = None
    _last_state: Optional[ReformState] = None

    def accumulate(self, state: ReformState) -> None:
        """Add the midpoint-rule dissipation of the interval since the last call."""

        if self._last_state is not None:
            self.diss_integral += step_dissipation(
                self._last_state, state, self.grid, self.params, outer_bc=self.outer_bc
            )
        self._last_state = state

    def record(
        self,
        state: ReformState,
        *,
        step: int,
        picard_iters: int = 0,
        gamma_last: float = 0.0,
    ) -> Snapshot:
        if self._last_state is None or self._last_state.t != state.t:
            self.accumulate(state)
        report = full_report(
            state,
            self.grid,
            self.params,
            zeta_radius=self.zeta_radius,
            outer_bc=self.outer_bc,
        )
        if self._initial_energy is None:
            self._initial_energy = report.energy
        snapshot = Snapshot(
            t=state.t,
            step=step,
            state=state,
            report=report,
            picard_iters=picard_iters,
            gamma_last=gamma_last,
            admissible=self.admissible,
            diss_integral=self.diss_integral,
            energy_residual=abs(report.energy + self.diss_integral - self._initial_energy),
        )
        self.snapshots.append(snapshot)
        return snapshot

    @property
    def latest(self) -> Optional[Snapshot]:
        return self.snapshots[-1] if self.snapshots else None
