from .core import (
    ContinuationResult,
    RunConfig,
    RunResult,
    SimulationEngine,
    compatibility_g_norm,
    eta_continuation,
    regularize_initial,
    run,
    stable_time_step,
)
from .picard import (
    ContractionTrace,
    PicardConfig,
    check_density,
    contraction_functional,
    picard_step,
    state_scale,
)

__all__ = [
    "ContinuationResult",
    "ContractionTrace",
    "PicardConfig",
    "RunConfig",
    "RunResult",
    "SimulationEngine",
    "check_density",
    "compatibility_g_norm",
    "contraction_functional",
    "eta_continuation",
    "picard_step",
    "regularize_initial",
    "run",
    "stable_time_step",
    "state_scale",
]
