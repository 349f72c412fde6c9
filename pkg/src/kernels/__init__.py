"""Per-equation solvers: transport, damped advection and the momentum solve."""

from .momentum import (
    MomentumSolveConfig,
    pressure_force,
    step_momentum,
    viscous_operator,
)
from .strain import (
    ViscousOperator,
    face_viscosity,
    face_weights,
    strain_dissipation,
    strain_operator,
    strain_stencil,
)
from .transport import (
    CFL_LIMIT,
    TransportScheme,
    check_cfl,
    face_mass,
    face_velocity,
    step_advected_scalar,
    step_continuity,
    step_effective_velocity,
    volumetric_expansion,
)
from .tridiagonal import solve_tridiagonal, tridiagonal_matvec

__all__ = [
    "CFL_LIMIT",
    "MomentumSolveConfig",
    "TransportScheme",
    "ViscousOperator",
    "check_cfl",
    "face_mass",
    "face_velocity",
    "face_viscosity",
    "face_weights",
    "pressure_force",
    "solve_tridiagonal",
    "step_advected_scalar",
    "step_continuity",
    "step_effective_velocity",
    "step_momentum",
    "strain_dissipation",
    "strain_operator",
    "strain_stencil",
    "tridiagonal_matvec",
    "viscous_operator",
    "volumetric_expansion",
]
