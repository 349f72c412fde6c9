"""Bridge between the primitive and the effective-velocity formulations."""

from .identities import momentum_forms_agree, momentum_source, pressure_gradient_identity_residual
from .variables import (
    effective_velocity,
    enthalpy,
    positive_power,
    sound_speed,
    to_primitive,
    to_reformulated,
)

__all__ = [
    "effective_velocity",
    "enthalpy",
    "momentum_forms_agree",
    "momentum_source",
    "positive_power",
    "pressure_gradient_identity_residual",
    "sound_speed",
    "to_primitive",
    "to_reformulated",
]
