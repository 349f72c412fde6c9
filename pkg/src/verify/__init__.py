"""Independent oracles: manufactured solutions, characteristics and observed orders."""

from .characteristics import (
    TransportStudy,
    characteristics_oracle,
    transport_error,
    transport_error_study,
)
from .convergence import convergence_order, local_orders
from .manufactured import (
    PRESETS,
    ConvergenceStudy,
    FieldDescriptor,
    MMSPreset,
    StudyRow,
    constant,
    diffusion_forcing,
    exponential,
    gaussian,
    inverse_square,
    mms_error,
    mms_sources,
    run_mms_study,
    sine_profile,
    velocity_forcing,
)

__all__ = [
    "PRESETS",
    "ConvergenceStudy",
    "FieldDescriptor",
    "MMSPreset",
    "StudyRow",
    "TransportStudy",
    "characteristics_oracle",
    "constant",
    "convergence_order",
    "diffusion_forcing",
    "exponential",
    "gaussian",
    "inverse_square",
    "local_orders",
    "mms_error",
    "mms_sources",
    "run_mms_study",
    "sine_profile",
    "transport_error",
    "transport_error_study",
    "velocity_forcing",
]
