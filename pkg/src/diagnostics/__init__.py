"""Estimate functionals evaluated as runtime monitors."""

from .collector import DiagnosticsCollector, Snapshot
from .functionals import (
    DiagnosticsReport,
    bd_dissipation,
    density_bound_functionals,
    dissipation_split_gap,
    dissipation_split_identity,
    dissipation_terms,
    energy_and_bd,
    full_report,
    gamma1_entropy,
    isothermal_energy,
    mass,
    moment,
    step_dissipation,
    viscosity,
    zeta_moment,
)
from .weights import zeta_knot_gaps, zeta_ratio_bound, zeta_weight, zeta_weight_derivative

__all__ = [
    "DiagnosticsCollector",
    "DiagnosticsReport",
    "Snapshot",
    "bd_dissipation",
    "density_bound_functionals",
    "dissipation_split_gap",
    "dissipation_split_identity",
    "dissipation_terms",
    "energy_and_bd",
    "full_report",
    "gamma1_entropy",
    "isothermal_energy",
    "mass",
    "moment",
    "step_dissipation",
    "viscosity",
    "zeta_knot_gaps",
    "zeta_moment",
    "zeta_ratio_bound",
    "zeta_weight",
    "zeta_weight_derivative",
]
