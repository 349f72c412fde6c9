"""Physical parameters and the closed-form admissibility conditions."""

from .admissibility import (
    AdmissibilityReport,
    admissibility_report,
    check_admissibility,
    find_delta_star,
    k_of_delta,
    p_range,
    p_star,
    quadratic_residual,
    wz_comparison,
)
from .physical import PhysParams

__all__ = [
    "AdmissibilityReport",
    "PhysParams",
    "admissibility_report",
    "check_admissibility",
    "find_delta_star",
    "k_of_delta",
    "p_range",
    "p_star",
    "quadratic_residual",
    "wz_comparison",
]
