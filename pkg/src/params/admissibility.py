"""Closed-form admissibility conditions on the viscosity exponent δ.

The existence theory needs a weighted-L^p exponent p inside the root interval
of q(p) = p² − K(δ)p + K(δ) with K(δ) = 2δ(2δ − 1)/(1 − δ)², and it uses the
particular choice p* = (4 − 2δ)/(1 − δ). The parameter pair is admissible when
2/3 ≤ δ < 1 and p* does not exceed the upper root. That second inequality holds
only above a threshold δ* ≈ 0.7427, which :func:`find_delta_star` recovers by
bisection.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

from src.errors import DomainError
from src.params.physical import TWO_THIRDS, PhysParams

BISECTION_BRACKET = (TWO_THIRDS + 1e-9, 1.0 - 1e-9)
# K(2/3) evaluates a few ulps below 4 in double precision.
_K_SLACK = 1e-9


def k_of_delta(delta: float) -> float:
    """Return K(δ) = 2δ(2δ − 1)/(1 − δ)² for 0 < δ < 1."""

    if not 0.0 < delta < 1.0:
        raise DomainError(f"K(delta) needs 0 < delta < 1, got {delta}")
    return 2.0 * delta * (2.0 * delta - 1.0) / (1.0 - delta) ** 2


def p_range(delta: float) -> tuple[float, float]:
    """Return the roots (p_min, p_max) of p² − K p + K = 0."""

    k = k_of_delta(delta)
    if k < 4.0 - _K_SLACK:
        raise DomainError(f"K(delta) = {k} < 4: no real exponent range for delta={delta}")
    # K(K − 4) instead of K² − 4K keeps precision as δ → 1.
    root = math.sqrt(max(k * (k - 4.0), 0.0))
    return (k - root) / 2.0, (k + root) / 2.0


def p_star(delta: float) -> float:
    """Return the exponent (4 − 2δ)/(1 − δ) used for the ‖ru‖ estimate."""

    if not (math.isfinite(delta) and delta < 1.0):
        raise DomainError(f"p_star needs delta < 1, got {delta}")
    return (4.0 - 2.0 * delta) / (1.0 - delta)


def quadratic_residual(p: float, k: float) -> float:
    """q(p) = p² − K p + K; nonpositive exactly on [p_min, p_max]."""

    return p * p - k * p + k


def wz_comparison(gamma: float, delta: float, p: float) -> bool:
    """Evaluate the earlier one-dimensional condition γ − δ − 1/p ≥ 0."""

    if not (math.isfinite(p) and p >= 2.0):
        raise DomainError(f"the comparison exponent needs p >= 2, got {p}")
    return gamma - delta - 1.0 / p >= 0.0


@dataclass(frozen=True)
class AdmissibilityReport:
    """Every intermediate quantity of the δ condition plus the verdict."""

    delta: float
    K: float
    p_star: float
    p_min: float
    p_max: float
    viscosity_law_valid: bool
    condition_holds: bool
    admissible: bool
    reason: str

    def as_rows(self) -> list[tuple[str, str]]:
        """Key/value pairs in display order."""

        return [
            ("delta", repr(self.delta)),
            ("K", repr(self.K)),
            ("p_star", repr(self.p_star)),
            ("p_min", repr(self.p_min)),
            ("p_max", repr(self.p_max)),
            ("viscosity_law_valid", str(self.viscosity_law_valid).lower()),
            ("condition_holds", str(self.condition_holds).lower()),
            ("admissible", str(self.admissible).lower()),
            ("reason", self.reason),
        ]


def admissibility_report(delta: float) -> AdmissibilityReport:
    """Evaluate the δ condition for a bare exponent; never raises."""

    nan = math.nan
    law_valid = TWO_THIRDS - 1e-12 <= delta < 1.0

    try:
        k = k_of_delta(delta)
    except DomainError:
        k = nan
    try:
        star = p_star(delta)
    except DomainError:
        star = nan
    try:
        low, high = p_range(delta)
    except DomainError:
        low, high = nan, nan

    holds = math.isfinite(star) and math.isfinite(high) and star <= high
    admissible = law_valid and holds
    if admissible:
        reason = "ok"
    elif not law_valid:
        reason = "delta outside [2/3, 1): viscosity law 2mu+3lambda >= 0 fails"
    else:
        reason = "p_star exceeds p_max: delta below the threshold"

    return AdmissibilityReport(
        delta=delta,
        K=k,
        p_star=star,
        p_min=low,
        p_max=high,
        viscosity_law_valid=law_valid,
        condition_holds=holds,
        admissible=admissible,
        reason=reason,
    )


def check_admissibility(params: PhysParams) -> AdmissibilityReport:
    """Report whether ``params`` satisfy the existence hypotheses."""

    return admissibility_report(params.delta)


def _threshold_gap(delta: float) -> float:
    return p_star(delta) - p_range(delta)[1]


def find_delta_star(
    tol: float, *, bracket: tuple[float, float] = BISECTION_BRACKET
) -> float:
    """Locate the root of p_star(δ) − p_max(δ) on ``bracket`` by bisection.

    The returned midpoint is within ``tol / 2`` of the root. Admissibility holds
    above it and fails between 2/3 and it.
    """

    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol}")

    lo, hi = bracket
    f_lo = _threshold_gap(lo)
    f_hi = _threshold_gap(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise DomainError(
            f"bracket [{lo}, {hi}] does not straddle a sign change ({f_lo}, {f_hi})"
        )

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = _threshold_gap(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
