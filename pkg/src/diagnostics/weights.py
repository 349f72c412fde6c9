"""The C¹ cut-off weight ζ used for localised density moments.

ζ is 1 on [0, 1/2], e^{−s} on [1, ∞) and a cubic bridge in between chosen so
that the value and the first derivative match at both knots.
"""

from __future__ import annotations

import math

import numpy as np

from src.errors import DomainError

_E = math.e
CUBIC = (16.0 - 20.0 / _E, 44.0 / _E - 36.0, 24.0 - 29.0 / _E, 6.0 / _E - 4.0)
KNOTS = (0.5, 1.0)


def _cubic(s: np.ndarray) -> np.ndarray:
    a, b, c, d = CUBIC
    return ((a * s + b) * s + c) * s + d


def _cubic_derivative(s: np.ndarray) -> np.ndarray:
    a, b, c, _ = CUBIC
    return (3.0 * a * s + 2.0 * b) * s + c


def _as_nonnegative(s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if np.any(s < 0.0):
        raise DomainError("zeta is only defined for s >= 0")
    return s


def zeta_weight(s):
    """ζ(s), elementwise for arrays."""

    s = _as_nonnegative(s)
    out = np.where(s <= KNOTS[0], 1.0, np.where(s < KNOTS[1], _cubic(s), np.exp(-s)))
    return float(out) if out.ndim == 0 else out


def zeta_weight_derivative(s):
    """ζ'(s), elementwise for arrays."""

    s = _as_nonnegative(s)
    out = np.where(
        s <= KNOTS[0], 0.0, np.where(s < KNOTS[1], _cubic_derivative(s), -np.exp(-s))
    )
    return float(out) if out.ndim == 0 else out


def zeta_knot_gaps() -> dict[str, float]:
    """Mismatch of value and slope between neighbouring pieces at each knot."""

    lo, hi = KNOTS
    return {
        "value_half": abs(1.0 - float(_cubic(np.float64(lo)))),
        "slope_half": abs(0.0 - float(_cubic_derivative(np.float64(lo)))),
        "value_one": abs(float(_cubic(np.float64(hi))) - math.exp(-1.0)),
        "slope_one": abs(float(_cubic_derivative(np.float64(hi))) + math.exp(-1.0)),
    }


def zeta_ratio_bound(s_max: float = 10.0, step: float = 1e-3) -> float:
    """Largest |ζ'(s)|/ζ(s) over the sample 0, step, 2·step, ..., s_max."""

    if not (s_max > 0.0 and step > 0.0):
        raise DomainError("s_max and step must be positive")
    samples = np.linspace(0.0, s_max, int(round(s_max / step)) + 1)
    return float(np.max(np.abs(zeta_weight_derivative(samples)) / zeta_weight(samples)))
