"""Observed order of accuracy from refinement studies."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from src.errors import DomainError


def _validated(errors: Sequence[float], spacings: Sequence[float], minimum: int):
    errors = np.asarray(errors, dtype=float)
    spacings = np.asarray(spacings, dtype=float)
    if errors.shape != spacings.shape or errors.ndim != 1:
        raise DomainError("errors and spacings must be 1-D sequences of equal length")
    if errors.size < minimum:
        raise DomainError(f"need at least {minimum} (error, spacing) pairs, got {errors.size}")
    if np.any(errors <= 0.0) or np.any(spacings <= 0.0):
        raise DomainError("errors and spacings must be positive")
    if np.any(np.diff(spacings) >= 0.0):
        raise DomainError("spacings must be strictly decreasing")
    return errors, spacings


def convergence_order(errors: Sequence[float], spacings: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(spacing)."""

    errors, spacings = _validated(errors, spacings, 3)
    slope, _ = np.polyfit(np.log(spacings), np.log(errors), 1)
    return float(slope)


def local_orders(errors: Sequence[float], spacings: Sequence[float]) -> list[float]:
    """Slopes between consecutive refinements."""

    errors, spacings = _validated(errors, spacings, 2)
    return list(np.diff(np.log(errors)) / np.diff(np.log(spacings)))
