"""Input validation helpers and the exception taxonomy shared by all modules."""

from __future__ import annotations

import numpy as np


class ValidationError(ValueError):
    """Malformed or inconsistent input (wrong shape, bad parameter, invalid frame)."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of a formula."""


class AdmissibilityError(ValidationError):
    """State has a vanishing analysis coefficient where a nonzero one is required."""

    def __init__(self, offending_index: int, coeff_sq: float, threshold: float):
        self.offending_index = int(offending_index)
        self.coeff_sq = float(coeff_sq)
        self.threshold = float(threshold)
        super().__init__(
            f"state is inadmissible: squared coefficient {coeff_sq:.3e} at index "
            f"{offending_index} is below the admissibility floor {threshold:.3e}"
        )


def check_positive_int(value, name: str) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < 1:
        raise ValidationError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def as_complex_vector(x, name: str = "vector") -> np.ndarray:
    """Coerce to a 1-d complex128 array, rejecting anything else."""
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim != 1 or arr.size == 0:
        raise ValidationError(f"{name} must be a nonempty 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def check_state(h, dimension: int | None = None, norm_tol: float = 1e-12) -> np.ndarray:
    """Return the entries of a unit-norm state as a complex array.

    Accepts a StateVector or any array-like. Raises ValidationError on a
    dimension mismatch or if the norm deviates from 1 by more than norm_tol.
    """
    entries = getattr(h, "entries", h)
    arr = as_complex_vector(entries, "state")
    if dimension is not None and arr.size != dimension:
        raise ValidationError(
            f"state has dimension {arr.size}, expected {dimension}"
        )
    nrm = float(np.linalg.norm(arr))
    if abs(nrm - 1.0) > norm_tol:
        raise ValidationError(f"state must be unit norm, got ||h|| = {nrm!r}")
    return arr


def check_same_dimension(a_dim: int, b_dim: int, what: str = "frames") -> None:
    if a_dim != b_dim:
        raise ValidationError(f"{what} must share a dimension, got {a_dim} and {b_dim}")


def check_in_range(x: float, lo: float, hi: float, name: str,
                   open_lo: bool = False, slack: float = 1e-12) -> float:
    """Validate that x lies in [lo, hi] (or (lo, hi] when open_lo).

    Excursions past either closed end by at most slack are forgiven and
    clamped back; an open lower end admits no slack. Returns the clamped value.
    """
    x = float(x)
    if not np.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")
    too_low = (x <= lo) if open_lo else (x < lo - slack)
    if too_low or x > hi + slack:
        bracket = "(" if open_lo else "["
        raise DomainError(f"{name} must lie in {bracket}{lo}, {hi}], got {x!r}")
    return min(max(x, lo), hi)
