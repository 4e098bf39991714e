"""Input validation helpers shared by the functional API and the estimator."""

import numbers

import numpy as np

from .exceptions import (
    LengthMismatchError,
    NonFiniteError,
    TooShortError,
    WindowTooWideError,
)

MIN_LENGTH = 3


def check_series(values, *, name="signal"):
    """Return ``values`` as a finite, 1-D float64 array of length >= 3."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < MIN_LENGTH:
        raise TooShortError(
            f"{name} needs at least {MIN_LENGTH} samples, got {arr.size}"
        )
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains NaN or Inf")
    return arr


def check_half_width(m, n=None, *, minimum=0, name="half_width"):
    """Validate an integer half-width, optionally against a signal length."""
    if isinstance(m, bool) or not isinstance(m, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {m!r}")
    m = int(m)
    if m < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {m}")
    if n is not None and 2 * m + 1 > n:
        raise WindowTooWideError(
            f"window of half-width {m} (length {2 * m + 1}) does not fit in N={n}"
        )
    return m


def max_half_width(n):
    """Largest half-width whose window fits a circular signal of length ``n``."""
    return (n - 1) // 2


def check_same_length(*arrays):
    sizes = {len(a) for a in arrays}
    if len(sizes) > 1:
        raise LengthMismatchError(f"length mismatch: {sorted(sizes)}")


def check_mass(a, *, name="A", allow_zero=False):
    a = float(a)
    if not np.isfinite(a):
        raise ValueError(f"{name} must be finite")
    low_ok = a >= 0 if allow_zero else a > 0
    if not (low_ok and a <= 1):
        bound = "[0, 1]" if allow_zero else "(0, 1]"
        raise ValueError(f"{name} must lie in {bound}, got {a}")
    return a
