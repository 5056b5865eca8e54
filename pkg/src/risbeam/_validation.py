"""Input validation helpers shared by the library and the estimators."""

import numbers

import numpy as np


class ScenarioError(ValueError):
    """Raised when a scenario or one of its parts violates an invariant."""


def check_positive_int(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise ScenarioError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_positive_float(value, name):
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ScenarioError(f"{name} must be a real number, got {value!r}") from None
    if not np.isfinite(out) or out <= 0:
        raise ScenarioError(f"{name} must be positive and finite, got {value!r}")
    return out


def check_nonnegative_float(value, name):
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ScenarioError(f"{name} must be a real number, got {value!r}") from None
    if not np.isfinite(out) or out < 0:
        raise ScenarioError(f"{name} must be non-negative and finite, got {value!r}")
    return out


def check_complex_vector(x, name, length=None):
    """Return ``x`` as a 1-D complex array, optionally of a required length."""
    arr = np.asarray(x, dtype=complex)
    if arr.ndim != 1:
        arr = arr.ravel()
    if length is not None and arr.shape[0] != length:
        raise ValueError(f"{name} has length {arr.shape[0]}, expected {length}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_random_state(seed):
    """Turn ``seed`` into a ``numpy.random.Generator``."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
