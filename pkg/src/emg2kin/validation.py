"""Small input-validation helpers used across modules."""

import numpy as np

from .errors import ShapeMismatch


def as_float_matrix(x, name="x", n_rows=None):
    """Coerce to a 2-D float64 array, optionally enforcing a row count."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeMismatch(f"{name} must be 2-D, got shape {arr.shape}")
    if n_rows is not None and arr.shape[0] != n_rows:
        raise ShapeMismatch(f"{name} must have {n_rows} rows, got {arr.shape[0]}")
    return arr


def as_float_vector(x, name="x"):
    arr = np.asarray(x, dtype=np.float64).ravel()
    if arr.size == 0:
        raise ShapeMismatch(f"{name} must be non-empty")
    return arr


def check_finite(arr, name="array"):
    if not np.all(np.isfinite(arr)):
        raise ShapeMismatch(f"{name} contains non-finite values")
    return arr


def check_fitted(estimator, attribute):
    """Raise if a fit-time attribute is missing (sklearn-style convention)."""
    if not hasattr(estimator, attribute):
        raise ValueError(
            f"{type(estimator).__name__} is not fitted yet; call fit() first"
        )
