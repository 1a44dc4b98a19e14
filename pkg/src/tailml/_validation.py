"""Input validation helpers shared across the package."""

import numbers

import numpy as np


def check_norm_p(p):
    """Validate an lp-norm exponent. Returns the exponent as a float.

    ``p`` must lie in [1, inf]; ``np.inf`` (or ``float("inf")``) selects the
    max norm.
    """
    if not isinstance(p, numbers.Real):
        raise TypeError(f"norm exponent p must be a real number, got {p!r}")
    p = float(p)
    if np.isnan(p) or p < 1.0:
        raise ValueError(f"norm exponent p must be in [1, inf], got {p}")
    return p


def check_matrix(X, name="X", min_rows=1):
    """Coerce to a 2-D float array with finite entries."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise ValueError(f"{name} must be a 2-D array, got shape {X.shape}")
    if X.shape[0] < min_rows:
        raise ValueError(f"{name} needs at least {min_rows} row(s), got {X.shape[0]}")
    if X.shape[1] < 1:
        raise ValueError(f"{name} needs at least one column")
    if not np.all(np.isfinite(X)):
        bad = np.argwhere(~np.isfinite(X))[0]
        raise ValueError(f"{name} contains a non-finite entry at row {bad[0]}, column {bad[1]}")
    return X


def check_vector(y, n=None, name="y"):
    """Coerce to a 1-D float array with finite entries, optionally of length n."""
    y = np.asarray(y, dtype=float).ravel()
    if n is not None and y.shape[0] != n:
        raise ValueError(f"{name} has length {y.shape[0]}, expected {n}")
    if not np.all(np.isfinite(y)):
        bad = int(np.argwhere(~np.isfinite(y))[0][0])
        raise ValueError(f"{name} contains a non-finite entry at index {bad}")
    return y


def check_labels(y, n=None, name="labels"):
    """Validate a vector of +/-1 labels."""
    y = np.asarray(y).ravel()
    if n is not None and y.shape[0] != n:
        raise ValueError(f"{name} has length {y.shape[0]}, expected {n}")
    vals = np.unique(y)
    if not np.all(np.isin(vals, (-1, 1))):
        raise ValueError(f"{name} must contain only -1/+1 values, found {vals[:5]}")
    return y.astype(int)


def check_in_range(value, lo, hi, name, *, lo_open=False, hi_open=False):
    """Validate that a scalar lies in the given interval."""
    if not isinstance(value, numbers.Real) or np.isnan(value):
        raise ValueError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    lo_ok = value > lo if lo_open else value >= lo
    hi_ok = value < hi if hi_open else value <= hi
    if not (lo_ok and hi_ok):
        lb = "(" if lo_open else "["
        rb = ")" if hi_open else "]"
        raise ValueError(f"{name} must lie in {lb}{lo}, {hi}{rb}, got {value}")
    return value


def check_positive_int(value, name, minimum=1):
    if not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value
