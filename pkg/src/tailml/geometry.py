"""Norms, polar decomposition and angular predicates on the positive sphere.

Every pipeline in this package works with the polar decomposition
``x = r * theta`` where ``r = ||x||_p`` and ``theta = x / r`` lies on the unit
sphere of the chosen lp norm. All functions are pure and accept either a
single vector or a matrix of row vectors.
"""

import numpy as np

from ._validation import check_norm_p

__all__ = ["lp_norm", "polar", "angle_min"]


def lp_norm(x, p=2.0, axis=-1):
    """lp norm of a vector, or row-wise norms of a matrix.

    ``p = inf`` is the max of absolute values. Raises on non-finite input.
    """
    p = check_norm_p(p)
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise ValueError("cannot take the norm of an empty array")
    if not np.all(np.isfinite(x)):
        raise ValueError("lp_norm: input contains a non-finite component")
    if np.isinf(p):
        return np.max(np.abs(x), axis=axis)
    if p == 1.0:
        return np.sum(np.abs(x), axis=axis)
    if p == 2.0:
        return np.sqrt(np.sum(x * x, axis=axis))
    return np.sum(np.abs(x) ** p, axis=axis) ** (1.0 / p)


def polar(x, p=2.0):
    """Polar decomposition ``x -> (radius, angle)`` w.r.t. the lp norm.

    For a matrix of row vectors returns ``(radii, angles)`` with one row per
    input row. A zero vector has no angle and raises ``ValueError``.
    """
    x = np.asarray(x, dtype=float)
    r = lp_norm(x, p)
    if np.any(r == 0.0):
        if x.ndim == 1:
            raise ValueError("polar: zero vector has no angle")
        bad = int(np.argwhere(r == 0.0)[0][0])
        raise ValueError(f"polar: row {bad} is the zero vector and has no angle")
    theta = x / (r[..., None] if x.ndim > 1 else r)
    return r, theta


def angle_min(theta, axis=-1):
    """Smallest component of an angle (row-wise for a matrix).

    Used to exclude angles too close to the axes of the positive sphere:
    the off-axis region at level tau is ``{theta : angle_min(theta) >= tau}``.
    """
    theta = np.asarray(theta, dtype=float)
    return np.min(theta, axis=axis)
