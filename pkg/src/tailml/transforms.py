"""Marginal standardization to unit-Pareto scale, and target rescaling.

Two standardization routes are provided:

* :class:`EmpiricalParetoTransform` -- the empirical rank transform
  ``v_hat(x)_j = 1 / (1 - F_hat_j(x_j))`` with the empirical CDF
  ``F_hat_j(x) = #{i : X_ij <= x} / (n + 1)``. The ``n + 1`` denominator keeps
  every output finite (components lie in ``[1, n + 1]``).
* :func:`pareto_standardize` -- the same map evaluated with known marginal
  CDFs, ``v(x)_j = 1 / (1 - F_j(x_j))``.

:func:`rescale_target` / :func:`descale_prediction` implement the bounded
target construction ``y = z / max(||x||, 1)`` used when predicting an
unbounded quantity from the angle of a large covariate.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import check_matrix, check_norm_p
from .geometry import lp_norm

__all__ = [
    "EmpiricalParetoTransform",
    "pareto_standardize",
    "rescale_target",
    "descale_prediction",
]


class EmpiricalParetoTransform(BaseEstimator, TransformerMixin):
    """Componentwise empirical Pareto standardization (rank transform).

    ``fit`` stores each column sorted; ``transform`` maps a (possibly new)
    point ``x`` to ``1 / (1 - F_hat_j(x_j))`` per column. Ties in a column
    are counted together (the count uses ``<=``).

    Attributes
    ----------
    sorted_columns_ : array, shape (n_samples, n_features)
        Column-wise sorted training values.
    n_ : int
        Training sample size.
    """

    def fit(self, X, y=None):
        X = check_matrix(X, "X")
        self.sorted_columns_ = np.sort(X, axis=0)
        self.n_ = X.shape[0]
        return self

    def cdf(self, X):
        """Empirical CDF values ``F_hat_j(x_j)``, in ``[0, n/(n+1)]``."""
        X = self._check_fitted_input(X)
        n, d = self.sorted_columns_.shape
        out = np.empty_like(X)
        for j in range(d):
            out[:, j] = np.searchsorted(self.sorted_columns_[:, j], X[:, j], side="right")
        return out / (n + 1.0)

    def transform(self, X):
        """Rank transform to unit-Pareto scale; components lie in [1, n+1]."""
        return 1.0 / (1.0 - self.cdf(X))

    def _check_fitted_input(self, X):
        if not hasattr(self, "sorted_columns_"):
            raise ValueError("EmpiricalParetoTransform is not fitted")
        X = check_matrix(X, "X")
        if X.shape[1] != self.sorted_columns_.shape[1]:
            raise ValueError(
                f"X has {X.shape[1]} columns, transform was fitted on "
                f"{self.sorted_columns_.shape[1]}"
            )
        return X


def pareto_standardize(cdfs, X):
    """Standardize columns to unit Pareto using known marginal CDFs.

    Parameters
    ----------
    cdfs : sequence of callables
        One CDF per column; each must return values in ``[0, 1)`` for the
        inputs supplied.
    X : array, shape (n_samples, n_features)

    Returns
    -------
    array of the same shape with entries ``1 / (1 - F_j(x_j))`` in [1, inf).
    """
    X = check_matrix(X, "X")
    if len(cdfs) != X.shape[1]:
        raise ValueError(f"got {len(cdfs)} CDFs for {X.shape[1]} columns")
    out = np.empty_like(X)
    for j, cdf in enumerate(cdfs):
        f = np.asarray(cdf(X[:, j]), dtype=float)
        if np.any(f >= 1.0) or np.any(f < 0.0):
            raise ValueError(f"column {j}: CDF values must lie in [0, 1)")
        out[:, j] = 1.0 / (1.0 - f)
    return out


def rescale_target(x, z, p=2.0):
    """Bounded target ``y = z / max(||x||_p, 1)`` (row-wise for matrices)."""
    p = check_norm_p(p)
    x = np.asarray(x, dtype=float)
    r = lp_norm(x, p)
    return np.asarray(z, dtype=float) / np.maximum(r, 1.0)


def descale_prediction(x, y_hat, p=2.0):
    """Inverse of :func:`rescale_target` for fixed x: ``z = max(||x||_p, 1) * y``."""
    p = check_norm_p(p)
    x = np.asarray(x, dtype=float)
    r = lp_norm(x, p)
    return np.maximum(r, 1.0) * np.asarray(y_hat, dtype=float)
