"""Least-squares regression on the angles of extreme covariates.

Two estimators share the same pipeline (standardize, keep the k largest-norm
rows, regress the target on the angles):

* :class:`AngularLeastSquares` -- unpenalized baseline; on rank-deficient
  designs it returns the minimum-l2-norm minimizer.
* :class:`XLasso` -- the l1-penalized estimator minimizing

      (2k)^-1 * sum_i (y_i - <beta, theta_i>)^2 + lam * ||beta||_1

  by cyclic coordinate descent with soft-thresholding, started at zero.

:func:`kkt_certificate` verifies subgradient optimality of a fit and
:func:`check_prediction_lemma` the algebraic in-sample prediction-error
inequality that holds whenever the penalty dominates twice the correlation
between design and residual.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit
from sklearn.base import BaseEstimator, RegressorMixin

from ._serialize import read_model_file, write_model_file
from .base import AngularPipelineMixin, check_pipeline_match, coef_of

__all__ = [
    "soft_threshold",
    "lambda_max",
    "XLasso",
    "AngularLeastSquares",
    "fit_xlasso",
    "fit_ols_angles",
    "KktReport",
    "kkt_certificate",
    "tail_mse",
    "PredictionLemmaReport",
    "check_prediction_lemma",
    "save_linear_model",
    "load_linear_model",
]


def soft_threshold(z, lam):
    """sign(z) * max(|z| - lam, 0), elementwise."""
    if np.any(np.asarray(lam) < 0):
        raise ValueError("soft_threshold requires lam >= 0")
    return np.sign(z) * np.maximum(np.abs(z) - lam, 0.0)


@njit(cache=True, nogil=True)
def _cd_kernel(W, y, lam, tol, max_sweeps, obj_out):  # pragma: no cover - compiled
    k, d = W.shape
    beta = np.zeros(d)
    r = y.copy()
    col2 = np.empty(d)
    for j in range(d):
        s = 0.0
        for i in range(k):
            s += W[i, j] * W[i, j]
        col2[j] = s
    track = obj_out.shape[0] > 0
    n_sweeps = 0
    converged = False
    for sweep in range(max_sweeps):
        max_delta = 0.0
        for j in range(d):
            if col2[j] == 0.0:
                continue
            bj = beta[j]
            s = 0.0
            for i in range(k):
                s += W[i, j] * r[i]
            rho = s / k + col2[j] / k * bj
            if rho > lam:
                bnew = (rho - lam) * k / col2[j]
            elif rho < -lam:
                bnew = (rho + lam) * k / col2[j]
            else:
                bnew = 0.0
            delta = bnew - bj
            if delta != 0.0:
                for i in range(k):
                    r[i] -= delta * W[i, j]
                beta[j] = bnew
                if abs(delta) > max_delta:
                    max_delta = abs(delta)
        n_sweeps = sweep + 1
        if track and sweep < obj_out.shape[0]:
            rss = 0.0
            for i in range(k):
                rss += r[i] * r[i]
            l1 = 0.0
            for j in range(d):
                l1 += abs(beta[j])
            obj_out[sweep] = rss / (2.0 * k) + lam * l1
        if max_delta < tol:
            converged = True
            break
    return beta, n_sweeps, converged


def _objective(W, y, beta, lam):
    r = y - W @ beta
    return float(r @ r / (2.0 * W.shape[0]) + lam * np.sum(np.abs(beta)))


@njit(cache=True, nogil=True)
def _column_correlations(W, y):  # pragma: no cover - compiled
    # same accumulation order as the descent kernel, so that a fit at
    # lam = lambda_max stays exactly at zero
    k, d = W.shape
    out = np.empty(d)
    for j in range(d):
        s = 0.0
        for i in range(k):
            s += W[i, j] * y[i]
        out[j] = s
    return out


def lambda_max(sample):
    """Smallest penalty for which the lasso solution is exactly zero: ||W'y||_inf / k."""
    y = sample.require_targets()
    corr = _column_correlations(
        np.ascontiguousarray(sample.angles), np.ascontiguousarray(y, dtype=float)
    )
    return float(np.max(np.abs(corr)) / sample.k)


class XLasso(AngularPipelineMixin, RegressorMixin, BaseEstimator):
    """l1-penalized least squares on the angles of the k largest covariates.

    Parameters
    ----------
    lam : float
        Penalty weight (>= 0).
    k : int or None
        Number of extreme observations to keep; None keeps all rows.
    norm_p : float
        lp norm defining radii and angles (inf allowed).
    standardization : {'none', 'rank', 'known-pareto'}
        Marginal standardization applied before the polar decomposition.
    margins : sequence of callables, optional
        Marginal CDFs, required for 'known-pareto'.
    tau : float
        Off-axis filter level applied to the training extremes (0 disables).
    tol, max_sweeps :
        Coordinate-descent stopping rule: stop when the largest coefficient
        change in a sweep falls below tol.
    """

    def __init__(
        self,
        lam=0.0,
        k=None,
        norm_p=2.0,
        standardization="none",
        margins=None,
        tau=0.0,
        tol=1e-8,
        max_sweeps=100_000,
    ):
        self.lam = lam
        self.k = k
        self.norm_p = norm_p
        self.standardization = standardization
        self.margins = margins
        self.tau = tau
        self.tol = tol
        self.max_sweeps = max_sweeps

    def fit_tail(self, sample, track_objective=False):
        y = sample.require_targets()
        if self.lam < 0:
            raise ValueError("lam must be >= 0")
        obj_out = np.empty(self.max_sweeps if track_objective else 0)
        beta, sweeps, converged = _cd_kernel(
            np.ascontiguousarray(sample.angles),
            np.ascontiguousarray(y, dtype=float),
            float(self.lam),
            float(self.tol),
            int(self.max_sweeps),
            obj_out,
        )
        self.coef_ = beta
        self.n_sweeps_ = int(sweeps)
        self.converged_ = bool(converged)
        self.objective_ = _objective(sample.angles, y, beta, self.lam)
        self.objective_path_ = obj_out[:sweeps].copy() if track_objective else None
        self.sample_ = sample
        return self

    def predict(self, X):
        return self._angles(X) @ self.coef_


class AngularLeastSquares(AngularPipelineMixin, RegressorMixin, BaseEstimator):
    """Unpenalized least squares on the angles of the k largest covariates.

    Minimizes ``k^-1 ||y - W beta||_2^2``; rank-deficient designs yield the
    minimum-l2-norm minimizer (SVD-based least squares).
    """

    def __init__(self, k=None, norm_p=2.0, standardization="none", margins=None, tau=0.0):
        self.k = k
        self.norm_p = norm_p
        self.standardization = standardization
        self.margins = margins
        self.tau = tau

    def fit_tail(self, sample):
        y = sample.require_targets()
        beta, _, _, _ = np.linalg.lstsq(sample.angles, y, rcond=None)
        self.coef_ = beta
        self.converged_ = True
        self.n_sweeps_ = 0
        self.objective_ = _objective(sample.angles, y, beta, 0.0)
        self.sample_ = sample
        return self

    def predict(self, X):
        return self._angles(X) @ self.coef_


def fit_xlasso(sample, lam, tol=1e-8, max_sweeps=100_000, track_objective=False):
    """Fit :class:`XLasso` directly on an existing tail sample."""
    model = XLasso(
        lam=lam,
        norm_p=sample.norm_p,
        standardization=sample.standardization,
        tol=tol,
        max_sweeps=max_sweeps,
    )
    return model.fit_tail(sample, track_objective=track_objective)


def fit_ols_angles(sample):
    """Fit :class:`AngularLeastSquares` directly on an existing tail sample."""
    model = AngularLeastSquares(norm_p=sample.norm_p, standardization=sample.standardization)
    return model.fit_tail(sample)


@dataclass(frozen=True)
class KktReport:
    """Subgradient optimality check for an l1 fit."""

    grad_inf_norm: float
    max_violation: float
    active_set: np.ndarray
    tol: float
    passed: bool


def kkt_certificate(sample, model, tol=1e-6):
    """Verify the stationarity conditions of the penalized problem at a fit.

    With ``g = W'(y - W beta) / k`` the fit is optimal iff ``|g_j| <= lam``
    for every coordinate and ``g_j = lam * sign(beta_j)`` on the active set;
    both are checked within ``tol``.
    """
    y = sample.require_targets()
    beta = coef_of(model)
    if beta.shape[0] != sample.d:
        raise ValueError(f"coefficient dimension {beta.shape[0]} does not match sample d={sample.d}")
    lam = float(getattr(model, "lam", 0.0))
    g = sample.angles.T @ (y - sample.angles @ beta) / sample.k
    active = np.flatnonzero(beta != 0.0)
    viol_inactive = float(np.max(np.maximum(np.abs(g) - lam, 0.0)))
    viol_active = float(np.max(np.abs(g[active] - lam * np.sign(beta[active])))) if active.size else 0.0
    max_violation = max(viol_inactive, viol_active)
    return KktReport(
        grad_inf_norm=float(np.max(np.abs(g))),
        max_violation=max_violation,
        active_set=active,
        tol=tol,
        passed=max_violation <= tol,
    )


def tail_mse(model, sample):
    """Mean squared prediction error on a tail sample: k^-1 sum (y - <beta, theta>)^2."""
    y = sample.require_targets()
    if sample.k == 0:
        raise ValueError("tail_mse needs a non-empty tail sample")
    check_pipeline_match(model, sample)
    beta = coef_of(model)
    r = y - sample.angles @ beta
    return float(r @ r / sample.k)


@dataclass(frozen=True)
class PredictionLemmaReport:
    """In-sample prediction-error inequality check at a reference coefficient."""

    applicable: bool
    lam: float
    lam_threshold: float
    lhs: float
    rhs: float
    holds: bool


def check_prediction_lemma(sample, beta_star, lam, tol=1e-8, max_sweeps=100_000):
    """Check ``k^-1 ||W (beta_hat - beta*)||^2 <= 12 ||beta*||_1 lam``.

    The inequality is purely algebraic and holds for the exact minimizer
    whenever ``lam >= 2 ||W'e||_inf / k`` with ``e = y - W beta*``; the
    report flags whether that applicability condition is met.
    """
    y = sample.require_targets()
    beta_star = np.asarray(beta_star, dtype=float).ravel()
    if beta_star.shape[0] != sample.d:
        raise ValueError("beta_star dimension does not match the sample")
    e = y - sample.angles @ beta_star
    lam_threshold = 2.0 * float(np.max(np.abs(sample.angles.T @ e))) / sample.k
    applicable = lam >= lam_threshold
    if not applicable:
        return PredictionLemmaReport(False, float(lam), lam_threshold, np.nan, np.nan, False)
    model = fit_xlasso(sample, lam, tol=tol, max_sweeps=max_sweeps)
    diff = sample.angles @ (model.coef_ - beta_star)
    lhs = float(diff @ diff / sample.k)
    rhs = 12.0 * float(np.sum(np.abs(beta_star))) * float(lam)
    return PredictionLemmaReport(True, float(lam), lam_threshold, lhs, rhs, lhs <= rhs + 1e-12)


def save_linear_model(model, path):
    """Persist a fitted angular linear model to the versioned flat-file format."""
    kind = "xlasso" if isinstance(model, XLasso) else "angular-ols"
    header = {
        "d": int(model.coef_.shape[0]),
        "k": int(model.sample_.k),
        "norm_p": float(model.norm_p),
        "standardization": model.standardization,
        "lam": float(getattr(model, "lam", 0.0)),
        "converged": bool(model.converged_),
        "n_sweeps": int(model.n_sweeps_),
        "objective": float(model.objective_),
    }
    write_model_file(path, kind, header, {"coefficients": (["index", "value"], [
        [j, float(v)] for j, v in enumerate(model.coef_)
    ])})


def load_linear_model(path):
    """Load a model written by :func:`save_linear_model`.

    Returns an unfitted-pipeline estimator carrying the stored coefficients;
    re-attach margins before predicting on raw data under 'rank'
    standardization.
    """
    kind, header, tables = read_model_file(path)
    if kind not in ("xlasso", "angular-ols"):
        raise ValueError(f"file holds a {kind!r} model, not a linear one")
    rows = tables["coefficients"]
    beta = np.zeros(int(header["d"]))
    for idx, val in rows:
        beta[int(idx)] = val
    if kind == "xlasso":
        model = XLasso(
            lam=header["lam"],
            norm_p=header["norm_p"],
            standardization=header["standardization"],
        )
    else:
        model = AngularLeastSquares(
            norm_p=header["norm_p"], standardization=header["standardization"]
        )
    model.coef_ = beta
    model.converged_ = bool(header["converged"])
    model.n_sweeps_ = int(header["n_sweeps"])
    model.objective_ = float(header["objective"])
    return model
