"""Binary classification on the angles of extreme covariates.

The classifier is linear in the angle, ``g(x) = sign(<beta, theta(x)>)``, so
predictions are invariant to rescaling of the input. Training minimizes the
logistic surrogate of the tail 0-1 risk over the k largest-norm covariates,
either with an l1 penalty (Lagrangian mode) or under an l1-ball constraint
(constrained mode, projected gradient).
"""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from ._serialize import read_model_file, write_model_file
from ._validation import check_labels
from .base import AngularPipelineMixin, check_pipeline_match, coef_of
from .geometry import polar
from .regression import soft_threshold

__all__ = [
    "logistic_loss",
    "project_l1_ball",
    "AngularLogisticLasso",
    "fit_logistic_lasso",
    "classify",
    "empirical_tail_risk_01",
    "save_classifier",
    "load_classifier",
]


def logistic_loss(margin):
    """log(1 + exp(-margin)), numerically stable for large |margin|."""
    return np.logaddexp(0.0, -np.asarray(margin, dtype=float))


def _sigmoid(x):
    # tanh form is stable on both tails
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def project_l1_ball(v, radius):
    """Euclidean projection onto the l1 ball of the given radius (exact, sort-based)."""
    if radius < 0:
        raise ValueError("l1 ball radius must be >= 0")
    v = np.asarray(v, dtype=float)
    if radius == 0.0:
        return np.zeros_like(v)
    mag = np.abs(v)
    if mag.sum() <= radius:
        return v.copy()
    mu = np.sort(mag)[::-1]
    cum = np.cumsum(mu)
    idx = np.arange(1, v.size + 1)
    cond = mu * idx > cum - radius
    # a radius below the ulp of the top magnitude can empty the selector
    rho = int(idx[cond][-1]) if np.any(cond) else 1
    tau = (cum[rho - 1] - radius) / rho
    return np.sign(v) * np.maximum(mag - tau, 0.0)


@dataclass
class _FitResult:
    beta: np.ndarray
    n_iter: int
    converged: bool
    objective: float
    objective_path: np.ndarray


def _fit_logistic(theta, labels, mode, lam, u, tol, max_iter, track_objective=False):
    """Proximal / projected gradient descent with backtracking, started at zero."""
    k, d = theta.shape
    beta = np.zeros(d)
    margins = np.zeros(k)

    def smooth_loss(m):
        return float(np.mean(np.logaddexp(0.0, -m)))

    def penalty(b):
        return lam * float(np.sum(np.abs(b))) if mode == "lagrangian" else 0.0

    loss = smooth_loss(margins)
    objective = loss + penalty(beta)
    path = [] if track_objective else None
    step = 1.0
    n_iter = 0
    converged = False
    stalled = 0
    for n_iter in range(1, max_iter + 1):
        grad = -(theta.T @ (labels * _sigmoid(-margins))) / k
        while True:
            cand = beta - step * grad
            if mode == "lagrangian":
                cand = soft_threshold(cand, step * lam)
            else:
                cand = project_l1_ball(cand, u)
            diff = cand - beta
            margins_cand = labels * (theta @ cand)
            loss_cand = smooth_loss(margins_cand)
            # quadratic upper-bound test guarantees monotone total objective
            if loss_cand <= loss + grad @ diff + diff @ diff / (2.0 * step) + 1e-15:
                break
            step *= 0.5
            if step < 1e-18:
                break
        objective_cand = loss_cand + penalty(cand)
        if path is not None:
            path.append(objective_cand)
        max_delta = float(np.max(np.abs(diff))) if diff.size else 0.0
        # progress at the floating-point floor counts as convergence
        stalled = stalled + 1 if objective - objective_cand <= 1e-14 * max(1.0, abs(objective)) else 0
        beta, margins, loss, objective = cand, margins_cand, loss_cand, objective_cand
        if max_delta < tol or stalled >= 20:
            converged = True
            break
        step = min(step * 2.0, 1e6)
    return _FitResult(
        beta=beta,
        n_iter=n_iter,
        converged=converged,
        objective=objective,
        objective_path=np.asarray(path) if path is not None else None,
    )


class AngularLogisticLasso(AngularPipelineMixin, ClassifierMixin, BaseEstimator):
    """l1-regularized logistic classification on the angles of extremes.

    Parameters
    ----------
    mode : {'lagrangian', 'constrained'}
        'lagrangian' minimizes ``k^-1 sum log(1+exp(-y <beta, theta>)) +
        lam ||beta||_1``; 'constrained' minimizes the same loss subject to
        ``||beta||_1 <= u`` by projected gradient.
    lam, u : float
        Penalty weight / constraint radius for the respective mode.
    k, norm_p, standardization, margins, tau :
        Tail pipeline, as in the regression estimators. The off-axis level
        tau is applied to the training extremes; apply
        :func:`tailml.tail.filter_off_axes` to evaluation samples for a
        symmetric restriction.
    """

    def __init__(
        self,
        mode="lagrangian",
        lam=0.0,
        u=1.0,
        k=None,
        norm_p=2.0,
        standardization="none",
        margins=None,
        tau=0.0,
        tol=1e-8,
        max_iter=50_000,
    ):
        self.mode = mode
        self.lam = lam
        self.u = u
        self.k = k
        self.norm_p = norm_p
        self.standardization = standardization
        self.margins = margins
        self.tau = tau
        self.tol = tol
        self.max_iter = max_iter

    def fit_tail(self, sample, track_objective=False):
        labels = check_labels(sample.require_targets())
        if self.mode not in ("lagrangian", "constrained"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "lagrangian" and self.lam < 0:
            raise ValueError("lam must be >= 0")
        if self.mode == "constrained" and self.u < 0:
            raise ValueError("u must be >= 0")
        self.single_class_ = bool(np.unique(labels).size < 2)
        if self.single_class_:
            import warnings

            warnings.warn("training tail contains a single class", UserWarning, stacklevel=2)
        res = _fit_logistic(
            sample.angles,
            labels.astype(float),
            self.mode,
            float(self.lam),
            float(self.u),
            float(self.tol),
            int(self.max_iter),
            track_objective=track_objective,
        )
        self.coef_ = res.beta
        self.n_iter_ = res.n_iter
        self.converged_ = res.converged
        self.objective_ = res.objective
        self.objective_path_ = res.objective_path
        self.classes_ = np.array([-1, 1])
        self.sample_ = sample
        return self

    def decision_function(self, X):
        return self._angles(X) @ self.coef_

    def predict(self, X):
        return np.where(self.decision_function(X) >= 0.0, 1, -1)


def fit_logistic_lasso(sample, mode="lagrangian", lam=0.0, u=1.0, tol=1e-8, max_iter=50_000,
                       track_objective=False):
    """Fit :class:`AngularLogisticLasso` directly on an existing tail sample."""
    model = AngularLogisticLasso(
        mode=mode,
        lam=lam,
        u=u,
        norm_p=sample.norm_p,
        standardization=sample.standardization,
        tol=tol,
        max_iter=max_iter,
    )
    return model.fit_tail(sample, track_objective=track_objective)


def classify(model, x):
    """Label a single point: sign(<beta, theta(x)>) with sign(0) = +1."""
    x = np.asarray(x, dtype=float).ravel()
    _, theta = polar(x, getattr(model, "norm_p", 2.0))
    return 1 if float(coef_of(model) @ theta) >= 0.0 else -1


def empirical_tail_risk_01(model, sample):
    """Misclassified fraction among the extremes of a labelled tail sample."""
    labels = check_labels(sample.require_targets())
    check_pipeline_match(model, sample)
    scores = sample.angles @ coef_of(model)
    pred = np.where(scores >= 0.0, 1, -1)
    return float(np.mean(pred != labels))


def save_classifier(model, path):
    """Persist a fitted angular classifier to the versioned flat-file format."""
    header = {
        "d": int(model.coef_.shape[0]),
        "k": int(model.sample_.k),
        "norm_p": float(model.norm_p),
        "standardization": model.standardization,
        "mode": model.mode,
        "lam": float(model.lam),
        "u": float(model.u),
        "converged": bool(model.converged_),
        "n_iter": int(model.n_iter_),
        "objective": float(model.objective_),
    }
    write_model_file(path, "angular-logistic", header, {"coefficients": (["index", "value"], [
        [j, float(v)] for j, v in enumerate(model.coef_)
    ])})


def load_classifier(path):
    """Load a classifier written by :func:`save_classifier`."""
    kind, header, tables = read_model_file(path)
    if kind != "angular-logistic":
        raise ValueError(f"file holds a {kind!r} model, not a classifier")
    beta = np.zeros(int(header["d"]))
    for idx, val in tables["coefficients"]:
        beta[int(idx)] = val
    model = AngularLogisticLasso(
        mode=header["mode"],
        lam=header["lam"],
        u=header["u"],
        norm_p=header["norm_p"],
        standardization=header["standardization"],
    )
    model.coef_ = beta
    model.converged_ = bool(header["converged"])
    model.n_iter_ = int(header["n_iter"])
    model.objective_ = float(header["objective"])
    model.classes_ = np.array([-1, 1])
    return model
