"""Tail-aware cross-validation.

Folds are built on the full sample; within each fold the training and
validation *extremes* are re-extracted with their own empirical thresholds
(the within-subset (1-p)-quantile of the norms), so every sub-sample uses an
honest threshold. The cross-validated tail risk averages the hold-out tail
risks over folds.

A learning rule is any object with

    fit_tail(sample, hyper)   -> fitted predictor
    risk_tail(predictor, sample) -> float

operating on :class:`~tailml.tail.TailSample` objects.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_matrix, check_positive_int
from .regression import fit_ols_angles, fit_xlasso, tail_mse
from .classification import empirical_tail_risk_01, fit_logistic_lasso, logistic_loss
from .tail import filter_off_axes, select_extremes

__all__ = [
    "CvPlan",
    "make_folds",
    "cv_tail_risk",
    "grid_select",
    "GridSelectResult",
    "XLassoRule",
    "OlsAngleRule",
    "ConstrainedLogisticRule",
]


@dataclass(frozen=True)
class CvPlan:
    """Validation index sets V_1..V_K over {0..n-1}."""

    n: int
    folds: tuple
    scheme: str

    def __post_init__(self):
        seen = np.concatenate(self.folds)
        if seen.size != np.unique(seen).size:
            raise ValueError("validation folds must be pairwise disjoint")
        if any(f.size == 0 for f in self.folds):
            raise ValueError("validation folds must be non-empty")

    @property
    def n_folds(self):
        return len(self.folds)

    def train_indices(self, j):
        mask = np.ones(self.n, dtype=bool)
        mask[self.folds[j]] = False
        return np.flatnonzero(mask)


def make_folds(n, scheme="kfold", n_folds=5, seed=0):
    """Balanced seeded folds: uniform shuffle, then a contiguous split.

    ``scheme`` is 'kfold' (sizes differ by at most one) or 'loo'
    (leave-one-out).
    """
    n = check_positive_int(n, "n")
    if scheme == "loo":
        if n < 2:
            raise ValueError("leave-one-out needs n >= 2")
        n_folds = n
    elif scheme == "kfold":
        n_folds = check_positive_int(n_folds, "n_folds", minimum=2)
        if n_folds > n:
            raise ValueError(f"K={n_folds} folds exceed n={n} observations")
    else:
        raise ValueError(f"unknown CV scheme {scheme!r}")
    perm = np.random.default_rng(seed).permutation(n)
    folds = tuple(np.sort(part) for part in np.array_split(perm, n_folds))
    return CvPlan(n=n, folds=folds, scheme=scheme)


def _tail_of(X, y, idx, p, fold, role, norm_p, standardization, margins, tau):
    n_sub = idx.size
    k = int(np.floor(p * n_sub))
    if k < 1:
        raise ValueError(
            f"fold {fold}: {role} subset of size {n_sub} has no extreme "
            f"observations at tail fraction p={p}"
        )
    sample = select_extremes(
        X[idx], k, p=norm_p, standardization=standardization,
        y=None if y is None else y[idx], margins=margins,
    )
    if tau > 0.0:
        sample = filter_off_axes(sample, tau)
    return sample


def _fold_tails(X, y, plan, p, norm_p, standardization, margins, tau):
    X = check_matrix(X, "X")
    if plan.n != X.shape[0]:
        raise ValueError(f"plan was built for n={plan.n}, data has {X.shape[0]} rows")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"tail fraction p must lie in (0, 1], got {p}")
    pairs = []
    for j in range(plan.n_folds):
        train = _tail_of(X, y, plan.train_indices(j), p, j, "training",
                         norm_p, standardization, margins, tau)
        val = _tail_of(X, y, plan.folds[j], p, j, "validation",
                       norm_p, standardization, margins, tau)
        pairs.append((train, val))
    return pairs


def cv_tail_risk(rule, X, y, plan, p, hyper, norm_p=2.0, standardization="none",
                 margins=None, tau=0.0, return_fold_risks=False):
    """Cross-validated tail risk of a learning rule at one hyperparameter.

    For each fold, the rule is trained on the training subset's extremes and
    its tail risk evaluated on the validation subset's extremes (both with
    within-subset thresholds); the K hold-out risks are averaged.
    """
    pairs = _fold_tails(X, y, plan, p, norm_p, standardization, margins, tau)
    risks = np.array([rule.risk_tail(rule.fit_tail(tr, hyper), va) for tr, va in pairs])
    value = float(np.mean(risks))
    return (value, risks) if return_fold_risks else value


@dataclass(frozen=True)
class GridSelectResult:
    best: float
    table: tuple  # rows (hyper, rcv, fold risks tuple)

    def as_rows(self):
        return [(h, r, *f) for h, r, f in self.table]


def grid_select(rule, X, y, plan, p, grid, norm_p=2.0, standardization="none",
                margins=None, tau=0.0):
    """Evaluate the CV tail risk over a hyperparameter grid and pick the minimizer.

    Duplicate grid values are collapsed; ties are resolved toward the
    smallest hyperparameter. Fold tail samples are extracted once and shared
    across the grid.
    """
    grid = np.unique(np.asarray(grid, dtype=float))
    if grid.size == 0:
        raise ValueError("hyperparameter grid is empty")
    pairs = _fold_tails(X, y, plan, p, norm_p, standardization, margins, tau)
    table = []
    for hyper in grid:
        risks = np.array([rule.risk_tail(rule.fit_tail(tr, hyper), va) for tr, va in pairs])
        table.append((float(hyper), float(np.mean(risks)), tuple(float(r) for r in risks)))
    best = min(table, key=lambda row: (row[1], row[0]))[0]
    return GridSelectResult(best=best, table=tuple(table))


class XLassoRule:
    """Squared-loss rule: XLasso fit, hyperparameter = penalty weight."""

    def __init__(self, tol=1e-8, max_sweeps=100_000):
        self.tol = tol
        self.max_sweeps = max_sweeps

    def fit_tail(self, sample, hyper):
        return fit_xlasso(sample, hyper, tol=self.tol, max_sweeps=self.max_sweeps)

    def risk_tail(self, predictor, sample):
        return tail_mse(predictor, sample)


class OlsAngleRule:
    """Squared-loss rule: unpenalized least squares on angles (no hyperparameter)."""

    def fit_tail(self, sample, hyper=None):
        return fit_ols_angles(sample)

    def risk_tail(self, predictor, sample):
        return tail_mse(predictor, sample)


class ConstrainedLogisticRule:
    """Classification rule: l1-constrained logistic fit, hyperparameter = radius u.

    The hold-out risk is the tail 0-1 risk by default; set
    ``risk='logistic'`` to average the surrogate loss instead.
    """

    def __init__(self, risk="zero-one", tol=1e-7, max_iter=20_000):
        if risk not in ("zero-one", "logistic"):
            raise ValueError(f"unknown risk {risk!r}")
        self.risk = risk
        self.tol = tol
        self.max_iter = max_iter

    def fit_tail(self, sample, hyper):
        return fit_logistic_lasso(
            sample, mode="constrained", u=hyper, tol=self.tol, max_iter=self.max_iter
        )

    def risk_tail(self, predictor, sample):
        if self.risk == "zero-one":
            return empirical_tail_risk_01(predictor, sample)
        labels = sample.require_targets()
        margins = labels * (sample.angles @ predictor.coef_)
        return float(np.mean(logistic_loss(margins)))
