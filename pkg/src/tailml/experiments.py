"""Seeded batch experiments comparing XLasso with unpenalized angular regression.

Both experiments share the recipe: keep the k = floor(tau * n_train) largest
training covariates, fit XLasso (penalty selected by tail cross-validation
over a log-spaced grid) and least squares on the angles, then score both by
mean squared error on the extremes of an independent test set.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._validation import check_in_range, check_matrix, check_positive_int
from .crossval import XLassoRule, grid_select, make_folds
from .geometry import lp_norm
from .regression import fit_ols_angles, fit_xlasso, lambda_max, tail_mse
from .simulate import AdditiveModelSpec, gen_additive_regression, substream
from .tail import select_extremes
from .transforms import rescale_target

__all__ = [
    "SimulatedExperimentConfig",
    "PortfolioExperimentConfig",
    "run_simulated_xlasso_experiment",
    "run_portfolio_experiment",
    "target_support_diagnostic",
    "summarize_rows",
]


@dataclass(frozen=True)
class SimulatedExperimentConfig:
    """Additive-model benchmark; defaults reproduce the full-scale setup
    (n=10000, d=100, sparse unit signal plus vanishing dense term)."""

    n: int = 10_000
    d: int = 100
    a: float = 0.5
    beta0_ones: int = 5
    beta1_value: float = 1.0
    noise_lo: float = -2.0
    noise_hi: float = 2.0
    taus: tuple = (0.011, 0.02, 0.035, 0.05)
    n_reps: int = 20
    n_test: int = 1_000_000
    tau_test: float = 0.01
    lambda_grid_size: int = 50
    lambda_min_ratio: float = 1e-3
    cv_folds: int = 5

    def model_spec(self):
        beta0 = np.zeros(self.d)
        beta0[: self.beta0_ones] = 1.0
        beta1 = np.full(self.d, self.beta1_value)
        return AdditiveModelSpec(
            d=self.d, a=self.a, beta0=beta0, beta1=beta1,
            noise_lo=self.noise_lo, noise_hi=self.noise_hi,
        )


def _lambda_grid(lam_max, size, min_ratio):
    if lam_max <= 0.0:
        return np.array([0.0])
    return np.geomspace(lam_max, lam_max * min_ratio, size)


def _fit_pair_with_cv(X_train, y_train, tau, fold_seed, grid_size, min_ratio, cv_folds):
    """Fit (cv-selected XLasso, angular OLS) on the tau-tail of the training set."""
    n = X_train.shape[0]
    k = int(np.floor(tau * n))
    sample = select_extremes(X_train, k, p=2.0, standardization="none", y=y_train)
    grid = _lambda_grid(lambda_max(sample), grid_size, min_ratio)
    plan = make_folds(n, "kfold", cv_folds, seed=fold_seed)
    sel = grid_select(XLassoRule(), X_train, y_train, plan, tau, grid)
    xlasso = fit_xlasso(sample, sel.best)
    ols = fit_ols_angles(sample)
    return xlasso, ols, sel.best


def _parallel(fn, items, threads):
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def run_simulated_xlasso_experiment(config, seed, threads=1):
    """Run the simulated benchmark; returns per-replication rows
    ``(tau, method, rep, mse)`` plus summary rows per (tau, method)."""
    spec = config.model_spec()
    check_in_range(config.tau_test, 0.0, 1.0, "tau_test", lo_open=True)
    k_test = int(np.floor(config.tau_test * config.n_test))
    check_positive_int(k_test, "test tail size")

    def one_rep(rep):
        rng = substream(seed, rep)
        X, y = gen_additive_regression(config.n, spec, rng)
        X_test, y_test = gen_additive_regression(config.n_test, spec, rng)
        test_tail = select_extremes(X_test, k_test, p=2.0, standardization="none", y=y_test)
        out = []
        for tau in config.taus:
            fold_seed = int(rng.integers(2**63))
            xlasso, ols, _ = _fit_pair_with_cv(
                X, y, tau, fold_seed, config.lambda_grid_size,
                config.lambda_min_ratio, config.cv_folds,
            )
            out.append((tau, "xlasso", rep, tail_mse(xlasso, test_tail)))
            out.append((tau, "ols", rep, tail_mse(ols, test_tail)))
        return out

    rows = [row for chunk in _parallel(one_rep, range(config.n_reps), threads) for row in chunk]
    return rows, summarize_rows(rows)


def summarize_rows(rows):
    """Aggregate (tau, method, rep, mse) rows into (tau, method, mean, q10, q90)."""
    groups = {}
    for tau, method, _, mse in rows:
        groups.setdefault((tau, method), []).append(mse)
    summary = []
    for (tau, method), values in sorted(groups.items()):
        values = np.asarray(values)
        summary.append((
            tau, method, float(np.mean(values)),
            float(np.quantile(values, 0.1)), float(np.quantile(values, 0.9)),
        ))
    return summary


@dataclass(frozen=True)
class PortfolioExperimentConfig:
    """Rescaled-target prediction benchmark on a wide returns panel."""

    taus: tuple = (0.05, 0.1, 0.2, 0.3, 0.4, 0.5)
    n_reps: int = 50
    train_fraction: float = 0.2
    tau_test: float = 0.005
    lambda_grid_size: int = 50
    lambda_min_ratio: float = 1e-3
    cv_folds: int = 5


def target_support_diagnostic(X, z):
    """Range of the rescaled target over the k largest-norm rows, for every k.

    Returns rows ``(k, min, max)``; the running extremes widen monotonically
    as the threshold decreases.
    """
    X = check_matrix(X, "X")
    y = rescale_target(X, z, 2.0)
    order = np.argsort(-lp_norm(X, 2.0), kind="stable")
    y_sorted = y[order]
    return [
        (k + 1, float(lo), float(hi))
        for k, (lo, hi) in enumerate(zip(np.minimum.accumulate(y_sorted),
                                         np.maximum.accumulate(y_sorted)))
    ]


def run_portfolio_experiment(X, z, config, seed, threads=1):
    """Random train/test splits of a (covariates, target) panel.

    The target is rescaled to ``y = z / max(||x||_2, 1)``; for each split and
    each tau the pair (cv-XLasso, angular OLS) is fitted on the training tail
    and scored on the test tail at level tau_test. Returns per-replication
    rows, summary rows and the full-sample support diagnostic.
    """
    X = check_matrix(X, "X")
    n = X.shape[0]
    y = rescale_target(X, z, 2.0)
    n_train = int(np.floor(config.train_fraction * n))
    check_positive_int(n_train, "training split size")
    k_test = int(np.floor(config.tau_test * (n - n_train)))
    if k_test < 1:
        raise ValueError(
            f"tau_test={config.tau_test} leaves no extreme test observations "
            f"(test split size {n - n_train})"
        )

    def one_rep(rep):
        rng = substream(seed, rep)
        perm = rng.permutation(n)
        train_idx, test_idx = perm[:n_train], perm[n_train:]
        test_tail = select_extremes(
            X[test_idx], k_test, p=2.0, standardization="none", y=y[test_idx]
        )
        out = []
        for tau in config.taus:
            fold_seed = int(rng.integers(2**63))
            xlasso, ols, _ = _fit_pair_with_cv(
                X[train_idx], y[train_idx], tau, fold_seed,
                config.lambda_grid_size, config.lambda_min_ratio, config.cv_folds,
            )
            out.append((tau, "xlasso", rep, tail_mse(xlasso, test_tail)))
            out.append((tau, "ols", rep, tail_mse(ols, test_tail)))
        return out

    rows = [row for chunk in _parallel(one_rep, range(config.n_reps), threads) for row in chunk]
    return rows, summarize_rows(rows), target_support_diagnostic(X, z)
