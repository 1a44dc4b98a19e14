"""Closed-form finite-sample bounds and their Monte-Carlo coverage validators.

Only bounds whose constants are fully explicit are evaluated:

* :func:`vc_tail_bound` -- uniform deviation of an empirical measure over a
  VC class supported on a region of probability p.
* :func:`b_term` -- noise part of the residual-correlation bound,
  ``M_eps * sqrt(log(4d/delta) / (2k))``.
* :func:`k_tilde` -- inflated extreme count controlling the deviation of the
  k-th order statistic's quantile level.
* :func:`residual_bound` -- ``b_term`` plus the vanishing-bias envelope.
* :func:`xlasso_prediction_bound` -- slow-rate in-sample prediction error
  bound ``24 C M_eps ||beta*||_1 sqrt(log(4d/delta)/(2k))``.

:func:`mc_validate` simulates the probabilistic statements behind these
bounds and reports empirical coverage against the nominal level, with a
three-sigma binomial slack so finite replication noise cannot flake a run.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_in_range, check_positive_int
from .geometry import lp_norm
from .regression import fit_xlasso
from .simulate import gen_additive_regression, mv_logistic, substream
from .tail import select_extremes

__all__ = [
    "vc_tail_bound",
    "b_term",
    "k_tilde",
    "residual_bound",
    "xlasso_prediction_bound",
    "CoverageReport",
    "mc_validate",
    "MC_STATEMENTS",
]


def vc_tail_bound(n, p, vc_dim, delta):
    """Uniform empirical-measure deviation over a VC class on a mass-p region.

    ``sqrt(2p/n) (sqrt(2 log(1/delta)) + sqrt(log 2 + V log(2np+1)) + sqrt(2)/2)
    + 2 log(1/delta) / (3n)``.
    """
    n = check_positive_int(n, "n")
    p = check_in_range(p, 0.0, 1.0, "p")
    vc_dim = check_positive_int(vc_dim, "vc_dim")
    delta = check_in_range(delta, 0.0, 1.0, "delta", lo_open=True)
    log_inv_delta = math.log(1.0 / delta)
    main = math.sqrt(2.0 * p / n) * (
        math.sqrt(2.0 * log_inv_delta)
        + math.sqrt(math.log(2.0) + vc_dim * math.log(2.0 * n * p + 1.0))
        + math.sqrt(2.0) / 2.0
    )
    return main + 2.0 / (3.0 * n) * log_inv_delta


def b_term(k, d, delta, m_eps):
    """Noise part of the residual bound: ``M_eps sqrt(log(4d/delta) / (2k))``."""
    k = check_positive_int(k, "k")
    d = check_positive_int(d, "d")
    if m_eps < 0:
        raise ValueError("m_eps must be >= 0")
    if 4.0 * d / delta <= 1.0:
        raise ValueError(f"log(4d/delta) must be positive, got 4d/delta = {4.0 * d / delta}")
    return m_eps * math.sqrt(math.log(4.0 * d / delta) / (2.0 * k))


def k_tilde(k, delta):
    """Inflated extreme count ``k (1 + sqrt(3 log(1/delta)/k) + 3 log(1/delta)/k)``."""
    k = check_positive_int(k, "k")
    delta = check_in_range(delta, 0.0, 1.0, "delta", lo_open=True)
    log_inv_delta = math.log(1.0 / delta)
    return k * (1.0 + math.sqrt(3.0 * log_inv_delta / k) + 3.0 * log_inv_delta / k)


def residual_bound(k, d, delta, m_eps, b_bar):
    """Bound on ``||W'e||_inf / k``: noise term plus the bias envelope ``b_bar``.

    The caller supplies ``b_bar`` evaluated at the population quantile
    ``t_{n, k_tilde(delta/2)}`` of the norm.
    """
    if b_bar < 0:
        raise ValueError("b_bar must be >= 0")
    return b_term(k, d, delta, m_eps) + b_bar


def xlasso_prediction_bound(k, d, delta, m_eps, beta_star_l1, c_factor=1.0):
    """Slow-rate prediction bound ``24 C ||beta*||_1 b_term(k, d, delta, m_eps)``."""
    if beta_star_l1 < 0:
        raise ValueError("beta_star_l1 must be >= 0")
    if c_factor < 1.0:
        raise ValueError("c_factor must be >= 1")
    return 24.0 * c_factor * beta_star_l1 * b_term(k, d, delta, m_eps)


MC_STATEMENTS = ("quantile-lemma", "residual-prop", "xlasso-theorem")


@dataclass(frozen=True)
class CoverageReport:
    """Empirical coverage of a probabilistic statement.

    ``passed`` compares the coverage against ``target = 1 - delta`` minus a
    three-sigma binomial allowance for the finite number of replications.
    """

    statement: str
    delta: float
    k: int
    n: int
    replications: int
    coverage: float
    target: float
    passed: bool
    details: dict = field(default_factory=dict)


def _norm_quantile_reference(model, level, seed, size):
    """Empirical ``level``-quantile of ||X||_2 under the covariate model."""
    rng = substream(seed, 982_451_653)
    norms = lp_norm(mv_logistic(size, model.d, model.a, rng), 2.0)
    return float(np.quantile(norms, level))


def _coverage_pass(coverage, delta, replications):
    target = 1.0 - delta
    slack = 3.0 * math.sqrt(delta * (1.0 - delta) / replications)
    return target, coverage >= target - slack


def mc_validate(statement, replications, seed, *, n, k, delta, model=None,
                ref_sample_size=400_000, solver_tol=1e-8, solver_max_sweeps=50_000):
    """Monte-Carlo coverage check of one of the probabilistic statements.

    statement:
        'quantile-lemma'  -- with unit-Pareto radii, the k-th largest of n
        draws exceeds the ``1 - k_tilde(delta)/n`` population quantile with
        probability at least 1 - delta.
        'residual-prop'   -- under an :class:`~tailml.simulate.AdditiveModelSpec`,
        ``||W'e||_inf / k <= b_term + b_bar(t)`` with probability at least
        1 - delta, where t is the ``1 - k_tilde(delta/2)/n`` quantile of the
        norm (estimated from a dedicated reference sample) and b_bar the
        model's analytic bias envelope.
        'xlasso-theorem'  -- with the penalty set to that same bound, the
        in-sample prediction error of the penalized fit is at most
        ``12 ||beta*||_1 lam`` with probability at least 1 - delta. The
        report's details include how often the small-tail-fraction
        precondition ``b_bar <= b_term`` held.
    """
    if statement not in MC_STATEMENTS:
        raise ValueError(f"unknown statement {statement!r}; expected one of {MC_STATEMENTS}")
    replications = check_positive_int(replications, "replications", minimum=100)
    n = check_positive_int(n, "n")
    k = check_positive_int(k, "k")
    delta = check_in_range(delta, 0.0, 1.0, "delta", lo_open=True, hi_open=True)
    details = {}

    if statement == "quantile-lemma":
        threshold = n / k_tilde(k, delta)  # unit-Pareto quantile at level 1 - k_tilde/n
        hits = 0
        for rep in range(replications):
            rng = substream(seed, rep)
            radii = 1.0 / (1.0 - rng.uniform(size=n))
            r_k = np.partition(radii, n - k)[n - k]
            hits += bool(r_k >= threshold)
        coverage = hits / replications
        details["threshold"] = threshold
    else:
        if model is None:
            raise ValueError(f"statement {statement!r} requires an AdditiveModelSpec")
        level = 1.0 - k_tilde(k, delta / 2.0) / n
        if level <= 0.0:
            raise ValueError("k_tilde(delta/2) exceeds n; pick a smaller k or larger n")
        t_ref = _norm_quantile_reference(model, level, seed, ref_sample_size)
        b_bar = model.bias_envelope(t_ref)
        noise = b_term(k, model.d, delta, model.noise_sup)
        bound = noise + b_bar
        details.update(t_ref=t_ref, b_bar=b_bar, b_term=noise, bound=bound,
                       precondition_b_bar_le_b_term=bool(b_bar <= noise))
        hits = 0
        for rep in range(replications):
            rng = substream(seed, rep)
            X, y = gen_additive_regression(n, model, rng)
            sample = select_extremes(X, k, p=2.0, standardization="none", y=y)
            e = sample.targets - sample.angles @ model.beta0
            if statement == "residual-prop":
                stat = float(np.max(np.abs(sample.angles.T @ e)) / k)
                hits += bool(stat <= bound)
            else:
                fit = fit_xlasso(sample, bound, tol=solver_tol, max_sweeps=solver_max_sweeps)
                diff = sample.angles @ (fit.coef_ - model.beta0)
                lhs = float(diff @ diff / k)
                rhs = 12.0 * float(np.sum(np.abs(model.beta0))) * bound
                hits += bool(lhs <= rhs)
        coverage = hits / replications

    target, passed = _coverage_pass(coverage, delta, replications)
    return CoverageReport(
        statement=statement,
        delta=delta,
        k=k,
        n=n,
        replications=replications,
        coverage=coverage,
        target=target,
        passed=passed,
        details=details,
    )
