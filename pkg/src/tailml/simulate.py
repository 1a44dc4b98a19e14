"""Seeded generators for heavy-tailed regression and classification data.

All generators take a ``numpy.random.Generator``. :func:`substream` builds
independent, reproducible streams per (seed, replication index) so that
concurrent replications never share state.
"""

from dataclasses import dataclass, field

import numpy as np

from ._validation import check_norm_p, check_positive_int
from .geometry import lp_norm

__all__ = [
    "substream",
    "positive_stable",
    "mv_logistic",
    "truncated_gaussian",
    "AdditiveModelSpec",
    "gen_additive_regression",
    "gen_classification_rv",
]


def substream(seed, index=0):
    """Deterministic random generator for replication ``index`` of ``seed``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def positive_stable(a, rng, size=None):
    """Positive a-stable draw(s) with Laplace transform exp(-t**a).

    Uses the Kanter construction from a uniform U on (0, pi) and a unit
    exponential W:

        S = (sin((1-a) U) / W) ** ((1-a)/a) * sin(a U) / sin(U) ** (1/a)

    ``a = 1`` is the degenerate case S = 1.
    """
    if not 0.0 < a <= 1.0:
        raise ValueError(f"stability index a must lie in (0, 1], got {a}")
    if a == 1.0:
        return 1.0 if size is None else np.ones(size)
    u = rng.uniform(0.0, np.pi, size=size)
    w = rng.standard_exponential(size=size)
    s = (np.sin((1.0 - a) * u) / w) ** ((1.0 - a) / a) * np.sin(a * u) / np.sin(u) ** (1.0 / a)
    return float(s) if size is None else s


def mv_logistic(n, d, a, rng):
    """Sample from the multivariate symmetric logistic distribution.

    Per row: ``S = positive_stable(a)``, ``W_j`` i.i.d. unit exponential and
    ``X_j = (S / W_j) ** a``. The joint CDF is ``exp(-(sum x_j**(-1/a))**a)``
    with unit-Frechet margins; ``a = 1`` gives independent components and
    small ``a`` strong tail dependence.
    """
    n = check_positive_int(n, "n")
    d = check_positive_int(d, "d")
    if a == 1.0:
        s = np.ones((n, 1))
    else:
        s = positive_stable(a, rng, size=n)[:, None]
    w = rng.standard_exponential(size=(n, d))
    return (s / w) ** a


def truncated_gaussian(lo, hi, rng, size=None):
    """Standard normal conditioned on [lo, hi], sampled by rejection."""
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if size is None:
        while True:
            z = rng.standard_normal()
            if lo <= z <= hi:
                return float(z)
    out = np.empty(int(np.prod(size)))
    filled = 0
    while filled < out.size:
        z = rng.standard_normal(size=out.size - filled)
        z = z[(z >= lo) & (z <= hi)]
        out[filled : filled + z.size] = z
        filled += z.size
    return out.reshape(size)


@dataclass(frozen=True)
class AdditiveModelSpec:
    """Additive-noise tail regression model on logistic covariates.

    ``Y = <theta(X), beta0> + <theta(X), beta1> / log(1 + ||X||_2) + eps``
    with ``X`` multivariate symmetric logistic (dependence ``a``), angles
    taken w.r.t. the Euclidean norm, and ``eps`` a truncated standard
    Gaussian on [noise_lo, noise_hi]. The second term vanishes at infinity,
    so the model is linear in the angle at asymptotic levels with envelope
    ``||beta1||_1 / log(1 + t)`` above radius t.
    """

    d: int
    a: float = 0.5
    beta0: np.ndarray = field(default=None)
    beta1: np.ndarray = field(default=None)
    noise_lo: float = -2.0
    noise_hi: float = 2.0

    def __post_init__(self):
        check_positive_int(self.d, "d")
        if not 0.0 < self.a <= 1.0:
            raise ValueError(f"dependence a must lie in (0, 1], got {self.a}")
        if not self.noise_lo < self.noise_hi:
            raise ValueError("need noise_lo < noise_hi")
        beta0 = np.zeros(self.d) if self.beta0 is None else np.asarray(self.beta0, dtype=float)
        beta1 = np.zeros(self.d) if self.beta1 is None else np.asarray(self.beta1, dtype=float)
        if beta0.shape != (self.d,) or beta1.shape != (self.d,):
            raise ValueError("beta0/beta1 must be d-vectors")
        object.__setattr__(self, "beta0", beta0)
        object.__setattr__(self, "beta1", beta1)

    def bias_envelope(self, t):
        """Upper bound on the vanishing term above radius t: ||beta1||_1 / log(1+t)."""
        return float(np.sum(np.abs(self.beta1))) / np.log1p(t)

    @property
    def noise_sup(self):
        """Supremum of the noise scale (half-width of the truncation interval)."""
        return max(abs(self.noise_lo), abs(self.noise_hi))


def gen_additive_regression(n, spec, rng, return_noise=False):
    """Sample (X, y) from an :class:`AdditiveModelSpec`."""
    n = check_positive_int(n, "n")
    X = mv_logistic(n, spec.d, spec.a, rng)
    r = lp_norm(X, 2.0)
    theta = X / r[:, None]
    eps = truncated_gaussian(spec.noise_lo, spec.noise_hi, rng, size=n)
    y = theta @ spec.beta0 + (theta @ spec.beta1) / np.log1p(r) + eps
    if return_noise:
        return X, y, eps
    return X, y


def gen_classification_rv(n, d, a, norm_p, rng):
    """Binary labels marking a hidden component that is large among extremes.

    Draws ``Z`` logistic in d+1 dimensions, keeps ``X`` = first d columns and
    labels ``Y = +1`` when ``Z_{d+1} / ||Z||_p > c`` with
    ``c = (1/(d+1))**(1/p)``, i.e. when the hidden component's p-th power is
    at least the average across all d+1 components.
    """
    n = check_positive_int(n, "n")
    d = check_positive_int(d, "d")
    p = check_norm_p(norm_p)
    if np.isinf(p):
        raise ValueError("gen_classification_rv requires a finite norm exponent")
    Z = mv_logistic(n, d + 1, a, rng)
    c = (1.0 / (d + 1)) ** (1.0 / p)
    labels = np.where(Z[:, d] / lp_norm(Z, p) > c, 1, -1)
    return Z[:, :d], labels
