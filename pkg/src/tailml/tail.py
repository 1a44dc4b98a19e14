"""Extreme-subsample extraction and empirical tail / angular measures.

The central object is :class:`TailSample`: the ``k`` observations with the
largest lp norm after an optional marginal standardization, stored in polar
form (angles + non-increasing radii) together with their provenance and the
radial threshold (the k-th largest norm).
"""

from dataclasses import dataclass, field

import numpy as np

from ._validation import check_matrix, check_norm_p, check_positive_int
from .geometry import angle_min, lp_norm, polar
from .transforms import EmpiricalParetoTransform, pareto_standardize

__all__ = [
    "STANDARDIZATIONS",
    "TailSample",
    "select_extremes",
    "filter_off_axes",
    "tail_empirical_measure",
    "empirical_angular_measure",
]

STANDARDIZATIONS = ("none", "known-pareto", "rank")


@dataclass(frozen=True)
class TailSample:
    """The k largest-norm observations of a dataset, in polar form.

    ``radii`` are non-increasing; on construction ``radii[k-1] == threshold``
    (an off-axis filter may later drop rows while keeping the original radial
    threshold). ``targets`` optionally carries real responses or +/-1 labels
    aligned with the retained rows.
    """

    k: int
    threshold: float
    angles: np.ndarray
    radii: np.ndarray
    source_indices: np.ndarray
    norm_p: float
    standardization: str = "none"
    targets: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if self.angles.shape[0] != self.k or self.radii.shape[0] != self.k:
            raise ValueError("TailSample arrays do not match k")
        if np.any(np.diff(self.radii) > 0):
            raise ValueError("TailSample radii must be non-increasing")
        if self.standardization not in STANDARDIZATIONS:
            raise ValueError(f"unknown standardization tag {self.standardization!r}")
        if self.targets is not None and self.targets.shape[0] != self.k:
            raise ValueError("TailSample targets do not match k")
        for arr in (self.angles, self.radii, self.source_indices):
            arr.setflags(write=False)
        if self.targets is not None:
            self.targets.setflags(write=False)

    @property
    def d(self):
        return self.angles.shape[1]

    def require_targets(self):
        if self.targets is None:
            raise ValueError("this operation requires a TailSample with targets")
        return self.targets


def _standardize_rows(X, standardization, margins):
    if standardization == "none":
        return X
    if standardization == "rank":
        # a pre-fitted transform may be passed to reuse training margins
        if isinstance(margins, EmpiricalParetoTransform):
            return margins.transform(X)
        return EmpiricalParetoTransform().fit(X).transform(X)
    if standardization == "known-pareto":
        if margins is None:
            raise ValueError("standardization 'known-pareto' requires marginal CDFs")
        return pareto_standardize(margins, X)
    raise ValueError(f"unknown standardization tag {standardization!r}")


def select_extremes(X, k, p=2.0, standardization="none", y=None, margins=None):
    """Extract the k rows of largest lp norm as a :class:`TailSample`.

    Rows are standardized first (``standardization`` in {'none', 'rank',
    'known-pareto'}), then ranked by norm. Ties are broken in favour of the
    smaller original row index. The threshold is the k-th largest norm.
    """
    X = check_matrix(X, "X")
    n = X.shape[0]
    k = check_positive_int(k, "k")
    if k > n:
        raise ValueError(f"k={k} exceeds the number of observations n={n}")
    p = check_norm_p(p)

    V = _standardize_rows(X, standardization, margins)
    norms = lp_norm(V, p)
    # stable sort on -norms: equal norms keep ascending original index
    order = np.argsort(-norms, kind="stable")[:k]
    radii, angles = polar(V[order], p)
    targets = None
    if y is not None:
        y = np.asarray(y)
        if y.shape[0] != n:
            raise ValueError(f"y has length {y.shape[0]}, expected {n}")
        targets = np.asarray(y[order], dtype=float)
    return TailSample(
        k=k,
        threshold=float(radii[-1]),
        angles=angles,
        radii=radii,
        source_indices=order.astype(np.int64),
        norm_p=p,
        standardization=standardization,
        targets=targets,
    )


def filter_off_axes(sample, tau):
    """Drop extreme points whose angle has a component below tau.

    The radial threshold is a property of the norm order statistics and is
    left unchanged. Raises if no point survives.
    """
    if not 0.0 <= tau < 1.0:
        raise ValueError(f"tau must lie in [0, 1), got {tau}")
    keep = angle_min(sample.angles) >= tau
    n_keep = int(np.count_nonzero(keep))
    if n_keep == 0:
        raise ValueError(
            f"off-axis filter tau={tau} removed all {sample.k} extreme points "
            f"(largest minimum angle component: {float(np.max(angle_min(sample.angles))):.6g})"
        )
    return TailSample(
        k=n_keep,
        threshold=sample.threshold,
        angles=sample.angles[keep].copy(),
        radii=sample.radii[keep].copy(),
        source_indices=sample.source_indices[keep].copy(),
        norm_p=sample.norm_p,
        standardization=sample.standardization,
        targets=None if sample.targets is None else sample.targets[keep].copy(),
    )


def tail_empirical_measure(sample, region):
    """Fraction of the retained extremes falling in a region.

    ``region(angles, radii)`` must return a boolean mask over the sample rows.
    """
    if sample.k == 0:
        raise ValueError("tail_empirical_measure needs a non-empty sample")
    mask = np.asarray(region(sample.angles, sample.radii), dtype=bool)
    if mask.shape[0] != sample.k:
        raise ValueError("region predicate returned a mask of wrong length")
    return float(np.count_nonzero(mask)) / sample.k


def empirical_angular_measure(X, k, angular_set, p=2.0):
    """Empirical angular measure of an angular set A.

    Rank-transforms all rows to ``V_hat``, then counts points with
    ``||V_hat||_p >= n/k`` whose angle lies in A, divided by k. The radial
    cut uses the deterministic level n/k (closed inequality), matching the
    truncated cone ``{r(x) >= 1, theta(x) in A}`` scaled by n/k.

    ``angular_set(angles)`` must return a boolean mask.
    """
    X = check_matrix(X, "X")
    n = X.shape[0]
    k = check_positive_int(k, "k")
    if k > n:
        raise ValueError(f"k={k} exceeds the number of observations n={n}")
    p = check_norm_p(p)
    V = EmpiricalParetoTransform().fit(X).transform(X)
    radii, angles = polar(V, p)
    above = radii >= n / k
    if not np.any(above):
        return 0.0
    in_set = np.asarray(angular_set(angles[above]), dtype=bool)
    return float(np.count_nonzero(in_set)) / k
