"""Shared plumbing for estimators operating on the angles of extremes."""

import numpy as np

from ._validation import check_matrix
from .geometry import polar
from .tail import _standardize_rows, filter_off_axes, select_extremes
from .transforms import EmpiricalParetoTransform


class AngularPipelineMixin:
    """Standardize -> select extremes -> work on angles.

    Estimators using this mixin expose ``k``, ``norm_p``, ``standardization``,
    ``margins`` and ``tau`` constructor parameters and implement
    ``fit_tail(sample)``.
    """

    def _build_sample(self, X, y=None):
        X = check_matrix(X, "X")
        margins = self.margins
        if self.standardization == "rank":
            margins = EmpiricalParetoTransform().fit(X)
        self.margins_ = margins
        k = X.shape[0] if self.k is None else self.k
        sample = select_extremes(
            X, k, p=self.norm_p, standardization=self.standardization, y=y, margins=margins
        )
        if self.tau > 0.0:
            sample = filter_off_axes(sample, self.tau)
        return sample

    def _angles(self, X):
        """Map raw inputs through the fitted pipeline to unit angles."""
        X = check_matrix(X, "X")
        V = _standardize_rows(X, self.standardization, getattr(self, "margins_", self.margins))
        _, theta = polar(V, self.norm_p)
        return theta

    def fit(self, X, y=None):
        return self.fit_tail(self._build_sample(X, y))


def check_pipeline_match(model, sample):
    """Refuse to evaluate a model on a tail sample from a different pipeline."""
    mp = getattr(model, "norm_p", None)
    ms = getattr(model, "standardization", None)
    if mp is not None and float(mp) != float(sample.norm_p):
        raise ValueError(f"model norm p={mp} does not match sample norm p={sample.norm_p}")
    if ms is not None and ms != sample.standardization:
        raise ValueError(
            f"model standardization {ms!r} does not match sample {sample.standardization!r}"
        )


def coef_of(model_or_beta):
    """Accept either a fitted estimator with ``coef_`` or a bare vector."""
    beta = getattr(model_or_beta, "coef_", model_or_beta)
    return np.asarray(beta, dtype=float).ravel()
