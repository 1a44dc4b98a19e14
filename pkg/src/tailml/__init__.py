"""Statistical learning on multivariate extremes.

Marginal standardization, empirical angular measures, angular minimum-volume
set anomaly detection, regression/classification on the angles of large
covariates (including the l1-penalized XLasso), tail-aware cross-validation,
heavy-tailed data generators and evaluators for the finite-sample bounds that
back these procedures.
"""

from .anomaly import AngularGrid, AngularMinVolumeSet, MvSetModel, anomaly_score, fit_angular_mvset, mvset_mass_check
from .classification import (
    AngularLogisticLasso,
    classify,
    empirical_tail_risk_01,
    fit_logistic_lasso,
    logistic_loss,
    project_l1_ball,
)
from .crossval import CvPlan, cv_tail_risk, grid_select, make_folds
from .geometry import angle_min, lp_norm, polar
from .regression import (
    AngularLeastSquares,
    XLasso,
    check_prediction_lemma,
    fit_ols_angles,
    fit_xlasso,
    kkt_certificate,
    lambda_max,
    soft_threshold,
    tail_mse,
)
from .simulate import (
    AdditiveModelSpec,
    gen_additive_regression,
    gen_classification_rv,
    mv_logistic,
    positive_stable,
    substream,
    truncated_gaussian,
)
from .tail import TailSample, empirical_angular_measure, filter_off_axes, select_extremes, tail_empirical_measure
from .transforms import EmpiricalParetoTransform, descale_prediction, pareto_standardize, rescale_target

__version__ = "0.1.0"

__all__ = [
    "AdditiveModelSpec",
    "AngularGrid",
    "AngularLeastSquares",
    "AngularLogisticLasso",
    "AngularMinVolumeSet",
    "CvPlan",
    "EmpiricalParetoTransform",
    "MvSetModel",
    "TailSample",
    "XLasso",
    "angle_min",
    "anomaly_score",
    "check_prediction_lemma",
    "classify",
    "cv_tail_risk",
    "descale_prediction",
    "empirical_angular_measure",
    "empirical_tail_risk_01",
    "filter_off_axes",
    "fit_angular_mvset",
    "fit_logistic_lasso",
    "fit_ols_angles",
    "fit_xlasso",
    "gen_additive_regression",
    "gen_classification_rv",
    "grid_select",
    "kkt_certificate",
    "lambda_max",
    "logistic_loss",
    "lp_norm",
    "make_folds",
    "mv_logistic",
    "mvset_mass_check",
    "pareto_standardize",
    "polar",
    "positive_stable",
    "project_l1_ball",
    "rescale_target",
    "select_extremes",
    "soft_threshold",
    "substream",
    "tail_empirical_measure",
    "tail_mse",
    "truncated_gaussian",
]
