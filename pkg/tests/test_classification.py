import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.base import clone

from tailml.classification import (
    AngularLogisticLasso,
    classify,
    empirical_tail_risk_01,
    fit_logistic_lasso,
    load_classifier,
    logistic_loss,
    project_l1_ball,
    save_classifier,
)
from tailml.simulate import gen_classification_rv, substream
from tailml.tail import TailSample


def make_tail(angles, labels, p=np.inf):
    angles = np.asarray(angles, dtype=float)
    k = angles.shape[0]
    return TailSample(
        k=k,
        threshold=1.0,
        angles=angles.copy(),
        radii=np.ones(k),
        source_indices=np.arange(k),
        norm_p=p,
        standardization="none",
        targets=np.asarray(labels, dtype=float).copy(),
    )


def separable_tail(n_pos=20, n_neg=20, eps=0.05):
    """Positive class near the first axis, negative near the second (max norm)."""
    pos = np.column_stack([np.ones(n_pos), np.full(n_pos, eps)])
    neg = np.column_stack([np.full(n_neg, eps), np.ones(n_neg)])
    angles = np.vstack([pos, neg])
    labels = np.concatenate([np.ones(n_pos), -np.ones(n_neg)])
    return make_tail(angles, labels)


class TestLogisticLoss:
    def test_symmetry_point(self):
        assert logistic_loss(0.0) == pytest.approx(np.log(2.0))

    def test_confident_correct_vanishes(self):
        assert logistic_loss(1e4) == pytest.approx(0.0, abs=1e-300)

    def test_stable_negative_branch(self):
        assert logistic_loss(-50.0) == pytest.approx(50.0, abs=1e-9)

    def test_vectorized(self):
        out = logistic_loss(np.array([0.0, -50.0]))
        assert out.shape == (2,)


class TestProjectL1Ball:
    def test_zero_radius(self):
        assert np.all(project_l1_ball(np.array([1.0, -2.0]), 0.0) == 0.0)

    def test_interior_point_unchanged(self):
        v = np.array([0.25, -0.25])
        assert np.array_equal(project_l1_ball(v, 1.0), v)

    def test_known_projection(self):
        # projecting (2, 0) onto the unit l1 ball gives (1, 0)
        assert np.allclose(project_l1_ball(np.array([2.0, 0.0]), 1.0), [1.0, 0.0])

    def test_negative_radius_rejected(self):
        with pytest.raises(ValueError):
            project_l1_ball(np.array([1.0]), -1.0)

    @settings(max_examples=200, deadline=None)
    @given(
        st.lists(st.floats(-1e4, 1e4), min_size=1, max_size=8),
        st.floats(0.0, 1e4),
    )
    def test_feasible_and_idempotent(self, vs, radius):
        v = np.array(vs)
        out = project_l1_ball(v, radius)
        assert np.abs(out).sum() <= radius + 1e-8 * max(1.0, radius)
        again = project_l1_ball(out, radius)
        assert np.allclose(again, out, atol=1e-9)

    def test_closest_among_candidates(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            v = rng.standard_normal(5) * 3
            out = project_l1_ball(v, 1.0)
            dist = np.linalg.norm(v - out)
            for _ in range(50):
                w = rng.standard_normal(5)
                w = w / np.abs(w).sum() * rng.uniform(0, 1.0)
                assert dist <= np.linalg.norm(v - w) + 1e-9


class TestFitLogisticLasso:
    def test_u_zero_gives_zero(self):
        model = fit_logistic_lasso(separable_tail(), mode="constrained", u=0.0)
        assert np.all(model.coef_ == 0.0)

    def test_large_lambda_keeps_zero_stationary(self):
        sample = separable_tail()
        k = sample.k
        grad_zero = np.abs(sample.angles.T @ sample.targets / k).max() / 2.0
        model = fit_logistic_lasso(sample, mode="lagrangian", lam=grad_zero * 1.01)
        assert np.all(model.coef_ == 0.0)

    def test_separable_toy_reaches_zero_risk(self):
        sample = separable_tail()
        model = fit_logistic_lasso(sample, mode="constrained", u=50.0)
        assert empirical_tail_risk_01(model, sample) == 0.0

    def test_constrained_feasibility(self):
        for u in (0.5, 1.0, 3.0):
            model = fit_logistic_lasso(separable_tail(), mode="constrained", u=u)
            assert np.abs(model.coef_).sum() <= u + 1e-8

    def test_objective_monotone(self):
        sample = separable_tail()
        for mode, kw in (("lagrangian", {"lam": 0.02}), ("constrained", {"u": 2.0})):
            model = fit_logistic_lasso(sample, mode=mode, track_objective=True, **kw)
            path = model.objective_path_
            assert np.all(np.diff(path) <= 1e-12)

    def test_lagrangian_constrained_duality(self):
        rng = np.random.default_rng(1)
        angles = np.abs(rng.standard_normal((60, 4)))
        angles /= np.abs(angles).max(axis=1, keepdims=True)
        labels = np.where(angles[:, 0] > angles[:, 1], 1.0, -1.0)
        flip = rng.uniform(size=60) < 0.1
        labels[flip] *= -1
        sample = make_tail(angles, labels)
        lagr = fit_logistic_lasso(sample, mode="lagrangian", lam=0.05, tol=1e-10,
                                  max_iter=200_000)
        radius = float(np.abs(lagr.coef_).sum())
        constr = fit_logistic_lasso(sample, mode="constrained", u=radius, tol=1e-10,
                                    max_iter=200_000)

        def unpenalized(beta):
            margins = sample.targets * (sample.angles @ beta)
            return float(np.mean(logistic_loss(margins)))

        assert unpenalized(constr.coef_) == pytest.approx(unpenalized(lagr.coef_), abs=1e-5)

    def test_non_pm1_labels_rejected(self):
        sample = make_tail(np.eye(2), np.array([0.0, 1.0]))
        with pytest.raises(ValueError, match="-1/\\+1"):
            fit_logistic_lasso(sample)

    def test_single_class_sets_flag_and_warns(self):
        sample = make_tail(np.eye(3), np.ones(3))
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            model = fit_logistic_lasso(sample, mode="lagrangian", lam=0.01)
        assert model.single_class_
        assert any("single class" in str(w.message) for w in caught)


class TestClassify:
    def fitted(self, beta, p=2.0):
        model = AngularLogisticLasso(norm_p=p)
        model.coef_ = np.asarray(beta, dtype=float)
        return model

    def test_zero_coefficients_predict_positive(self):
        assert classify(self.fitted([0.0, 0.0]), np.array([1.0, 2.0])) == 1

    def test_scale_invariance(self):
        model = self.fitted([1.0, -2.0])
        x = np.array([3.0, 1.0])
        for t in (0.5, 2.0, 100.0):
            assert classify(model, t * x) == classify(model, x)

    def test_positive_margin(self):
        model = self.fitted([1.0, 0.0])
        assert classify(model, np.array([0.8, 0.6])) == 1

    def test_zero_vector_is_error(self):
        with pytest.raises(ValueError, match="zero vector"):
            classify(self.fitted([1.0, 0.0]), np.zeros(2))


class TestEmpiricalTailRisk:
    def test_constant_positive_classifier(self):
        sample = separable_tail(n_pos=10, n_neg=30)
        model = AngularLogisticLasso(norm_p=np.inf)
        model.coef_ = np.array([1.0, 1.0])  # positive margin everywhere
        assert empirical_tail_risk_01(model, sample) == pytest.approx(0.75)

    def test_perfect_classifier(self):
        sample = separable_tail()
        model = AngularLogisticLasso(norm_p=np.inf)
        model.coef_ = np.array([1.0, -1.0])
        assert empirical_tail_risk_01(model, sample) == 0.0

    def test_flip_symmetry(self):
        sample = separable_tail(n_pos=13, n_neg=27)
        model = AngularLogisticLasso(norm_p=np.inf)
        model.coef_ = np.array([1.0, -0.5])
        risk = empirical_tail_risk_01(model, sample)
        model.coef_ = -model.coef_
        # flipping predictions maps risk to 1 - risk up to the sign(0) tie rule
        assert empirical_tail_risk_01(model, sample) == pytest.approx(1.0 - risk)


class TestEstimatorApi:
    def test_fit_predict_on_generated_data(self):
        X, labels = gen_classification_rv(2000, 3, 0.5, 2.0, substream(5, 0))
        est = AngularLogisticLasso(mode="constrained", u=2.0, k=200, norm_p=2.0)
        assert clone(est).get_params() == est.get_params()
        est.fit(X, labels)
        pred = est.predict(X[:11])
        assert pred.shape == (11,)
        assert set(np.unique(pred)) <= {-1, 1}
        assert np.abs(est.coef_).sum() <= 2.0 + 1e-8

    def test_decision_function_scale_invariance(self):
        X, labels = gen_classification_rv(500, 3, 0.5, 2.0, substream(6, 0))
        est = AngularLogisticLasso(mode="lagrangian", lam=0.01, k=100).fit(X, labels)
        row = X[:1]
        assert est.decision_function(3.0 * row)[0] == pytest.approx(
            est.decision_function(row)[0]
        )

    def test_tau_filter_applied_at_fit(self):
        X, labels = gen_classification_rv(2000, 3, 0.5, 2.0, substream(7, 0))
        est = AngularLogisticLasso(mode="constrained", u=1.0, k=400, tau=0.05).fit(X, labels)
        assert est.sample_.k <= 400
        assert est.sample_.angles.min(axis=1).min() >= 0.05


class TestSerialization:
    def test_round_trip(self, tmp_path):
        model = fit_logistic_lasso(separable_tail(), mode="constrained", u=2.0)
        path = tmp_path / "clf.model"
        save_classifier(model, path)
        loaded = load_classifier(path)
        assert np.array_equal(loaded.coef_, model.coef_)
        assert loaded.mode == "constrained"
        assert loaded.u == 2.0
        assert loaded.objective_ == model.objective_


def test_tail_risk_requires_matching_pipeline():
    sample = separable_tail()  # inf norm
    model = AngularLogisticLasso(norm_p=2.0)
    model.coef_ = np.array([1.0, 0.0])
    with pytest.raises(ValueError, match="norm p"):
        empirical_tail_risk_01(model, sample)
