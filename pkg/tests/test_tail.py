import numpy as np
import pytest

from tailml.geometry import lp_norm
from tailml.tail import (
    TailSample,
    empirical_angular_measure,
    filter_off_axes,
    select_extremes,
    tail_empirical_measure,
)
from tailml.transforms import EmpiricalParetoTransform


def rows_with_norms(norms):
    """2-column rows whose l2 norms are exactly the given values."""
    norms = np.asarray(norms, dtype=float)
    return np.column_stack([norms * 0.6, norms * 0.8])


class TestSelectExtremes:
    def test_sorts_by_norm(self):
        sample = select_extremes(rows_with_norms([1, 5, 3, 2]), 2, p=2.0)
        assert list(sample.source_indices) == [1, 2]
        assert sample.threshold == pytest.approx(3.0)
        assert np.all(np.diff(sample.radii) <= 0)

    def test_full_sample(self):
        sample = select_extremes(rows_with_norms([4, 1, 2]), 3, p=2.0)
        assert sample.k == 3
        assert sample.threshold == pytest.approx(1.0)

    def test_tie_prefers_smaller_index(self):
        sample = select_extremes(rows_with_norms([2, 2, 1]), 1, p=2.0)
        assert list(sample.source_indices) == [0]

    def test_k_exceeding_n_is_error(self):
        with pytest.raises(ValueError, match="exceeds"):
            select_extremes(rows_with_norms([1, 2]), 3)

    def test_zero_row_is_error(self):
        with pytest.raises(ValueError, match="zero vector"):
            select_extremes(np.array([[1.0, 1.0], [0.0, 0.0]]), 2)

    def test_targets_carried_along(self):
        sample = select_extremes(rows_with_norms([1, 5, 3]), 2, y=[10.0, 20.0, 30.0])
        assert list(sample.targets) == [20.0, 30.0]

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(0)
        X = rng.lognormal(size=(60, 3))
        base = select_extremes(X, 10, p=2.0)
        perm = rng.permutation(60)
        shuffled = select_extremes(X[perm], 10, p=2.0)
        assert set(map(tuple, X[base.source_indices])) == set(
            map(tuple, X[perm][shuffled.source_indices])
        )

    def test_rank_standardization_tag_and_range(self):
        rng = np.random.default_rng(1)
        X = rng.standard_normal((50, 3))
        sample = select_extremes(X, 5, p=np.inf, standardization="rank")
        assert sample.standardization == "rank"
        assert np.all(sample.radii >= 1.0)
        assert np.all(sample.angles >= 0.0)

    def test_known_pareto_requires_margins(self):
        with pytest.raises(ValueError, match="requires marginal"):
            select_extremes(np.ones((3, 2)), 2, standardization="known-pareto")

    def test_radii_match_threshold_invariant(self):
        rng = np.random.default_rng(2)
        X = rng.lognormal(size=(40, 2))
        sample = select_extremes(X, 7, p=1.0)
        assert sample.radii[-1] == sample.threshold


class TestFilterOffAxes:
    def sample(self):
        X = np.array([[2.0, 0.0], [1.0, 2.0]])  # inf-norm angles (1,0) and (0.5,1)
        return select_extremes(X, 2, p=np.inf)

    def test_tau_zero_is_identity(self):
        out = filter_off_axes(self.sample(), 0.0)
        assert out.k == 2

    def test_min_component_filter(self):
        out = filter_off_axes(self.sample(), 0.3)
        assert out.k == 1
        assert np.allclose(out.angles[0], [0.5, 1.0])
        assert out.threshold == self.sample().threshold

    def test_impossible_constraint_is_error(self):
        with pytest.raises(ValueError, match="removed all"):
            filter_off_axes(self.sample(), 0.999)

    def test_tau_out_of_range(self):
        with pytest.raises(ValueError):
            filter_off_axes(self.sample(), 1.0)


class TestTailEmpiricalMeasure:
    def sample(self):
        return select_extremes(rows_with_norms([5, 4, 3, 2]), 4, p=2.0)

    def test_total_mass(self):
        assert tail_empirical_measure(self.sample(), lambda a, r: np.ones(len(r), bool)) == 1.0

    def test_empty_region(self):
        assert tail_empirical_measure(self.sample(), lambda a, r: np.zeros(len(r), bool)) == 0.0

    def test_counting(self):
        assert tail_empirical_measure(self.sample(), lambda a, r: r > 3.5) == pytest.approx(0.5)

    def test_additive_over_disjoint_regions(self):
        rng = np.random.default_rng(3)
        X = rng.lognormal(size=(30, 2))
        sample = select_extremes(X, 12, p=2.0)
        cut = 0.6
        low = tail_empirical_measure(sample, lambda a, r: a[:, 0] < cut)
        high = tail_empirical_measure(sample, lambda a, r: a[:, 0] >= cut)
        assert low + high == pytest.approx(1.0)


def brute_force_angular_measure(X, k, angular_set, p):
    """Straight evaluation of the defining formula, kept independent of the
    library path (explicit per-row counting)."""
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    model = EmpiricalParetoTransform().fit(X)
    count = 0
    for i in range(n):
        v = model.transform(X[i : i + 1])[0]
        r = lp_norm(v, p)
        if r >= n / k and bool(angular_set((v / r).reshape(1, -1))[0]):
            count += 1
    return count / k


class TestEmpiricalAngularMeasure:
    X6 = np.array([
        [9.0, 1.0],
        [1.0, 8.0],
        [7.0, 6.0],
        [2.0, 2.5],
        [0.5, 0.2],
        [3.0, 0.1],
    ])

    def test_full_sphere_matches_brute_force(self):
        full = lambda angles: np.ones(len(angles), bool)
        for k in (1, 2, 3, 6):
            got = empirical_angular_measure(self.X6, k, full, p=np.inf)
            want = brute_force_angular_measure(self.X6, k, full, np.inf)
            assert got == pytest.approx(want)

    def test_empty_set(self):
        empty = lambda angles: np.zeros(len(angles), bool)
        assert empirical_angular_measure(self.X6, 3, empty, p=np.inf) == 0.0

    def test_additive_over_disjoint_sets(self):
        a1 = lambda angles: angles[:, 0] >= angles[:, 1]
        a2 = lambda angles: angles[:, 0] < angles[:, 1]
        full = lambda angles: np.ones(len(angles), bool)
        k = 3
        total = empirical_angular_measure(self.X6, k, full, p=np.inf)
        assert empirical_angular_measure(self.X6, k, a1, p=np.inf) + empirical_angular_measure(
            self.X6, k, a2, p=np.inf
        ) == pytest.approx(total)

    def test_monotone_in_set(self):
        small = lambda angles: angles[:, 0] > 0.9
        large = lambda angles: angles[:, 0] > 0.5
        assert empirical_angular_measure(self.X6, 2, small, p=np.inf) <= (
            empirical_angular_measure(self.X6, 2, large, p=np.inf)
        )

    def test_bounded_by_n_over_k(self):
        full = lambda angles: np.ones(len(angles), bool)
        value = empirical_angular_measure(self.X6, 2, full, p=np.inf)
        assert 0.0 <= value <= 6 / 2

    def test_count_concentrates_for_pareto_data(self):
        # the count #{||V_hat||_inf >= n/k} estimates k * Phi(sphere); with
        # the max norm Phi(sphere) is the extremal coefficient, so the count
        # sits near k only under strong cross-sectional dependence. Exactly
        # comonotone unit-Pareto columns pin it to k; near-comonotone
        # logistic data keeps it within 3 sqrt(k) in >= 95% of seeded runs.
        n, k, runs = 1000, 50, 200
        full = lambda angles: np.ones(len(angles), bool)

        rng = np.random.default_rng(99)
        z = 1.0 / (1.0 - rng.uniform(size=n))
        comonotone = np.column_stack([z, 2.0 * z])
        count = empirical_angular_measure(comonotone, k, full, p=np.inf) * k
        assert count == pytest.approx(k)

        from tailml.simulate import mv_logistic, substream

        hits = 0
        for seed in range(runs):
            X = mv_logistic(n, 2, 0.1, substream(seed, 0))
            count = empirical_angular_measure(X, k, full, p=np.inf) * k
            hits += bool(abs(count - k) <= 3.0 * np.sqrt(k))
        assert hits / runs >= 0.95


def test_tail_sample_rejects_increasing_radii():
    with pytest.raises(ValueError, match="non-increasing"):
        TailSample(
            k=2,
            threshold=1.0,
            angles=np.ones((2, 1)),
            radii=np.array([1.0, 2.0]),
            source_indices=np.array([0, 1]),
            norm_p=2.0,
        )
