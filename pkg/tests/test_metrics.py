"""Tests for recovery metrics and the design-matrix coherence auditor."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sparsesvm.core import Dataset, GroundTruth
from sparsesvm.metrics import (
    accuracy,
    coherence,
    coherence_bruteforce,
    gd_selection_tau,
    normalized_direction_error,
    relative_error,
    selection_metrics,
)


class TestDirectionError:
    def test_identical_is_zero(self):
        b = np.array([1.0, -2.0, 0.0])
        assert normalized_direction_error(b, b) == 0.0

    def test_scale_invariant(self):
        b = np.array([3.0, 4.0])
        assert normalized_direction_error(7.0 * b, b) == pytest.approx(0.0, abs=1e-15)

    def test_opposite_is_two(self):
        b = np.array([1.0, 1.0])
        assert normalized_direction_error(-b, b) == pytest.approx(2.0)

    def test_orthogonal(self):
        assert normalized_direction_error(
            np.array([1.0, 0.0]), np.array([0.0, 1.0])
        ) == pytest.approx(np.sqrt(2.0))

    def test_zero_vector_raises(self):
        with pytest.raises(ValueError):
            normalized_direction_error(np.zeros(3), np.ones(3))
        with pytest.raises(ValueError):
            normalized_direction_error(np.ones(3), np.zeros(3))

    @given(st.integers(0, 1000))
    @settings(max_examples=25)
    def test_range(self, seed):
        rng = np.random.default_rng(seed)
        a, b = rng.standard_normal(6), rng.standard_normal(6)
        err = normalized_direction_error(a, b)
        assert 0.0 <= err <= 2.0 + 1e-12


class TestRelativeError:
    def test_hand_value(self):
        est = np.array([1.0, 1.0])
        tru = np.array([2.0, 0.0])
        # ||est - tru|| / ||tru|| = sqrt(2) / 2.
        assert relative_error(est, tru) == pytest.approx(np.sqrt(2) / 2)

    def test_exact_is_zero(self):
        b = np.array([0.5, -0.5, 3.0])
        assert relative_error(b, b) == 0.0

    def test_zero_truth_raises(self):
        with pytest.raises(ValueError):
            relative_error(np.ones(2), np.zeros(2))


class TestAccuracy:
    def test_perfect(self):
        d = Dataset(X=np.eye(3), y=np.array([1.0, -1.0, 1.0]))
        assert accuracy(np.array([2.0, -2.0, 2.0]), d) == 1.0

    def test_sign_zero_counts_as_positive(self):
        d = Dataset(X=np.zeros((2, 2)), y=np.array([1.0, -1.0]))
        assert accuracy(np.zeros(2), d) == 0.5

    def test_half(self):
        d = Dataset(X=np.array([[1.0], [1.0]]), y=np.array([1.0, -1.0]))
        assert accuracy(np.array([1.0]), d) == 0.5


class TestSelection:
    def test_exact_recovery(self):
        gt = GroundTruth(beta_star=np.array([0.0, 5.0, 0.0, -3.0]))
        m = selection_metrics(np.array([0.0, 5.0, 0.0, -3.0]), gt, tau=1e-3)
        assert (m.false_positive, m.true_negative) == (0, 0)

    def test_false_positive_and_miss(self):
        gt = GroundTruth(beta_star=np.array([0.0, 5.0, 0.0, -3.0]))
        m = selection_metrics(np.array([0.2, 5.0, 0.0, 0.0]), gt, tau=1e-3)
        assert m.false_positive == 1
        assert m.true_negative == 1

    def test_tau_boundary_excluded(self):
        # Detection requires |beta_i| strictly above tau.
        gt = GroundTruth(beta_star=np.array([0.0, 1.0]))
        m = selection_metrics(np.array([0.1, 1.0]), gt, tau=0.1)
        assert m.false_positive == 0

    def test_negative_tau_raises(self):
        gt = GroundTruth(beta_star=np.array([1.0]))
        with pytest.raises(ValueError):
            selection_metrics(np.array([1.0]), gt, tau=-1.0)

    def test_gd_tau(self):
        beta = np.array([0.5, -4.0, 0.1])
        assert gd_selection_tau(beta) == pytest.approx(4e-3)


class TestCoherence:
    def test_hand_example(self):
        # Normalized columns (0.6, 0.8) and (0.8, -0.6): products are
        # (0.48, -0.48), so the best one-sided restricted sum is 0.48.
        X = np.array([[0.6, 0.8], [0.8, -0.6]])
        rep = coherence(X, s=1)
        assert rep.delta == pytest.approx(0.48)
        assert rep.argmax_pair == (0, 1)

    def test_orthonormal_is_zero(self):
        rep = coherence(np.eye(4), s=2)
        assert rep.delta == 0.0

    def test_identical_columns(self):
        X = np.column_stack([np.ones(3), np.ones(3)])
        rep = coherence(X, s=1)
        assert rep.delta == pytest.approx(1.0)

    def test_budget(self):
        X = np.random.default_rng(0).standard_normal((10, 6))
        rep = coherence(X, s=3)
        assert rep.budget == pytest.approx(1.0 / (3 * np.log(6)))

    def test_scale_invariance(self):
        rng = np.random.default_rng(1)
        X = rng.standard_normal((8, 5))
        scales = rng.uniform(0.1, 10.0, size=5)
        assert coherence(X * scales, s=2).delta == pytest.approx(
            coherence(X, s=2).delta, rel=1e-12
        )

    def test_column_permutation_invariance(self):
        rng = np.random.default_rng(2)
        X = rng.standard_normal((9, 6))
        perm = rng.permutation(6)
        assert coherence(X[:, perm], s=2).delta == pytest.approx(
            coherence(X, s=2).delta, rel=1e-12
        )

    def test_row_sign_flip_invariance(self):
        rng = np.random.default_rng(3)
        X = rng.standard_normal((7, 4))
        flips = rng.choice([-1.0, 1.0], size=(7, 1))
        assert coherence(X * flips, s=2).delta == pytest.approx(
            coherence(X, s=2).delta, rel=1e-12
        )

    def test_zero_column_raises(self):
        X = np.zeros((4, 2))
        X[:, 0] = 1.0
        with pytest.raises(ValueError):
            coherence(X, s=1)

    def test_single_column(self):
        rep = coherence(np.ones((5, 1)), s=1)
        assert rep.delta == 0.0
        assert rep.argmax_pair is None

    @pytest.mark.parametrize("seed", range(50))
    def test_matches_bruteforce_exactly(self, seed):
        """The fast statistic must equal the exhaustive subset search bit for bit."""
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 13))
        p = int(rng.integers(2, 7))
        X = rng.standard_normal((n, p))
        assert coherence(X).delta == coherence_bruteforce(X).delta

    def test_bruteforce_rejects_large_n(self):
        with pytest.raises(ValueError):
            coherence_bruteforce(np.ones((21, 2)), s=1)
