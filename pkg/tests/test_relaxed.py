import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from otmix import Alignment, EmbeddingSequence, MassVector, TransportPlan, WindowConfig
from otmix import cost_matrix, extract_alignment, masses_from_norms, relaxed_align
from otmix import relaxed_grad, solve_relaxed, window_bounds
from otmix.errors import DegenerateGradient, IndexOutOfRange, ShapeMismatch
from otmix.gradcheck import finite_difference, relative_error
from otmix.relaxed import argmin_margin, relaxed_distance, window_limits, window_mask
from otmix.types import CostMatrix

NO_WINDOW = WindowConfig.disabled()


def random_instance(seed, n, n_hat, d):
    rng = np.random.default_rng(seed)
    a = EmbeddingSequence(rng.standard_normal((n, d)))
    b = EmbeddingSequence(rng.standard_normal((n_hat, d)))
    return a, b


def brute_force_distance(cost, masses, window):
    n, n_hat = cost.shape
    total = 0.0
    for i in range(n):
        if window.enabled:
            lo, hi = window_bounds(i + 1, n, n_hat, window.size)
        else:
            lo, hi = 1, n_hat
        best = min(cost[i, j - 1] for j in range(lo, hi + 1))
        total += masses[i] * best
    return total


class TestWindowBounds:
    @pytest.mark.parametrize(
        "i, n, n_hat, W, bounds",
        [(5, 10, 10, 2, (3, 7)), (1, 20, 10, 2, (1, 2)), (1, 10, 10, 10, (1, 10))],
    )
    def test_examples(self, i, n, n_hat, W, bounds):
        assert window_bounds(i, n, n_hat, W) == bounds

    def test_covers_everything_for_large_windows(self):
        for i in range(1, 11):
            assert window_bounds(i, 10, 10, 10) == (1, 10)

    @given(st.integers(1, 40), st.integers(1, 40), st.integers(1, 12), st.data())
    def test_matches_rational_formula(self, n, n_hat, W, data):
        i = data.draw(st.integers(1, n))
        center = Fraction(n_hat * i, n)
        lo = max(1, math.ceil(center - W))
        hi = min(n_hat, math.floor(center + W))
        assert window_bounds(i, n, n_hat, W) == (lo, hi)
        assert lo <= hi

    @given(st.integers(1, 30), st.integers(1, 30), st.integers(1, 8))
    def test_mask_and_limits_agree(self, n, n_hat, W):
        lo, hi = window_limits(n, n_hat, W)
        mask = window_mask(n, n_hat, W)
        for i in range(1, n + 1):
            assert (lo[i - 1], hi[i - 1]) == window_bounds(i, n, n_hat, W)
            cols = mask[i - 1].nonzero()[0] + 1
            assert cols.tolist() == list(range(lo[i - 1], hi[i - 1] + 1))

    def test_invalid_row(self):
        with pytest.raises(IndexOutOfRange):
            window_bounds(0, 10, 10, 2)
        with pytest.raises(IndexOutOfRange):
            window_bounds(11, 10, 10, 2)


class TestSolveRelaxed:
    def test_two_by_two_example(self):
        cost = CostMatrix([[1.0, 2.0], [3.0, 0.5]])
        plan, distance = solve_relaxed(cost, MassVector([0.5, 0.5]), NO_WINDOW)
        assert distance == 0.75
        assert plan.values.tolist() == [[0.5, 0.0], [0.0, 0.5]]
        assert plan.is_relaxed
        assert list(extract_alignment(plan)) == [1, 2]

    def test_identical_sequences(self, rng):
        seq = EmbeddingSequence(rng.standard_normal((6, 3)))
        cost = cost_matrix(seq, seq)
        plan, distance = solve_relaxed(cost, masses_from_norms(seq), NO_WINDOW)
        assert distance == 0.0
        assert extract_alignment(plan) == Alignment.identity(6)

    def test_one_nonzero_per_row(self, rng):
        a, b = random_instance(1, 7, 4, 3)
        masses = masses_from_norms(a)
        plan, _ = solve_relaxed(cost_matrix(a, b), masses, NO_WINDOW)
        assert ((plan.values > 0).sum(axis=1) == 1).all()
        np.testing.assert_array_equal(plan.values.sum(axis=1), masses.masses)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            solve_relaxed(CostMatrix(np.ones((3, 2))), MassVector.uniform(2))

    @settings(max_examples=1000, deadline=None)
    @given(
        st.integers(0, 1 << 32),
        st.integers(1, 16),
        st.integers(1, 16),
        st.integers(1, 8),
        st.one_of(st.none(), st.integers(1, 6)),
    )
    def test_closed_form_matches_brute_force(self, seed, n, n_hat, d, W):
        a, b = random_instance(seed, n, n_hat, d)
        window = NO_WINDOW if W is None else WindowConfig(size=W)
        cost, masses = cost_matrix(a, b), masses_from_norms(a)
        _, distance = solve_relaxed(cost, masses, window)
        assert abs(distance - brute_force_distance(cost, masses, window)) <= 1e-12

    def test_closed_form_on_1000_seeded_instances(self):
        rng = np.random.default_rng(1000)
        for k in range(1000):
            n, n_hat = rng.integers(1, 17, size=2)
            a, b = random_instance(k, n, n_hat, rng.integers(1, 9))
            window = NO_WINDOW if k % 2 else WindowConfig(size=int(rng.integers(1, 7)))
            cost, masses = cost_matrix(a, b), masses_from_norms(a)
            _, distance = solve_relaxed(cost, masses, window)
            assert abs(distance - brute_force_distance(cost, masses, window)) <= 1e-12

    @pytest.mark.parametrize("seed", range(20))
    def test_window_never_decreases_distance(self, seed):
        a, b = random_instance(seed, 12, 7, 3)
        cost, masses = cost_matrix(a, b), masses_from_norms(a)
        _, free = solve_relaxed(cost, masses, NO_WINDOW)
        for W in (1, 2, 4):
            _, windowed = solve_relaxed(cost, masses, WindowConfig(size=W))
            assert windowed >= free

    @pytest.mark.parametrize("seed", range(10))
    def test_alignment_respects_window(self, seed):
        a, b = random_instance(seed, 15, 9, 4)
        align, _ = relaxed_align(a, b, WindowConfig(size=2))
        lo, hi = window_limits(15, 9, 2)
        assert ((align.targets >= lo) & (align.targets <= hi)).all()

    def test_alignment_ignores_mass_scale(self, rng):
        a, b = random_instance(3, 8, 5, 3)
        cost = cost_matrix(a, b)
        weights = rng.random(8) + 0.1
        plan1, _ = solve_relaxed(cost, MassVector(weights / weights.sum()), NO_WINDOW)
        plan2, _ = solve_relaxed(cost, MassVector.uniform(8), NO_WINDOW)
        assert extract_alignment(plan1) == extract_alignment(plan2)

    def test_permutation_equivariance(self, rng):
        a, b = random_instance(4, 9, 6, 3)
        perm = rng.permutation(9)
        align, _ = relaxed_align(a, b, NO_WINDOW)
        permuted, _ = relaxed_align(EmbeddingSequence(a.vectors[perm]), b, NO_WINDOW)
        np.testing.assert_array_equal(permuted.targets, align.targets[perm])


class TestExtractAlignment:
    def test_tie_break_takes_smallest_column(self):
        values = [[0.2, 0.2, 0.1], [0.0, 0.0, 0.5]]
        plan = TransportPlan(values, MassVector([0.5, 0.5]), MassVector([0.2, 0.2, 0.6]))
        assert list(extract_alignment(plan)) == [1, 3]

    def test_zero_mass_rows_fall_back_to_cheapest_column(self):
        speech = EmbeddingSequence([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        text = EmbeddingSequence([[1.0, 0.0], [0.1, 0.0], [0.0, 1.0]])
        align, _ = relaxed_align(speech, text, NO_WINDOW)
        assert list(align) == [2, 1, 3]

    def test_zero_mass_fallback_respects_window(self):
        speech = EmbeddingSequence([[1.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 0.0]])
        text = EmbeddingSequence([[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [1.0, 0.0]])
        align, _ = relaxed_align(speech, text, WindowConfig(size=1))
        assert align[3] in (3, 4)


class TestArgminMargin:
    def test_margin(self):
        cost = CostMatrix([[1.0, 1.5, 4.0], [2.0, 0.0, 0.25]])
        assert argmin_margin(cost, NO_WINDOW) == 0.25

    def test_single_column(self):
        assert argmin_margin(CostMatrix([[1.0], [2.0]]), NO_WINDOW) == np.inf


class TestRelaxedGrad:
    @staticmethod
    def margin_safe_instances(count, n, n_hat, d, window):
        found = []
        seed = 0
        while len(found) < count:
            a, b = random_instance(seed, n, n_hat, d)
            seed += 1
            if argmin_margin(cost_matrix(a, b), window) > 1e-2:
                found.append((a, b))
        return found

    @pytest.mark.parametrize("window", [WindowConfig(size=10), WindowConfig(size=1)])
    def test_matches_finite_differences(self, window):
        for a, b in self.margin_safe_instances(100, 6, 5, 4, window):
            grad_a, grad_b = relaxed_grad(a, b, window)
            num_a = finite_difference(
                lambda x: relaxed_distance(EmbeddingSequence(x), b, window), a.vectors
            )
            num_b = finite_difference(
                lambda x: relaxed_distance(a, EmbeddingSequence(x), window), b.vectors
            )
            assert relative_error(grad_a, num_a) < 1e-5
            assert relative_error(grad_b, num_b) < 1e-5

    def test_target_gradient_is_minus_mass_times_unit(self, rng):
        b = EmbeddingSequence(5 * np.eye(4))
        a = EmbeddingSequence(b.vectors + 0.1 * rng.standard_normal((4, 4)))
        align, _ = relaxed_align(a, b, NO_WINDOW)
        assert align == Alignment.identity(4)

        _, grad_b = relaxed_grad(a, b, NO_WINDOW)
        diff = a.vectors - b.vectors
        units = diff / np.linalg.norm(diff, axis=1)[:, None]
        masses = masses_from_norms(a).masses
        np.testing.assert_allclose(grad_b, -masses[:, None] * units, rtol=1e-12)

    def test_coincident_pair_is_degenerate(self):
        seq = EmbeddingSequence([[1.0, 0.0], [0.0, 1.0]])
        with pytest.raises(DegenerateGradient):
            relaxed_grad(seq, seq, NO_WINDOW)

    def test_zero_norm_row_is_degenerate(self):
        a = EmbeddingSequence([[0.0, 0.0], [1.0, 1.0]])
        b = EmbeddingSequence([[0.5, 0.0], [2.0, 0.0]])
        with pytest.raises(DegenerateGradient):
            relaxed_grad(a, b, NO_WINDOW)
