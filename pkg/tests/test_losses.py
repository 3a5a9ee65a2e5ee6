import math

import numpy as np
import pytest

from otmix import ObjectiveWeights, TokenDistributionSequence, cross_entropy
from otmix import symmetric_kl, symmetric_kl_grad, total_objective
from otmix.constants import OBJECTIVE_NAMES, PROB_FLOOR
from otmix.errors import DataError, DegenerateGradient, IndexOutOfRange, ShapeMismatch
from otmix.gradcheck import finite_difference, relative_error
from otmix.losses import ablation_objective, symmetric_kl_array


def random_dist(rng, length, vocab, low=0.05):
    probs = rng.random((length, vocab)) + low
    return TokenDistributionSequence(probs / probs.sum(axis=1, keepdims=True))


class TestTokenDistributionSequence:
    @pytest.mark.parametrize(
        "probs", [[[0.5, 0.6]], [[1.5, -0.5]], [0.5, 0.5], [[np.nan, 1.0]]]
    )
    def test_invalid(self, probs):
        with pytest.raises(DataError):
            TokenDistributionSequence(probs)

    def test_constructors(self):
        assert TokenDistributionSequence.uniform(2, 4).probs.tolist() == [[0.25] * 4] * 2
        one_hot = TokenDistributionSequence.one_hot([2, 1], 3)
        assert one_hot.probs.tolist() == [[0, 1, 0], [1, 0, 0]]
        assert (one_hot.length, one_hot.vocab) == (2, 3)


class TestCrossEntropy:
    def test_perfect_prediction(self):
        pred = TokenDistributionSequence.one_hot([3, 1, 2, 5], 5)
        assert 0 <= cross_entropy(pred, [3, 1, 2, 5], label_smoothing=0) < 1e-11

    def test_uniform_prediction(self):
        pred = TokenDistributionSequence.uniform(3, 7)
        loss = cross_entropy(pred, [1, 7, 4], label_smoothing=0)
        assert loss == pytest.approx(math.log(7), abs=1e-12)

    def test_matches_loop_oracle(self, rng):
        pred = random_dist(rng, 3, 5)
        targets = [2, 5, 1]
        expected = 0.0
        for pos, t in enumerate(targets):
            row = pred.probs[pos]
            nll = -math.log(row[t - 1])
            smooth = sum(-math.log(p) for p in row) / 5
            expected += 0.9 * nll + 0.1 * smooth
        assert abs(cross_entropy(pred, targets) - expected / 3) <= 1e-12

    def test_one_hot_minimizes_unsmoothed_loss(self, rng):
        targets = [1, 3]
        best = cross_entropy(TokenDistributionSequence.one_hot(targets, 4), targets, 0)
        for _ in range(20):
            assert best < cross_entropy(random_dist(rng, 2, 4, low=0), targets, 0)

    def test_floor_keeps_loss_finite(self):
        pred = TokenDistributionSequence.one_hot([1], 2)
        loss = cross_entropy(pred, [2], label_smoothing=0)
        assert loss == pytest.approx(-math.log(PROB_FLOOR), rel=1e-6)

    def test_invalid_targets(self):
        pred = TokenDistributionSequence.uniform(2, 3)
        with pytest.raises(IndexOutOfRange):
            cross_entropy(pred, [1, 4])
        with pytest.raises(IndexOutOfRange):
            cross_entropy(pred, [0, 1])
        with pytest.raises(ShapeMismatch):
            cross_entropy(pred, [1, 2, 3])
        with pytest.raises(ValueError):
            cross_entropy(pred, [1, 2], label_smoothing=1.0)


class TestSymmetricKL:
    def test_identical_distributions(self, rng):
        p = random_dist(rng, 4, 6)
        assert symmetric_kl(p, p) == 0.0

    def test_two_point_closed_form(self):
        p = TokenDistributionSequence([[1.0, 0.0]])
        q = TokenDistributionSequence([[0.5, 0.5]])
        f = PROB_FLOOR
        pf = [1 / (1 + f), f / (1 + f)]
        kl_pq = sum(x * math.log(x / 0.5) for x in pf)
        kl_qp = sum(0.5 * math.log(0.5 / x) for x in pf)
        assert abs(symmetric_kl(p, q) - 0.5 * (kl_pq + kl_qp)) <= 1e-10

    def test_symmetric_and_nonnegative(self, rng):
        for _ in range(20):
            p, q = random_dist(rng, 3, 5), random_dist(rng, 3, 5)
            assert symmetric_kl(p, q) == symmetric_kl(q, p)
            assert symmetric_kl(p, q) > 0

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            symmetric_kl(
                TokenDistributionSequence.uniform(2, 3),
                TokenDistributionSequence.uniform(3, 3),
            )


class TestSymmetricKLGrad:
    def test_matches_finite_differences(self, rng):
        for _ in range(100):
            p, q = random_dist(rng, 2, 4), random_dist(rng, 2, 4)
            grad_p, grad_q = symmetric_kl_grad(p, q)
            num_p = finite_difference(lambda x: symmetric_kl_array(x, q.probs), p.probs)
            num_q = finite_difference(lambda x: symmetric_kl_array(p.probs, x), q.probs)
            assert relative_error(grad_p, num_p) < 1e-5
            assert relative_error(grad_q, num_q) < 1e-5

    def test_zero_at_minimum(self, rng):
        p = random_dist(rng, 3, 4)
        grad_p, grad_q = symmetric_kl_grad(p, p)
        np.testing.assert_allclose(grad_p, 0, atol=1e-15)
        np.testing.assert_allclose(grad_q, 0, atol=1e-15)

    def test_argument_swap(self, rng):
        p, q = random_dist(rng, 2, 4), random_dist(rng, 2, 4)
        grad_p, _ = symmetric_kl_grad(p, q)
        _, grad_q = symmetric_kl_grad(q, p)
        np.testing.assert_array_equal(grad_p, grad_q)

    def test_rows_are_tangent_to_the_simplex(self, rng):
        p, q = random_dist(rng, 3, 5), random_dist(rng, 3, 5)
        grad_p, _ = symmetric_kl_grad(p, q)
        np.testing.assert_allclose((p.probs * grad_p).sum(axis=1), 0, atol=1e-14)

    def test_near_floor_is_degenerate(self):
        p = TokenDistributionSequence([[1.0 - 1e-10, 1e-10]])
        q = TokenDistributionSequence.uniform(1, 2)
        with pytest.raises(DegenerateGradient):
            symmetric_kl_grad(p, q)


class TestTotalObjective:
    def test_examples(self):
        w = ObjectiveWeights(lambda_kl=2.0, mu_ot=0.0)
        assert total_objective(0, 0, 0, 0, 0, 0, w) == 0
        assert total_objective(1, 1, 0, 0.5, 0.5, 0, w) == 4.0
        w = ObjectiveWeights(lambda_kl=2.0, mu_ot=0.1)
        assert total_objective(1, 1, 0, 0.5, 0.5, 3, w) == 4.3

    def test_mixup_term_is_optional(self):
        on = ObjectiveWeights(lambda_kl=0, use_mixup_ce=True)
        off = ObjectiveWeights(lambda_kl=0)
        assert total_objective(1, 1, 2, 0, 0, 0, on) == 4
        assert total_objective(1, 1, 2, 0, 0, 0, off) == 2

    @pytest.mark.parametrize("index", range(6))
    def test_linear_in_each_component(self, index):
        w = ObjectiveWeights(lambda_kl=2.0, mu_ot=0.1, use_mixup_ce=True)
        parts = [0.0] * 6
        parts[index] = 1.5
        single = total_objective(*parts, w)
        parts[index] = 4.5
        assert total_objective(*parts, w) == pytest.approx(3 * single, rel=1e-15)

    def test_rejects_non_finite(self):
        with pytest.raises(DataError):
            total_objective(1, np.inf, 0, 0, 0, 0)

    def test_negative_weights(self):
        with pytest.raises(DataError):
            ObjectiveWeights(lambda_kl=-1)


class TestAblationObjective:
    @pytest.fixture
    def parts(self):
        return {
            "st": 1.0,
            "mt": 0.5,
            "mixup": 0.75,
            "kl_st": 0.25,
            "kl_ms": 0.5,
            "kl_mt": 1.0,
            "ot": 3.0,
        }

    def test_every_objective(self, parts):
        expected = {
            "st": 1.0,
            "st+mt": 1.5,
            "kl(s,t)": 2.0,
            "kl(m,s)": 2.5,
            "kl(m,t)": 3.5,
            "cmot": 4.5,
            "cmot+mixup": 5.25,
            "cmot+ot": 4.5 + 0.1 * 3.0,
        }
        assert set(expected) == set(OBJECTIVE_NAMES)
        for name, value in expected.items():
            assert ablation_objective(name, parts) == pytest.approx(value), name

    def test_agrees_with_total_objective(self, parts):
        w = ObjectiveWeights(mu_ot=0.1)
        args = [parts[k] for k in ("st", "mt", "mixup", "kl_ms", "kl_mt", "ot")]
        assert ablation_objective("cmot+ot", parts, w) == total_objective(*args, w)

    def test_missing_components_are_zero(self):
        assert ablation_objective("cmot", {"st": 2.0}) == 2.0

    def test_unknown_objective(self, parts):
        with pytest.raises(ValueError):
            ablation_objective("cmot+dtw", parts)
