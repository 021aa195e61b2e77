import numpy as np
import pytest
import torch
from hypothesis import given, settings
from hypothesis import strategies as st

from batchtrainer.losses import LossWeights, clustering_loss, gradient_penalty

EMPTY = np.empty((0, 2), dtype=np.int64)


def t64(data):
    return torch.tensor(data, dtype=torch.float64)


class TestClusteringLossValues:
    def test_no_pairs_is_zero(self):
        probs = t64([[0.5, 0.5], [0.2, 0.8]])
        centers = t64([[0.0, 0.0], [1.0, 1.0]])
        loss = clustering_loss(probs, centers, EMPTY, EMPTY)
        assert loss.item() == 0.0

    def test_segment_term_hand_value(self):
        # two nets, both fully assigned to batch 0, one conflict pair:
        # (1/2) * (1*1)^2 = 0.5
        probs = t64([[1.0, 0.0], [1.0, 0.0]])
        centers = t64([[0.0, 0.0], [0.0, 0.0]])
        loss = clustering_loss(
            probs, centers, [[0, 1]], EMPTY, LossWeights(w_seg=1.0, w_ctr=0.0, w_pin=0.0)
        )
        assert abs(loss.item() - 0.5) < 1e-9

    def test_center_term_hand_value(self):
        # same pair, centers (0,0) and (3,4): (1/2) * 1 * 25 = 12.5
        probs = t64([[1.0, 0.0], [1.0, 0.0]])
        centers = t64([[0.0, 0.0], [3.0, 4.0]])
        loss = clustering_loss(
            probs, centers, [[0, 1]], EMPTY, LossWeights(w_seg=0.0, w_ctr=1.0, w_pin=0.0)
        )
        assert abs(loss.item() - 12.5) < 1e-9

    def test_pin_term_hand_value(self):
        probs = t64([[1.0, 0.0], [1.0, 0.0]])
        centers = t64([[0.0, 0.0], [0.0, 0.0]])
        loss = clustering_loss(
            probs, centers, EMPTY, [[0, 1]], LossWeights(w_seg=0.0, w_ctr=0.0, w_pin=1.0)
        )
        assert abs(loss.item() - 0.5) < 1e-9

    def test_disjoint_supports_zero(self):
        probs = t64([[1.0, 0.0], [0.0, 1.0]])
        centers = t64([[0.0, 0.0], [3.0, 4.0]])
        loss = clustering_loss(probs, centers, [[0, 1]], [[0, 1]])
        assert loss.item() == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            clustering_loss(t64([[1.0, 0.0]]), t64([[0.0, 0.0], [1.0, 1.0]]), EMPTY, EMPTY)


def random_instance(rng, n=6, b=4, n_pairs=5):
    logits = rng.standard_normal((n, b))
    probs = np.exp(logits) / np.exp(logits).sum(axis=1, keepdims=True)
    centers = rng.uniform(0, 10, size=(n, 2))
    pairs = rng.integers(0, n, size=(n_pairs, 2))
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    return probs, centers, pairs


class TestClusteringLossProperties:
    @given(st.integers(0, 1000))
    @settings(max_examples=30, deadline=None)
    def test_non_negative(self, seed):
        rng = np.random.default_rng(seed)
        probs, centers, pairs = random_instance(rng)
        loss = clustering_loss(t64(probs), t64(centers), pairs, pairs)
        assert loss.item() >= 0.0

    @given(st.integers(0, 1000))
    @settings(max_examples=30, deadline=None)
    def test_batch_permutation_invariant(self, seed):
        rng = np.random.default_rng(seed)
        probs, centers, pairs = random_instance(rng)
        perm = rng.permutation(probs.shape[1])
        base = clustering_loss(t64(probs), t64(centers), pairs, pairs)
        permuted = clustering_loss(t64(probs[:, perm]), t64(centers), pairs, pairs)
        assert abs(base.item() - permuted.item()) < 1e-12

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_gradient_matches_finite_differences(self, seed):
        rng = np.random.default_rng(seed)
        probs_np, centers, pairs = random_instance(rng)
        weights = LossWeights(w_seg=1.0, w_ctr=0.01, w_pin=1.0)
        probs = t64(probs_np).requires_grad_(True)
        loss = clustering_loss(probs, t64(centers), pairs, pairs, weights)
        loss.backward()
        grad = probs.grad.numpy()

        h = 1e-6
        for i, j in [(0, 0), (1, 2), (3, 1), (5, 3)]:
            plus, minus = probs_np.copy(), probs_np.copy()
            plus[i, j] += h
            minus[i, j] -= h
            fd = (
                clustering_loss(t64(plus), t64(centers), pairs, pairs, weights).item()
                - clustering_loss(t64(minus), t64(centers), pairs, pairs, weights).item()
            ) / (2 * h)
            scale = max(abs(fd), abs(grad[i, j]), 1e-8)
            assert abs(fd - grad[i, j]) / scale < 1e-4


class TestBalancePenalty:
    def test_uniform_mass_adds_nothing(self):
        probs = t64([[0.5, 0.5], [0.5, 0.5]])
        centers = t64([[0.0, 0.0], [1.0, 1.0]])
        weights = LossWeights(w_seg=0.0, w_ctr=0.0, w_pin=0.0, w_balance=1.0)
        assert clustering_loss(probs, centers, EMPTY, EMPTY, weights).item() == 0.0

    def test_skewed_mass_penalized(self):
        probs = t64([[1.0, 0.0], [1.0, 0.0]])
        centers = t64([[0.0, 0.0], [1.0, 1.0]])
        weights = LossWeights(w_seg=0.0, w_ctr=0.0, w_pin=0.0, w_balance=1.0)
        assert clustering_loss(probs, centers, EMPTY, EMPTY, weights).item() > 0.0

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError):
            LossWeights(w_seg=-1.0)


class TestGradientPenalty:
    def test_unit_norm_linear_critic_zero(self):
        critic = torch.nn.Linear(6, 1, dtype=torch.float64)
        with torch.no_grad():
            critic.weight.zero_()
            critic.weight[0, 0] = 1.0  # gradient is e_1 everywhere: norm exactly 1
            critic.bias.fill_(3.0)
        rng = torch.Generator().manual_seed(0)
        real = torch.rand(8, 6, dtype=torch.float64, generator=rng)
        fake = torch.rand(8, 6, dtype=torch.float64, generator=rng)
        assert gradient_penalty(critic, real, fake).item() < 1e-6

    def test_zero_critic_one_per_sample(self):
        critic = torch.nn.Linear(6, 1, dtype=torch.float64)
        with torch.no_grad():
            critic.weight.zero_()
            critic.bias.zero_()
        rng = torch.Generator().manual_seed(1)
        real = torch.rand(5, 6, dtype=torch.float64, generator=rng)
        fake = torch.rand(5, 6, dtype=torch.float64, generator=rng)
        assert abs(gradient_penalty(critic, real, fake).item() - 1.0) < 1e-6

    def test_mismatched_shapes(self):
        critic = torch.nn.Linear(4, 1)
        with pytest.raises(ValueError):
            gradient_penalty(critic, torch.zeros(3, 4), torch.zeros(2, 4))

    def test_matches_finite_difference_oracle(self):
        torch.manual_seed(2)
        critic = torch.nn.Sequential(
            torch.nn.Linear(4, 8), torch.nn.Tanh(), torch.nn.Linear(8, 1)
        ).to(torch.float64)
        rng = torch.Generator().manual_seed(7)
        real = torch.rand(6, 4, dtype=torch.float64, generator=rng)
        fake = torch.rand(6, 4, dtype=torch.float64, generator=rng)

        gen = torch.Generator().manual_seed(42)
        penalty = gradient_penalty(critic, real, fake, gen).item()

        # replay the same interpolates and estimate each gradient numerically
        gen2 = torch.Generator().manual_seed(42)
        eps = torch.rand(6, 1, dtype=torch.float64, generator=gen2)
        interp = eps * real + (1.0 - eps) * fake
        h = 1e-5
        deviations = []
        with torch.no_grad():
            for row in interp:
                grad = torch.zeros(4, dtype=torch.float64)
                for d in range(4):
                    plus, minus = row.clone(), row.clone()
                    plus[d] += h
                    minus[d] -= h
                    grad[d] = (critic(plus) - critic(minus)).item() / (2 * h)
                deviations.append((grad.norm().item() - 1.0) ** 2)
        assert abs(penalty - float(np.mean(deviations))) < 1e-3
