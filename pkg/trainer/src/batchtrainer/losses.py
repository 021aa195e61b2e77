"""Differentiable training losses: the clustering objective over conflict
and shared-pin pairs, an optional cluster-balance penalty, and the WGAN
gradient penalty."""

from __future__ import annotations

from dataclasses import dataclass

import torch


@dataclass
class LossWeights:
    w_seg: float = 1.0
    w_ctr: float = 0.01
    w_pin: float = 1.0
    w_balance: float = 0.0  # optional extension; off by default

    def __post_init__(self) -> None:
        if min(self.w_seg, self.w_ctr, self.w_pin, self.w_balance) < 0:
            raise ValueError("loss weights must be non-negative")


def _as_tensor(value, dtype=None) -> torch.Tensor:
    if isinstance(value, torch.Tensor):
        return value if dtype is None else value.to(dtype)
    return torch.as_tensor(value, dtype=dtype)


def _pair_products(probs: torch.Tensor, pairs: torch.Tensor) -> torch.Tensor:
    """Per-pair elementwise products p_i^b * p_j^b, shape (n_pairs, B)."""
    return probs[pairs[:, 0]] * probs[pairs[:, 1]]


def clustering_loss(
    probs,
    centers,
    seg_pairs,
    pin_pairs,
    weights: LossWeights = LossWeights(),
    n_nets: int | None = None,
) -> torch.Tensor:
    """Penalty for co-assigning nets that cannot share a batch.

    With N nets, assignment rows p and batch index b:

    * segment term: (w_seg/N) * sum over conflict pairs of sum_b (p_i^b p_j^b)^2
    * center term:  (w_ctr/N) * sum over conflict pairs of
      sum_b (p_i^b p_j^b) * ||c_i - c_j||^2
    * pin term:     (w_pin/N) * sum over shared-pin pairs of sum_b (p_i^b p_j^b)^2
      (one pair entry per shared pin location)
    * optional balance term: w_balance * variance of per-batch mean mass

    Zero when every listed pair has disjoint assignment supports; invariant
    under a batch-index permutation applied to all rows.
    """
    probs = _as_tensor(probs)
    centers = _as_tensor(centers, probs.dtype)
    seg_pairs = _as_tensor(seg_pairs, torch.long).reshape(-1, 2)
    pin_pairs = _as_tensor(pin_pairs, torch.long).reshape(-1, 2)
    if probs.ndim != 2:
        raise ValueError(f"probs must be (n, B), got shape {tuple(probs.shape)}")
    if centers.shape != (probs.shape[0], 2):
        raise ValueError(
            f"centers shape {tuple(centers.shape)} does not match {probs.shape[0]} nets"
        )
    n = n_nets if n_nets is not None else probs.shape[0]

    total = probs.new_zeros(())
    if seg_pairs.shape[0]:
        q = _pair_products(probs, seg_pairs)
        total = total + weights.w_seg * (q**2).sum()
        if weights.w_ctr:
            delta = centers[seg_pairs[:, 0]] - centers[seg_pairs[:, 1]]
            dist2 = (delta**2).sum(dim=1)
            total = total + weights.w_ctr * (q.sum(dim=1) * dist2).sum()
    if pin_pairs.shape[0]:
        qp = _pair_products(probs, pin_pairs)
        total = total + weights.w_pin * (qp**2).sum()
    total = total / n
    if weights.w_balance:
        total = total + weights.w_balance * probs.mean(dim=0).var(unbiased=False)
    return total


def gradient_penalty(
    critic,
    real: torch.Tensor,
    fake: torch.Tensor,
    generator: torch.Generator | None = None,
) -> torch.Tensor:
    """Mean squared deviation of the critic's gradient norm from 1, measured
    at uniform random interpolates between real and fake rows."""
    if real.shape != fake.shape:
        raise ValueError(f"row shapes differ: {tuple(real.shape)} vs {tuple(fake.shape)}")
    eps = torch.rand(real.shape[0], 1, dtype=real.dtype, generator=generator)
    interp = (eps * real + (1.0 - eps) * fake).detach().requires_grad_(True)
    scores = critic(interp)
    grads = torch.autograd.grad(
        scores.sum(), interp, create_graph=True, retain_graph=True, allow_unused=True
    )[0]
    if grads is None:  # critic ignores its input entirely
        grads = torch.zeros_like(interp)
    norms = grads.reshape(grads.shape[0], -1).norm(2, dim=1)
    return ((norms - 1.0) ** 2).mean()
