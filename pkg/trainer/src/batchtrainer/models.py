"""Torch generator and critic networks.

The generator mirrors, layer for layer, the forward semantics of the
engine's binary weight format: ``z = x @ W + b``, optional parameter-free
layer norm (eps 1e-5), leaky-ReLU or identity activation, optional residual
add, and a final softmax.  ``export_generator`` converts the torch weights
into the engine's in-memory model so the file written by the trainer and
the torch network agree on every input.
"""

from __future__ import annotations

import torch
import torch.nn.functional as F
from torch import nn

from layerbatch.model import LAYER_NORM_EPS, GeneratorModel, Layer

LEAKY_SLOPE = 0.2


class GeneratorLayer(nn.Module):
    def __init__(
        self,
        in_dim: int,
        out_dim: int,
        activation: str,
        residual: bool,
        layer_norm: bool,
    ):
        super().__init__()
        if residual and in_dim != out_dim:
            raise ValueError("residual layer needs matching input/output width")
        self.linear = nn.Linear(in_dim, out_dim)
        self.activation = activation
        self.residual = residual
        self.layer_norm = layer_norm

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        z = self.linear(x)
        if self.layer_norm:
            z = F.layer_norm(z, (z.shape[-1],), eps=LAYER_NORM_EPS)
        if self.activation != "linear":
            z = F.leaky_relu(z, negative_slope=float(self.activation.split(":", 1)[1]))
        if self.residual:
            z = z + x
        return z


class Generator(nn.Module):
    """Five-layer residual MLP from 16 pin features to B batch probabilities."""

    def __init__(self, feature_dim: int = 16, n_batches: int = 30, hidden: int = 64):
        super().__init__()
        tag = f"leaky_relu:{LEAKY_SLOPE}"
        self.feature_dim = feature_dim
        self.n_batches = n_batches
        self.blocks = nn.ModuleList(
            [
                GeneratorLayer(feature_dim, hidden, tag, residual=False, layer_norm=True),
                GeneratorLayer(hidden, hidden, tag, residual=True, layer_norm=True),
                GeneratorLayer(hidden, hidden, tag, residual=True, layer_norm=True),
                GeneratorLayer(hidden, hidden, tag, residual=True, layer_norm=True),
                GeneratorLayer(hidden, n_batches, "linear", residual=False, layer_norm=False),
            ]
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        for block in self.blocks:
            x = block(x)
        return torch.softmax(x, dim=-1)


class Critic(nn.Module):
    """Eight-layer MLP scoring (features ++ assignment row) as real/fake."""

    def __init__(self, feature_dim: int = 16, n_batches: int = 30, hidden: int = 64):
        super().__init__()
        dims = [feature_dim + n_batches] + [hidden] * 7
        layers: list[nn.Module] = []
        for i in range(7):
            layers.append(nn.Linear(dims[i], dims[i + 1]))
            layers.append(nn.LeakyReLU(LEAKY_SLOPE))
        layers.append(nn.Linear(hidden, 1))
        self.net = nn.Sequential(*layers)

    def forward(self, rows: torch.Tensor) -> torch.Tensor:
        return self.net(rows)


def export_generator(generator: Generator) -> GeneratorModel:
    """Convert torch weights into the engine's model representation."""
    layers = []
    for block in generator.blocks:
        layers.append(
            Layer(
                weights=block.linear.weight.detach().numpy().T.astype("float32").copy(),
                bias=block.linear.bias.detach().numpy().astype("float32").copy(),
                activation=block.activation,
                residual=block.residual,
                layer_norm=block.layer_norm,
            )
        )
    return GeneratorModel(layers, generator.feature_dim, generator.n_batches)
