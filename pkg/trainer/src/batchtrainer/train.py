"""Adversarial training loop: five critic updates per generator update,
gradient-penalty Lipschitz regularization, the clustering objective on the
generator, and early stopping on a held-out conflict-collision metric."""

from __future__ import annotations

import copy
import math
from dataclasses import asdict, dataclass, field

import numpy as np
import torch

from layerbatch.model import GeneratorModel, save_model_file

from .dataset import TrainingSet
from .losses import LossWeights, clustering_loss, gradient_penalty
from .models import Critic, Generator, export_generator


class TrainingError(RuntimeError):
    """Training diverged (non-finite loss)."""

    def __init__(self, message: str, epoch: int):
        super().__init__(f"{message} at epoch {epoch}")
        self.epoch = epoch


@dataclass
class TrainConfig:
    hidden: int = 64
    w_seg: float = 1.0
    w_ctr: float = 0.01
    w_pin: float = 1.0
    w_balance: float = 0.0  # optional extension; off by default
    lambda_gp: float = 10.0
    critic_steps: int = 5
    lr: float = 3e-4
    beta1: float = 0.0
    beta2: float = 0.9
    max_epochs: int = 200
    patience: int = 20
    val_fraction: float = 0.2
    label_smoothing: float = 0.05
    seed: int = 0

    def __post_init__(self) -> None:
        if self.lambda_gp <= 0:
            raise ValueError("lambda_gp must be positive")
        self.loss_weights()  # validates non-negativity

    def loss_weights(self) -> LossWeights:
        return LossWeights(self.w_seg, self.w_ctr, self.w_pin, self.w_balance)


@dataclass
class EpochLog:
    epoch: int
    critic_loss: float
    gen_adv: float
    clustering: float
    val_collision: float


@dataclass
class TrainResult:
    model: GeneratorModel
    history: list[EpochLog] = field(default_factory=list)
    best_epoch: int = 0
    best_metric: float = math.nan


def collision_fraction(probs, pairs) -> float:
    """Fraction of listed pairs whose argmax assignments coincide."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if pairs.shape[0] == 0:
        return 0.0
    if isinstance(probs, torch.Tensor):
        probs = probs.detach().numpy()
    assign = np.argmax(probs, axis=1)
    return float(np.mean(assign[pairs[:, 0]] == assign[pairs[:, 1]]))


def _split_pairs(pairs: np.ndarray, fraction: float, rng: np.random.Generator):
    """Seeded split of conflict pairs into (training, validation)."""
    n = pairs.shape[0]
    if n == 0:
        return pairs, pairs
    n_val = min(n, max(1, round(fraction * n)))
    order = rng.permutation(n)
    val = pairs[np.sort(order[:n_val])]
    train = pairs[np.sort(order[n_val:])]
    if train.shape[0] == 0:  # degenerate split: validate on everything
        train = pairs
    return train, val


def write_training_log(history: list[EpochLog], stream) -> None:
    for entry in history:
        stream.write(
            " ".join(f"{key}={value}" for key, value in asdict(entry).items()) + "\n"
        )


def train(
    dataset: TrainingSet,
    config: TrainConfig = TrainConfig(),
    model_path: str | None = None,
    log_path: str | None = None,
) -> TrainResult:
    """Train a generator on the dataset and return the best model.

    The best model is the one with the lowest validation collision fraction
    seen so far (epoch 0 counts, so ``max_epochs=0`` exports the untrained
    network).  Training stops early after ``patience`` epochs without
    improvement and raises TrainingError if a loss turns non-finite.
    """
    if len(dataset) == 0:
        raise ValueError("dataset is empty")
    if dataset.n_batches < 2:
        raise ValueError("training needs at least 2 batches")

    torch.manual_seed(config.seed)
    generator = Generator(dataset.features.shape[1], dataset.n_batches, config.hidden)
    critic = Critic(dataset.features.shape[1], dataset.n_batches, config.hidden)
    opt_g = torch.optim.Adam(
        generator.parameters(), lr=config.lr, betas=(config.beta1, config.beta2)
    )
    opt_c = torch.optim.Adam(
        critic.parameters(), lr=config.lr, betas=(config.beta1, config.beta2)
    )

    features = torch.from_numpy(dataset.features)
    centers = torch.from_numpy(dataset.centers).to(torch.float32)
    one_hot = torch.nn.functional.one_hot(
        torch.from_numpy(dataset.labels), dataset.n_batches
    ).to(torch.float32)
    smooth = config.label_smoothing
    real_rows = torch.cat(
        [features, one_hot * (1.0 - smooth) + smooth / dataset.n_batches], dim=1
    )

    rng = np.random.default_rng(config.seed)
    train_pairs, val_pairs = _split_pairs(dataset.seg_pairs, config.val_fraction, rng)
    gp_rng = torch.Generator().manual_seed(config.seed + 1)
    weights = config.loss_weights()

    def val_metric() -> float:
        with torch.no_grad():
            return collision_fraction(generator(features), val_pairs)

    history = [EpochLog(0, math.nan, math.nan, math.nan, val_metric())]
    best_metric = history[0].val_collision
    best_epoch = 0
    best_state = copy.deepcopy(generator.state_dict())
    stale = 0

    for epoch in range(1, config.max_epochs + 1):
        critic_loss = math.nan
        for _ in range(config.critic_steps):
            with torch.no_grad():
                fake_rows = torch.cat([features, generator(features)], dim=1)
            loss_c = (
                critic(fake_rows).mean()
                - critic(real_rows).mean()
                + config.lambda_gp * gradient_penalty(critic, real_rows, fake_rows, gp_rng)
            )
            opt_c.zero_grad()
            loss_c.backward()
            opt_c.step()
            critic_loss = loss_c.item()

        probs = generator(features)
        adv = -critic(torch.cat([features, probs], dim=1)).mean()
        clus = clustering_loss(
            probs, centers, train_pairs, dataset.pin_pairs, weights, n_nets=len(dataset)
        )
        loss_g = adv + clus
        if not (math.isfinite(critic_loss) and math.isfinite(loss_g.item())):
            raise TrainingError("non-finite loss", epoch)
        opt_g.zero_grad()
        loss_g.backward()
        opt_g.step()

        metric = val_metric()
        history.append(EpochLog(epoch, critic_loss, adv.item(), clus.item(), metric))
        if metric < best_metric:
            best_metric = metric
            best_epoch = epoch
            best_state = copy.deepcopy(generator.state_dict())
            stale = 0
        else:
            stale += 1
            if stale >= config.patience:
                break

    generator.load_state_dict(best_state)
    model = export_generator(generator)
    if model_path is not None:
        save_model_file(model, model_path)
    if log_path is not None:
        with open(log_path, "w", encoding="utf-8") as fh:
            write_training_log(history, fh)
    return TrainResult(model, history, best_epoch, best_metric)
