"""Adversarial trainer producing batch-assignment generator models in the
engine's shared weight format."""

from .dataset import (
    DatasetError,
    TrainingExample,
    TrainingSet,
    build_training_set,
    load_training_set,
)
from .losses import LossWeights, clustering_loss, gradient_penalty
from .models import Critic, Generator, export_generator
from .train import (
    EpochLog,
    TrainConfig,
    TrainingError,
    TrainResult,
    collision_fraction,
    train,
    write_training_log,
)

__version__ = "0.1.0"

__all__ = [
    "DatasetError",
    "TrainingExample",
    "TrainingSet",
    "build_training_set",
    "load_training_set",
    "LossWeights",
    "clustering_loss",
    "gradient_penalty",
    "Critic",
    "Generator",
    "export_generator",
    "EpochLog",
    "TrainConfig",
    "TrainingError",
    "TrainResult",
    "collision_fraction",
    "train",
    "write_training_log",
]
