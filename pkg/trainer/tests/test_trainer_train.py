import io
import math

import numpy as np
import pytest
import torch

from batchtrainer.models import Generator, export_generator
from batchtrainer.train import (
    TrainConfig,
    TrainingError,
    collision_fraction,
    train,
    write_training_log,
)
from layerbatch.model import load_model, load_model_file, save_model

from toydata import toy_training_set


class TestCollisionFraction:
    def test_empty_pairs(self):
        assert collision_fraction(np.eye(3), np.empty((0, 2))) == 0.0

    def test_half_colliding(self):
        probs = np.array([[0.9, 0.1], [0.8, 0.2], [0.1, 0.9]])
        assert collision_fraction(probs, [[0, 1], [0, 2]]) == 0.5


class TestExportRoundTrip:
    @pytest.mark.parametrize("seed", [0, 3])
    def test_torch_and_engine_forward_agree(self, seed):
        torch.manual_seed(seed)
        generator = Generator(16, 5, hidden=32)
        buf = io.BytesIO()
        save_model(export_generator(generator), buf)
        buf.seek(0)
        reloaded = load_model(buf)

        probe = torch.rand(10, 16, generator=torch.Generator().manual_seed(seed + 1))
        with torch.no_grad():
            expected = generator(probe).numpy()
        np.testing.assert_allclose(reloaded.forward(probe.numpy()), expected, atol=1e-5)


class TestTrain:
    def test_improves_on_toy_dataset(self, trained_result):
        assert trained_result.best_metric < trained_result.history[0].val_collision

    def test_zero_epochs_writes_untrained_model(self, toy_dataset, tmp_path):
        path = tmp_path / "untrained.bin"
        result = train(toy_dataset, TrainConfig(max_epochs=0, seed=1), model_path=str(path))
        assert len(result.history) == 1
        model = load_model_file(str(path))
        assert model.n_batches == toy_dataset.n_batches

    def test_seed_reproducible_bit_for_bit(self):
        ds = toy_training_set(rows=20)
        cfg = TrainConfig(max_epochs=4, seed=5)
        blobs = []
        for _ in range(2):
            buf = io.BytesIO()
            save_model(train(ds, cfg).model, buf)
            blobs.append(buf.getvalue())
        assert blobs[0] == blobs[1]

    def test_non_finite_loss_raises_with_epoch(self):
        ds = toy_training_set(rows=20)
        ds.features[0, 0] = math.nan
        with pytest.raises(TrainingError, match="epoch 1") as exc:
            train(ds, TrainConfig(max_epochs=3, seed=0))
        assert exc.value.epoch == 1

    def test_empty_dataset_rejected(self, toy_dataset):
        with pytest.raises(ValueError):
            train(type(toy_dataset)(examples=[], n_batches=2), TrainConfig(max_epochs=1))

    def test_invalid_config(self):
        with pytest.raises(ValueError):
            TrainConfig(lambda_gp=0.0)
        with pytest.raises(ValueError):
            TrainConfig(w_ctr=-1.0)

    def test_log_format(self, toy_dataset, tmp_path):
        result = train(toy_dataset, TrainConfig(max_epochs=2, seed=2))
        buf = io.StringIO()
        write_training_log(result.history, buf)
        lines = buf.getvalue().splitlines()
        assert len(lines) == len(result.history)
        assert lines[0].startswith("epoch=0 ")
        for key in ("critic_loss=", "gen_adv=", "clustering=", "val_collision="):
            assert key in lines[1]
