import pytest

from batchtrainer.train import TrainConfig, train

import toydata


@pytest.fixture(scope="session")
def toy_dataset():
    return toydata.toy_training_set()


@pytest.fixture(scope="session")
def trained_result(toy_dataset):
    return train(toy_dataset, TrainConfig(max_epochs=120, patience=30, seed=0))
