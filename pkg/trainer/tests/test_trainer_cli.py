import pytest

from batchtrainer.cli import main
from layerbatch.model import load_model_file

from toydata import toy_export


@pytest.fixture
def export_files(tmp_path):
    nets_txt, edges_txt = toy_export(seed=0, rows=30)
    nets = tmp_path / "toy.nets"
    edges = tmp_path / "toy.edges"
    nets.write_text(nets_txt)
    edges.write_text(edges_txt)
    return nets, edges


def test_trains_and_writes_model(tmp_path, export_files, capsys):
    nets, edges = export_files
    model_path = tmp_path / "model.bin"
    log_path = tmp_path / "train.log"
    code = main(
        [
            "--nets", str(nets),
            "--edges", str(edges),
            "--model-out", str(model_path),
            "--log", str(log_path),
            "--min-batch-size", "0",
            "--epochs", "3",
            "--seed", "0",
        ]
    )
    assert code == 0
    assert "best epoch" in capsys.readouterr().out
    model = load_model_file(str(model_path))
    assert model.n_batches == 2
    assert log_path.read_text().startswith("epoch=0 ")


def test_empty_retained_set_fails(tmp_path, export_files, capsys):
    nets, edges = export_files
    code = main(
        [
            "--nets", str(nets),
            "--edges", str(edges),
            "--model-out", str(tmp_path / "m.bin"),
            "--min-batch-size", "1000",
        ]
    )
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_missing_file_fails(tmp_path):
    code = main(
        [
            "--nets", str(tmp_path / "missing.nets"),
            "--edges", str(tmp_path / "missing.edges"),
            "--model-out", str(tmp_path / "m.bin"),
        ]
    )
    assert code == 1
