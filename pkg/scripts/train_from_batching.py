#!/usr/bin/env python3
"""End-to-end model loop: batch a synthetic netlist, export training data,
train a generator on it, then compare the trained model's conflict-free
fraction against the model-free fallback on a fresh instance.

Requires the trainer package (``pip install -e trainer --no-build-isolation``).

Example:
    python3 scripts/train_from_batching.py --nets 5000 --epochs 100
"""

import argparse
import tempfile
from pathlib import Path

from batchtrainer.dataset import load_training_set
from batchtrainer.train import TrainConfig, train
from layerbatch.netlist import GridDims, generate_synthetic
from layerbatch.pipeline import PipelineConfig, run_pipeline
from layerbatch.training_export import write_training_export


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nets", type=int, default=5000)
    parser.add_argument("--grid", type=int, nargs=3, default=[64, 64, 4],
                        metavar=("XG", "YG", "LG"))
    parser.add_argument("--min-batch-size", type=int, default=20,
                        help="reference batches smaller than this are dropped")
    parser.add_argument("--epochs", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workdir", help="keep intermediate files here")
    args = parser.parse_args()

    grid = GridDims(*args.grid)
    netlist = generate_synthetic(grid, args.nets, (2, 3), seed=args.seed)
    result, stats = run_pipeline(netlist, PipelineConfig(workers=4, seed=args.seed))
    print(f"reference batching: {stats.final_batch_count} batches, "
          f"conflict-free fraction {stats.conflict_free_fraction:.3f}")

    workdir = Path(args.workdir) if args.workdir else Path(tempfile.mkdtemp())
    workdir.mkdir(parents=True, exist_ok=True)
    prefix = str(workdir / "export")
    nets_path, edges_path = write_training_export(
        result, netlist, prefix, min_batch_size=args.min_batch_size
    )
    dataset = load_training_set(nets_path, edges_path, min_batch_size=args.min_batch_size)
    print(f"training set: {len(dataset)} nets, {dataset.n_batches} reference batches, "
          f"{dataset.seg_pairs.shape[0]} conflict pairs")

    model_path = workdir / "model.bin"
    outcome = train(
        dataset,
        TrainConfig(max_epochs=args.epochs, seed=args.seed),
        model_path=str(model_path),
        log_path=str(workdir / "train.log"),
    )
    print(f"trained: best epoch {outcome.best_epoch}, "
          f"validation collision {outcome.best_metric:.3f} "
          f"(epoch 0: {outcome.history[0].val_collision:.3f})")

    holdout = generate_synthetic(grid, args.nets, (2, 3), seed=args.seed + 1)
    _, with_model = run_pipeline(holdout, PipelineConfig(model=outcome.model, workers=4))
    _, fallback = run_pipeline(
        holdout,
        PipelineConfig(n_batches=outcome.model.n_batches, workers=4, seed=args.seed),
    )
    print(f"hold-out conflict-free fraction: model {with_model.conflict_free_fraction:.3f} "
          f"vs fallback {fallback.conflict_free_fraction:.3f}")
    print(f"artifacts in {workdir}")


if __name__ == "__main__":
    main()
