"""Command-line entry point: train a generator model from export files."""

from __future__ import annotations

import argparse
import sys

from .dataset import DatasetError, load_training_set
from .train import TrainConfig, TrainingError, train

EXIT_OK = 0
EXIT_ERROR = 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="layerbatch-train",
        description="Train a batch-assignment generator from batching exports",
    )
    parser.add_argument("--nets", required=True, help="<prefix>.nets export file")
    parser.add_argument("--edges", required=True, help="<prefix>.edges export file")
    parser.add_argument("--model-out", required=True, help="output model file")
    parser.add_argument("--log", help="training-log output file")
    parser.add_argument("--min-batch-size", type=int, default=160)
    parser.add_argument("--epochs", type=int, default=200)
    parser.add_argument("--patience", type=int, default=20)
    parser.add_argument("--hidden", type=int, default=64)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--w-seg", type=float, default=1.0)
    parser.add_argument("--w-ctr", type=float, default=0.01)
    parser.add_argument("--w-pin", type=float, default=1.0)
    parser.add_argument("--w-balance", type=float, default=0.0)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = TrainConfig(
        hidden=args.hidden,
        w_seg=args.w_seg,
        w_ctr=args.w_ctr,
        w_pin=args.w_pin,
        w_balance=args.w_balance,
        max_epochs=args.epochs,
        patience=args.patience,
        seed=args.seed,
    )
    try:
        dataset = load_training_set(args.nets, args.edges, args.min_batch_size)
        result = train(dataset, config, model_path=args.model_out, log_path=args.log)
    except (DatasetError, TrainingError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(
        f"trained on {len(dataset)} nets, {dataset.n_batches} batches; "
        f"best epoch {result.best_epoch} "
        f"(validation collision {result.best_metric:.4f}); "
        f"model written to {args.model_out}"
    )
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
