"""Command-line front end.

Subcommands: ``gen``, ``batch``, ``validate``, ``compare``,
``export-training``.  Exit codes: 0 success, 1 validation failure,
2 usage error (argparse), 3 I/O or file-format error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .model import load_model_file
from .netlist import (
    GridDims,
    generate_synthetic,
    parse_netlist,
    serialize_netlist,
)
from .occupancy import DEFAULT_DENSE_THRESHOLD
from .pipeline import (
    PipelineConfig,
    compare_strategies,
    read_batches,
    run_pipeline,
    validate_result,
    write_batches,
)
from .training_export import DEFAULT_MIN_BATCH_SIZE, write_training_export

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 3


def _positive(value: str) -> int:
    n = int(value)
    if n <= 0:
        raise argparse.ArgumentTypeError(f"{value} is not a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="layerbatch",
        description="Layer-aware net batching for parallel global routing",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic netlist")
    p.add_argument("--grid", nargs=3, type=_positive, required=True, metavar=("X", "Y", "L"))
    p.add_argument("--nets", type=_positive, required=True)
    p.add_argument("--pins", nargs=2, type=_positive, default=(2, 8), metavar=("LO", "HI"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("batch", help="run the full batching pipeline")
    p.add_argument("--netlist", required=True)
    p.add_argument("--model", default=None, help="generator model file (fallback if absent)")
    p.add_argument("-B", "--batches", type=_positive, default=30, dest="n_batches")
    p.add_argument("--max-batch-size", type=_positive, default=4096)
    p.add_argument("--threshold", type=_positive, default=DEFAULT_DENSE_THRESHOLD)
    p.add_argument("--workers", type=_positive, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="batch output file")
    p.add_argument("--stats", default=None, help="stats base path (writes .txt and .json)")

    p = sub.add_parser("validate", help="check a batch file against its netlist")
    p.add_argument("--netlist", required=True)
    p.add_argument("--batches", required=True)

    p = sub.add_parser("compare", help="compare the three overlap strategies")
    p.add_argument("--netlist", required=True)
    p.add_argument("--workers", type=_positive, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="optional JSON output path")

    p = sub.add_parser("export-training", help="write training dataset files")
    p.add_argument("--netlist", required=True)
    p.add_argument("--batches", required=True)
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--min-batch-size", type=_positive, default=DEFAULT_MIN_BATCH_SIZE)
    return parser


def _load_netlist(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_netlist(fh)


def cmd_gen(args) -> int:
    netlist = generate_synthetic(
        GridDims(*args.grid), args.nets, tuple(args.pins), args.seed
    )
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(serialize_netlist(netlist))
    print(f"wrote {len(netlist.nets)} nets to {args.out}")
    return EXIT_OK


def cmd_batch(args) -> int:
    netlist = _load_netlist(args.netlist)
    model = load_model_file(args.model) if args.model else None
    config = PipelineConfig(
        model=model,
        n_batches=args.n_batches,
        max_batch_size=args.max_batch_size,
        dense_threshold=args.threshold,
        workers=args.workers,
        seed=args.seed,
    )
    result, stats = run_pipeline(netlist, config)
    report = validate_result(result, netlist)
    if not report.ok:
        print(report.describe(), file=sys.stderr)
        return EXIT_INVALID
    with open(args.out, "w", encoding="utf-8") as fh:
        write_batches(result, fh)
    if args.stats:
        with open(args.stats + ".txt", "w", encoding="utf-8") as fh:
            fh.write(stats.to_text())
        with open(args.stats + ".json", "w", encoding="utf-8") as fh:
            fh.write(stats.to_json())
    print(stats.to_text(), end="")
    return EXIT_OK


def cmd_validate(args) -> int:
    netlist = _load_netlist(args.netlist)
    with open(args.batches, "r", encoding="utf-8") as fh:
        result = read_batches(fh)
    report = validate_result(result, netlist)
    if report.ok:
        print("valid")
        return EXIT_OK
    print(report.describe(), file=sys.stderr)
    return EXIT_INVALID


def cmd_compare(args) -> int:
    netlist = _load_netlist(args.netlist)
    config = PipelineConfig(workers=args.workers, seed=args.seed)
    table = compare_strategies(netlist, config)
    for name, row in table.items():
        print(f"{name:16s} batches={int(row['batches']):6d} time_ms={row['time_ms']:.1f}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(table, fh, indent=2)
    return EXIT_OK


def cmd_export_training(args) -> int:
    netlist = _load_netlist(args.netlist)
    with open(args.batches, "r", encoding="utf-8") as fh:
        result = read_batches(fh)
    report = validate_result(result, netlist)
    if not report.ok:
        print(report.describe(), file=sys.stderr)
        return EXIT_INVALID
    nets_path, edges_path = write_training_export(
        result, netlist, args.out_prefix, args.min_batch_size
    )
    print(f"wrote {nets_path} and {edges_path}")
    return EXIT_OK


_HANDLERS = {
    "gen": cmd_gen,
    "batch": cmd_batch,
    "validate": cmd_validate,
    "compare": cmd_compare,
    "export-training": cmd_export_training,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ValueError as exc:  # ParseError, ValidationError, GenerationError, ...
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
