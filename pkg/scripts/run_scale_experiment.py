#!/usr/bin/env python3
"""Batch-count and runtime comparison: pipeline vs greedy first-fit under
each overlap strategy, on synthetic instances of growing size.

Example:
    python3 scripts/run_scale_experiment.py --nets 10000 100000 --workers 8
"""

import argparse
import time

from layerbatch.baselines import greedy_first_fit
from layerbatch.netlist import GridDims, generate_synthetic
from layerbatch.pipeline import PipelineConfig, run_pipeline, validate_result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nets", type=int, nargs="+", default=[10_000, 50_000, 100_000])
    parser.add_argument("--grid", type=int, nargs=3, default=[128, 128, 8],
                        metavar=("XG", "YG", "LG"))
    parser.add_argument("--pins", type=int, nargs=2, default=[2, 3], metavar=("LO", "HI"))
    parser.add_argument("--workers", type=int, default=8)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    grid = GridDims(*args.grid)
    print(f"grid {grid.x_g}x{grid.y_g}x{grid.l_g}, pins {args.pins}, seed {args.seed}")
    header = f"{'nets':>8}  {'method':<16} {'batches':>8} {'time_s':>8}  valid"
    print(header)
    print("-" * len(header))
    for n in args.nets:
        netlist = generate_synthetic(grid, n, tuple(args.pins), seed=args.seed)
        result, stats = run_pipeline(netlist, PipelineConfig(workers=args.workers))
        ok = validate_result(result, netlist).ok
        print(
            f"{n:>8}  {'pipeline':<16} {stats.final_batch_count:>8} "
            f"{stats.stage_ms['total'] / 1000:>8.2f}  {ok}"
        )
        for strategy in ("layer_aware", "layer_agnostic", "bbox"):
            start = time.perf_counter()
            baseline = greedy_first_fit(netlist, strategy)
            elapsed = time.perf_counter() - start
            print(
                f"{n:>8}  {strategy:<16} {len(baseline.batches):>8} {elapsed:>8.2f}"
            )


if __name__ == "__main__":
    main()
