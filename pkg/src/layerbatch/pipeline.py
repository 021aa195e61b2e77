"""End-to-end orchestration: initial assignment, evaluation, reallocation,
plus the validity oracle and the three-strategy comparison."""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field

import numpy as np

from .baselines import greedy_first_fit
from .batcher import assign_batches, fallback_assign, group_assignment
from .evaluator import evaluate_batches
from .model import GeneratorModel
from .netlist import Netlist
from .occupancy import (
    DEFAULT_DENSE_THRESHOLD,
    net_cell_indices,
    select_representation,
)
from .reallocator import BatchingResult, reallocate


@dataclass
class PipelineConfig:
    model: GeneratorModel | None = None
    n_batches: int = 30
    max_batch_size: int = 4096
    dense_threshold: int = DEFAULT_DENSE_THRESHOLD
    workers: int | None = None  # None -> os.cpu_count()
    seed: int = 0
    chunk: int | None = None  # None -> adaptive chunk size

    def resolved_workers(self) -> int:
        return self.workers if self.workers is not None else (os.cpu_count() or 1)


@dataclass
class PipelineStats:
    n_nets: int = 0
    n_initial_batches: int = 0
    conflict_free_fraction: float = 0.0
    rerouted: int = 0
    new_batches: int = 0
    consolidation_merges: int = 0
    final_batch_count: int = 0
    representation: str = ""
    workers: int = 1
    stage_ms: dict[str, float] = field(default_factory=dict)

    def as_flat_dict(self) -> dict[str, object]:
        out: dict[str, object] = {
            "n_nets": self.n_nets,
            "n_initial_batches": self.n_initial_batches,
            "conflict_free_fraction": round(self.conflict_free_fraction, 6),
            "rerouted": self.rerouted,
            "new_batches": self.new_batches,
            "consolidation_merges": self.consolidation_merges,
            "final_batch_count": self.final_batch_count,
            "representation": self.representation,
            "workers": self.workers,
        }
        for stage, ms in self.stage_ms.items():
            out[f"time_ms_{stage}"] = round(ms, 3)
        return out

    def to_text(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in self.as_flat_dict().items())

    def to_json(self) -> str:
        return json.dumps(self.as_flat_dict(), indent=2) + "\n"


def run_pipeline(
    netlist: Netlist, config: PipelineConfig
) -> tuple[BatchingResult, PipelineStats]:
    n = len(netlist.nets)
    workers = config.resolved_workers()
    stats = PipelineStats(n_nets=n, workers=workers)

    t0 = time.perf_counter()
    if config.model is not None:
        assignment = assign_batches(netlist, config.model, chunk=config.chunk)
        n_batches = config.model.n_batches
    else:
        n_batches = config.n_batches
        assignment = fallback_assign(netlist, n_batches, seed=config.seed)
    initial = group_assignment(assignment, n_batches)
    stats.n_initial_batches = n_batches
    t1 = time.perf_counter()

    representation = select_representation(workers, netlist.grid, config.dense_threshold)
    stats.representation = representation.value
    cells = {net.id: net_cell_indices(net, netlist.grid) for net in netlist.nets}
    evaluation = evaluate_batches(
        initial, netlist, representation, workers=workers, cells=cells
    )
    accepted_count = sum(len(b) for b in evaluation.accepted)
    stats.conflict_free_fraction = accepted_count / n if n else 1.0
    stats.rerouted = len(evaluation.nets2reroute)
    t2 = time.perf_counter()

    result = reallocate(
        evaluation.nets2reroute,
        evaluation.accepted,
        netlist,
        config.max_batch_size,
        representation,
        cells=cells,
    )
    stats.new_batches = result.stats.new_batches
    stats.consolidation_merges = result.stats.consolidation_merges
    stats.final_batch_count = len(result.batches)
    t3 = time.perf_counter()

    stats.stage_ms = {
        "initial_batching": (t1 - t0) * 1e3,
        "evaluation": (t2 - t1) * 1e3,
        "reallocation": (t3 - t2) * 1e3,
        "total": (t3 - t0) * 1e3,
    }
    return result, stats


@dataclass
class ValidityReport:
    missing: list[int] = field(default_factory=list)
    duplicated: list[int] = field(default_factory=list)
    unknown: list[int] = field(default_factory=list)
    conflicts: list[tuple[int, int, int]] = field(default_factory=list)  # (batch, i, j)

    @property
    def ok(self) -> bool:
        return not (self.missing or self.duplicated or self.unknown or self.conflicts)

    def describe(self) -> str:
        if self.ok:
            return "valid"
        lines = []
        if self.missing:
            lines.append(f"missing nets: {self.missing[:20]}")
        if self.duplicated:
            lines.append(f"duplicated nets: {self.duplicated[:20]}")
        if self.unknown:
            lines.append(f"unknown net ids: {self.unknown[:20]}")
        for b, i, j in self.conflicts[:20]:
            lines.append(f"conflict in batch {b}: nets {i} and {j}")
        return "\n".join(lines)


def validate_result(result: BatchingResult, netlist: Netlist) -> ValidityReport:
    """All-pairs layer-aware oracle plus exact partition checks."""
    report = ValidityReport()
    n = len(netlist.nets)
    seen: dict[int, int] = {}
    for b, batch in enumerate(result.batches):
        for nid in batch:
            if not 0 <= nid < n:
                report.unknown.append(nid)
                continue
            if nid in seen:
                report.duplicated.append(nid)
            seen[nid] = b
    report.missing = [nid for nid in range(n) if nid not in seen]

    footprints = {
        net.id: frozenset(np.unique(net_cell_indices(net, netlist.grid)).tolist())
        for net in netlist.nets
    }
    for b, batch in enumerate(result.batches):
        ids = [nid for nid in batch if 0 <= nid < n]
        for i in range(len(ids)):
            fi = footprints[ids[i]]
            for j in range(i + 1, len(ids)):
                if not fi.isdisjoint(footprints[ids[j]]):
                    report.conflicts.append((b, ids[i], ids[j]))
    return report


def compare_strategies(
    netlist: Netlist, config: PipelineConfig
) -> dict[str, dict[str, float]]:
    """Batch counts and times for the three first-fit baselines and the
    full pipeline."""
    out: dict[str, dict[str, float]] = {}
    for strategy in ("bbox", "layer_agnostic", "layer_aware"):
        t0 = time.perf_counter()
        result = greedy_first_fit(netlist, strategy)
        ms = (time.perf_counter() - t0) * 1e3
        out[strategy] = {"batches": len(result.batches), "time_ms": round(ms, 3)}
    t0 = time.perf_counter()
    result, _ = run_pipeline(netlist, config)
    ms = (time.perf_counter() - t0) * 1e3
    out["pipeline"] = {"batches": len(result.batches), "time_ms": round(ms, 3)}
    return out


def write_batches(result: BatchingResult, stream) -> None:
    for b, batch in enumerate(result.batches):
        stream.write(f"batch {b}: {' '.join(str(nid) for nid in batch)}\n")


def read_batches(lines) -> BatchingResult:
    batches = []
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(":")
        if not head.startswith("batch"):
            raise ValueError(f"malformed batch line: {line!r}")
        batches.append([int(t) for t in rest.split()])
    return BatchingResult(batches=batches)
