"""Training-dataset export: per-net records plus the conflict edge list.

Two files are written for a batching result:

* ``<prefix>.nets`` -- a ``grid`` header, then per retained net a
  ``net <id> <batch> <hpwl>`` line followed by its ``pin`` and
  ``hseg``/``vseg`` lines (same geometry syntax as the netlist format).
* ``<prefix>.edges`` -- layer-aware conflict pairs ``<i> <j>`` among the
  retained nets, one per line.

Only nets from batches of at least ``min_batch_size`` nets are exported.
"""

from __future__ import annotations

from .netlist import Netlist, Orientation
from .overlap import build_conflict_graph
from .reallocator import BatchingResult

DEFAULT_MIN_BATCH_SIZE = 160


def write_training_export(
    result: BatchingResult,
    netlist: Netlist,
    prefix: str,
    min_batch_size: int = DEFAULT_MIN_BATCH_SIZE,
) -> tuple[str, str]:
    """Write the two export files; returns their paths."""
    batch_of: dict[int, int] = {}
    for b, batch in enumerate(result.batches):
        if len(batch) >= min_batch_size:
            for nid in batch:
                batch_of[nid] = b

    nets_path = f"{prefix}.nets"
    edges_path = f"{prefix}.edges"
    grid = netlist.grid
    with open(nets_path, "w", encoding="utf-8") as fh:
        fh.write(f"grid {grid.x_g} {grid.y_g} {grid.l_g}\n")
        for net in netlist.nets:
            if net.id not in batch_of:
                continue
            fh.write(f"net {net.id} {batch_of[net.id]} {net.hpwl}\n")
            for p in net.pins:
                fh.write(f"pin {p.x} {p.y} {p.layer}\n")
            for s in net.segments:
                kind = "hseg" if s.orientation is Orientation.HORIZONTAL else "vseg"
                fh.write(f"{kind} {s.layer} {s.fixed} {s.lo} {s.hi}\n")

    graph = build_conflict_graph(netlist, "layer_aware")
    with open(edges_path, "w", encoding="utf-8") as fh:
        for i, j in sorted(graph.edges):
            if i in batch_of and j in batch_of:
                fh.write(f"{i} {j}\n")
    return nets_path, edges_path
