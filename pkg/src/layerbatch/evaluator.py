"""Parallel layer-aware evaluation of initial batches.

Each batch is screened against a fresh occupancy map: nets are visited in
ascending id order, a colliding net goes to the reroute list, an accepted
net marks its pins and segments.  Batches are independent work units; one
map per worker, results merged in batch-index order so the outcome never
depends on scheduling.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .netlist import Net, Netlist
from .occupancy import OccupancyMap, Representation, net_cell_indices


@dataclass
class EvaluationResult:
    accepted: list[list[int]]
    nets2reroute: list[int] = field(default_factory=list)


def conflict_detected(occ: OccupancyMap, net: Net) -> bool:
    """True iff any pin or segment cell of the net is already marked."""
    return occ.any_marked(net_cell_indices(net, occ.grid))


def evaluate_batches(
    batches: list[list[int]],
    netlist: Netlist,
    representation: Representation,
    workers: int = 1,
    cells: dict[int, np.ndarray] | None = None,
) -> EvaluationResult:
    """Split each batch into accepted nets and nets needing reroute.

    ``cells`` optionally carries precomputed per-net linear cell indices so
    repeated phases over the same netlist skip the geometry walk.
    """
    by_id = netlist.nets
    for batch in batches:
        for nid in batch:
            if not 0 <= nid < len(by_id):
                raise ValueError(f"net id {nid} not in netlist")
    if cells is None:
        cells = {}

    def cell_of(nid: int) -> np.ndarray:
        idx = cells.get(nid)
        if idx is None:
            idx = net_cell_indices(by_id[nid], netlist.grid)
            cells[nid] = idx
        return idx

    def screen(batch: list[int]) -> tuple[list[int], list[int]]:
        occ = OccupancyMap(netlist.grid, representation)
        accepted: list[int] = []
        rerouted: list[int] = []
        for nid in sorted(batch):
            idx = cell_of(nid)
            if occ.any_marked(idx):
                rerouted.append(nid)
            else:
                occ.mark_many(idx)
                accepted.append(nid)
        return accepted, rerouted

    if workers <= 1:
        results = [screen(batch) for batch in batches]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(screen, batches))

    out = EvaluationResult(accepted=[r[0] for r in results])
    for _, rerouted in results:
        out.nets2reroute.extend(rerouted)
    return out
