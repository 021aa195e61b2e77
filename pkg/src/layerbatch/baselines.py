"""Greedy first-fit batching under each overlap predicate.

These are the comparison baselines: nets are visited in ascending id order
and dropped into the first batch with no conflict, opening a new batch
otherwise.  The cell-sharing predicates are accelerated with per-cell batch
bitmasks (conflict with a batch equals conflict with its footprint union,
so the result is identical to pairwise member checks); the bbox baseline
keeps literal pairwise checks.
"""

from __future__ import annotations

import numpy as np

from .netlist import Netlist
from .occupancy import net_cell_indices
from .overlap import STRATEGIES, bounding_box, footprint_2d
from .reallocator import BatchingResult, BatchStats


def greedy_first_fit(netlist: Netlist, strategy: str) -> BatchingResult:
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "bbox":
        batches = _first_fit_bbox(netlist)
    else:
        batches = _first_fit_cells(netlist, layer_aware=strategy == "layer_aware")
    stats = BatchStats(initial_batches=len(batches))
    return BatchingResult(batches=batches, stats=stats)


def _first_fit_bbox(netlist: Netlist) -> list[list[int]]:
    batches: list[list[int]] = []
    boxes: list[tuple[int, int, int, int]] = [bounding_box(n) for n in netlist.nets]
    batch_boxes: list[list[tuple[int, int, int, int]]] = []
    for net in netlist.nets:
        x0, y0, x1, y1 = boxes[net.id]
        for b, members in enumerate(batch_boxes):
            if not any(
                x0 <= ox1 and ox0 <= x1 and y0 <= oy1 and oy0 <= y1
                for ox0, oy0, ox1, oy1 in members
            ):
                batches[b].append(net.id)
                members.append(boxes[net.id])
                break
        else:
            batches.append([net.id])
            batch_boxes.append([boxes[net.id]])
    return batches


def _first_fit_cells(netlist: Netlist, layer_aware: bool) -> list[list[int]]:
    # cell -> bitmask of batches whose footprint covers it
    grid = netlist.grid
    n_cells = grid.n_cells if layer_aware else grid.x_g * grid.y_g
    masks = [0] * n_cells
    batches: list[list[int]] = []
    for net in netlist.nets:
        idx = net_cell_indices(net, grid)
        if layer_aware:
            cells = np.unique(idx)
        else:
            plane = grid.x_g * grid.y_g
            cells = np.unique(idx % plane)
        occupied = 0
        for c in cells.tolist():
            occupied |= masks[c]
        free = ~occupied & ((1 << len(batches)) - 1)
        if free:
            b = (free & -free).bit_length() - 1
            batches[b].append(net.id)
        else:
            b = len(batches)
            batches.append([net.id])
        bit = 1 << b
        for c in cells.tolist():
            masks[c] |= bit
    return batches
