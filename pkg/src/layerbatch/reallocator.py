"""Greedy reinsertion of conflicting nets: first-fit into existing batches,
exhaustive creation of new batches for leftovers, and consolidation of
small batches."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .netlist import GridDims, Netlist
from .occupancy import OccupancyMap, Representation, net_cell_indices

CONSOLIDATION_NET_LIMIT = 10**7  # merge threshold 5 up to here, 10 beyond


@dataclass
class BatchStats:
    initial_batches: int = 0
    rerouted: int = 0
    new_batches: int = 0
    consolidation_merges: int = 0


@dataclass
class BatchingResult:
    batches: list[list[int]]
    stats: BatchStats = field(default_factory=BatchStats)


def consolidation_threshold(total_nets: int) -> int:
    return 5 if total_nets <= CONSOLIDATION_NET_LIMIT else 10


def _cell_lookup(netlist: Netlist, cells: dict[int, np.ndarray] | None):
    table = cells if cells is not None else {}

    def cell_of(nid: int) -> np.ndarray:
        idx = table.get(nid)
        if idx is None:
            idx = net_cell_indices(netlist.nets[nid], netlist.grid)
            table[nid] = idx
        return idx

    return cell_of


class _BatchIndex:
    """Per-cell record of which batches occupy it.

    Answers first-fit queries (lowest-index batch whose occupied cells are
    disjoint from a net's cells) in one pass over the net's cells, instead
    of probing one occupancy map per batch.  The dense payload packs batch
    membership into uint64 bit-planes over the linearized grid; the sparse
    payload keeps one cell set per batch and scans them in ascending order.
    Both payloads answer identical queries for identical mark histories.
    """

    def __init__(self, grid: GridDims, representation: Representation, n_batches: int = 0):
        self.grid = grid
        self.representation = representation
        self.n_batches = 0
        if representation is Representation.DENSE:
            self._planes: np.ndarray | None = np.zeros((1, grid.n_cells), dtype=np.uint64)
            self._sets: list[set[int]] | None = None
        else:
            self._planes = None
            self._sets = []
        for _ in range(n_batches):
            self.add_batch()

    def add_batch(self) -> int:
        b = self.n_batches
        self.n_batches += 1
        if self._planes is not None:
            words = (self.n_batches + 63) >> 6
            if words > self._planes.shape[0]:
                self._planes = np.vstack(
                    [self._planes, np.zeros((1, self.grid.n_cells), dtype=np.uint64)]
                )
        else:
            self._sets.append(set())
        return b

    def mark(self, b: int, idx: np.ndarray) -> None:
        if idx.size == 0:
            return
        if self._planes is not None:
            self._planes[b >> 6, idx] |= np.uint64(1 << (b & 63))
        else:
            self._sets[b].update(idx.tolist())

    def conflicts(self, b: int, idx: np.ndarray) -> bool:
        if idx.size == 0:
            return False
        if self._planes is not None:
            bit = np.uint64(1 << (b & 63))
            return bool((self._planes[b >> 6, idx] & bit).any())
        return not self._sets[b].isdisjoint(idx.tolist())

    def first_fit(self, idx: np.ndarray, blocked: int = 0) -> int | None:
        """Lowest batch index not set in ``blocked`` whose cells are disjoint
        from ``idx``, or None when every batch is blocked or conflicting."""
        if self.n_batches == 0:
            return None
        if self._planes is not None:
            words = np.bitwise_or.reduce(self._planes[:, idx], axis=1)
            occupied = int.from_bytes(words.astype("<u8").tobytes(), "little")
            free = ~(occupied | blocked) & ((1 << self.n_batches) - 1)
            if free == 0:
                return None
            return (free & -free).bit_length() - 1
        cells = idx.tolist()
        for b, cell_set in enumerate(self._sets):
            if not (blocked >> b) & 1 and cell_set.isdisjoint(cells):
                return b
        return None


def reallocate(
    nets2reroute: list[int],
    accepted: list[list[int]],
    netlist: Netlist,
    max_batch_size: int,
    representation: Representation = Representation.SPARSE,
    cells: dict[int, np.ndarray] | None = None,
) -> BatchingResult:
    """Place every reroute net without breaking batch conflict-freeness.

    Phase 1 scans existing batches in ascending index and tentatively
    assigns each net to the first batch with spare capacity and no conflict
    against the committed nets.  Phase 2 re-validates the tentative nets per
    batch (ascending id against the committed occupancy), returning failures
    to the pending list.  Pending nets then open new batches exhaustively,
    and small batches are consolidated last.
    """
    if max_batch_size <= 0:
        raise ValueError("max_batch_size must be positive")
    cell_of = _cell_lookup(netlist, cells)

    batches = [sorted(b) for b in accepted]
    index = _BatchIndex(netlist.grid, representation, len(batches))
    full = 0
    for b, batch in enumerate(batches):
        if batch:
            index.mark(b, np.concatenate([cell_of(nid) for nid in batch]))
        if len(batch) >= max_batch_size:
            full |= 1 << b

    stats = BatchStats(initial_batches=len(batches), rerouted=len(nets2reroute))

    # phase 1: tentative first-fit against committed occupancy only
    tentative: list[list[int]] = [[] for _ in batches]
    pending: list[int] = []
    for nid in nets2reroute:
        b = index.first_fit(cell_of(nid), full)
        if b is None:
            pending.append(nid)
        else:
            tentative[b].append(nid)
            if len(batches[b]) + len(tentative[b]) >= max_batch_size:
                full |= 1 << b

    # phase 2: per-batch re-validation, mirroring the evaluation pass
    for b, tent in enumerate(tentative):
        for nid in sorted(tent):
            idx = cell_of(nid)
            if index.conflicts(b, idx):
                pending.append(nid)
            else:
                index.mark(b, idx)
                batches[b].append(nid)
        batches[b].sort()

    new_batches = exhaustive_new_batches(sorted(pending), netlist, representation, cells)
    stats.new_batches = len(new_batches)
    batches.extend(new_batches)
    batches = [b for b in batches if b]

    batches, merges = consolidate(
        batches, len(netlist.nets), netlist, representation, max_batch_size, cells
    )
    stats.consolidation_merges = merges
    return BatchingResult(batches=batches, stats=stats)


def exhaustive_new_batches(
    pending: list[int],
    netlist: Netlist,
    representation: Representation = Representation.SPARSE,
    cells: dict[int, np.ndarray] | None = None,
) -> list[list[int]]:
    """Open new batches greedily until every pending net is placed.

    Each net joins the lowest-index new batch it does not conflict with,
    opening a fresh batch when none fits.  This yields the same batches as
    repeatedly filling one maximal conflict-free batch per pass over the
    remaining nets: in either order a net lands in the first batch that is
    compatible with the earlier nets already assigned there.
    """
    cell_of = _cell_lookup(netlist, cells)
    index = _BatchIndex(netlist.grid, representation)
    out: list[list[int]] = []
    for nid in pending:
        idx = cell_of(nid)
        b = index.first_fit(idx)
        if b is None:
            b = index.add_batch()
            out.append([])
        index.mark(b, idx)
        out[b].append(nid)
    return out


def consolidate(
    batches: list[list[int]],
    total_nets: int,
    netlist: Netlist,
    representation: Representation = Representation.SPARSE,
    max_batch_size: int | None = None,
    cells: dict[int, np.ndarray] | None = None,
) -> tuple[list[list[int]], int]:
    """Merge small batches pairwise while the union stays conflict-free.

    A batch is small when its size is at most the threshold (5 below the
    10M-net mark, 10 above).  Merges respect max_batch_size when given.
    Returns the new batch list and the number of merges performed.
    """
    threshold = consolidation_threshold(total_nets)
    cell_of = _cell_lookup(netlist, cells)
    batches = [sorted(b) for b in batches]
    batch_cells = [
        np.concatenate([cell_of(nid) for nid in b]) if b else np.empty(0, dtype=np.int64)
        for b in batches
    ]
    merges = 0

    i = 0
    while i < len(batches):
        if len(batches[i]) > threshold:
            i += 1
            continue
        occ = OccupancyMap(netlist.grid, representation)
        occ.mark_many(batch_cells[i])
        j = i + 1
        while j < len(batches) and len(batches[i]) <= threshold:
            cand = batches[j]
            if len(cand) > threshold or (
                max_batch_size is not None and len(batches[i]) + len(cand) > max_batch_size
            ):
                j += 1
                continue
            if occ.any_marked(batch_cells[j]):
                j += 1
                continue
            occ.mark_many(batch_cells[j])
            batches[i] = sorted(batches[i] + cand)
            batch_cells[i] = np.concatenate([batch_cells[i], batch_cells[j]])
            del batches[j]
            del batch_cells[j]
            merges += 1
        i += 1
    return batches, merges
