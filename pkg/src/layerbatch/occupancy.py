"""Linearized 3D occupancy maps used for constant-time conflict tests.

Cells are addressed by the linear index ``layer * x_g * y_g + x * y_g + y``.
Two interchangeable payloads exist: a dense boolean array (fast, memory
hungry) and a sparse hash set (slower, scales to huge grids).  Both answer
identical membership queries for identical mark histories.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .netlist import GridDims, Net, Orientation

DEFAULT_DENSE_THRESHOLD = 2**28


class Representation(Enum):
    DENSE = "dense"
    SPARSE = "sparse"


def linearize(x: int, y: int, layer: int, grid: GridDims) -> int:
    """Map a 3D cell to its linear index; bijective over the grid."""
    if not (0 <= x < grid.x_g and 0 <= y < grid.y_g and 0 <= layer < grid.l_g):
        raise IndexError(f"cell ({x}, {y}, {layer}) outside grid {grid}")
    return layer * grid.x_g * grid.y_g + x * grid.y_g + y


def select_representation(
    n_parallel_maps: int,
    grid: GridDims,
    threshold: int = DEFAULT_DENSE_THRESHOLD,
) -> Representation:
    """Dense while the total footprint of all live maps fits the threshold."""
    if n_parallel_maps <= 0 or threshold <= 0:
        raise ValueError("n_parallel_maps and threshold must be positive")
    total = n_parallel_maps * grid.n_cells
    return Representation.DENSE if total <= threshold else Representation.SPARSE


def net_cell_indices(net: Net, grid: GridDims) -> np.ndarray:
    """Linear indices of every cell the net occupies (pins + segment spans).

    Duplicates are possible (segment endpoints usually coincide with pins);
    callers that need the distinct cell set should np.unique the result.
    """
    plane = grid.x_g * grid.y_g
    chunks = []
    if net.pins:
        chunks.append(
            np.array(
                [p.layer * plane + p.x * grid.y_g + p.y for p in net.pins],
                dtype=np.int64,
            )
        )
    for s in net.segments:
        span = np.arange(s.lo, s.hi + 1, dtype=np.int64)
        if s.orientation is Orientation.HORIZONTAL:
            idx = s.layer * plane + span * grid.y_g + s.fixed
        else:
            idx = s.layer * plane + s.fixed * grid.y_g + span
        chunks.append(idx)
    if not chunks:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(chunks)


class OccupancyMap:
    """Single-writer boolean occupancy over the linearized grid."""

    def __init__(self, grid: GridDims, representation: Representation):
        self.grid = grid
        self.representation = representation
        self.n_cells = grid.n_cells
        if representation is Representation.DENSE:
            self._bits: np.ndarray | None = np.zeros(self.n_cells, dtype=bool)
            self._cells: set[int] | None = None
        else:
            self._bits = None
            self._cells = set()

    def _check(self, index: int) -> None:
        if not 0 <= index < self.n_cells:
            raise IndexError(f"linear index {index} outside [0, {self.n_cells})")

    def mark(self, index: int) -> None:
        self._check(index)
        if self._bits is not None:
            self._bits[index] = True
        else:
            self._cells.add(index)

    def is_marked(self, index: int) -> bool:
        self._check(index)
        if self._bits is not None:
            return bool(self._bits[index])
        return index in self._cells

    def mark_many(self, indices: np.ndarray) -> None:
        if indices.size == 0:
            return
        self._check_bulk(indices)
        if self._bits is not None:
            self._bits[indices] = True
        else:
            self._cells.update(indices.tolist())

    def any_marked(self, indices: np.ndarray) -> bool:
        if indices.size == 0:
            return False
        self._check_bulk(indices)
        if self._bits is not None:
            return bool(self._bits[indices].any())
        return not self._cells.isdisjoint(indices.tolist())

    def _check_bulk(self, indices: np.ndarray) -> None:
        lo = int(indices.min())
        hi = int(indices.max())
        if lo < 0 or hi >= self.n_cells:
            raise IndexError(f"linear index range [{lo}, {hi}] outside [0, {self.n_cells})")

    def mark_net(self, net: Net) -> None:
        """Mark every pin cell and every segment-covered cell of the net."""
        self.mark_many(net_cell_indices(net, self.grid))

    def marked_count(self) -> int:
        if self._bits is not None:
            return int(self._bits.sum())
        return len(self._cells)
