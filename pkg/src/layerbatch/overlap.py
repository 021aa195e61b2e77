"""Pairwise net-conflict predicates and conflict-graph construction.

Three strategies with strictly nested edge sets:

* ``bbox`` -- 2D bounding boxes of the nets' footprints intersect (closed
  rectangles, layers ignored).  The coarsest test.
* ``layer_agnostic`` -- the 2D projections of the footprints share at least
  one G-cell, layers ignored.
* ``layer_aware`` -- the footprints share at least one (x, y, layer) cell.
  This matches occupancy-map semantics exactly: nets conflict iff marking
  one and probing the other reports a collision.

A net's footprint is its pin cells plus every cell covered by its segments
(inclusive spans, each on the segment's own layer).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, TextIO

from .netlist import Net, Netlist

Strategy = str
STRATEGIES = ("bbox", "layer_agnostic", "layer_aware")


def footprint_3d(net: Net) -> frozenset[tuple[int, int, int]]:
    cells = {(p.x, p.y, p.layer) for p in net.pins}
    for s in net.segments:
        cells.update((x, y, s.layer) for x, y in s.cells_2d())
    return frozenset(cells)


def footprint_2d(net: Net) -> frozenset[tuple[int, int]]:
    cells = {(p.x, p.y) for p in net.pins}
    for s in net.segments:
        cells.update(s.cells_2d())
    return frozenset(cells)


def bounding_box(net: Net) -> tuple[int, int, int, int]:
    """(xmin, ymin, xmax, ymax) over pins and segments, layers ignored."""
    xs = [p.x for p in net.pins]
    ys = [p.y for p in net.pins]
    for s in net.segments:
        if s.orientation.value == "H":
            xs.extend((s.lo, s.hi))
            ys.append(s.fixed)
        else:
            xs.append(s.fixed)
            ys.extend((s.lo, s.hi))
    return (min(xs), min(ys), max(xs), max(ys))


def conflict_bbox(a: Net, b: Net) -> bool:
    ax0, ay0, ax1, ay1 = bounding_box(a)
    bx0, by0, bx1, by1 = bounding_box(b)
    return ax0 <= bx1 and bx0 <= ax1 and ay0 <= by1 and by0 <= ay1


def conflict_layer_agnostic(a: Net, b: Net) -> bool:
    return not footprint_2d(a).isdisjoint(footprint_2d(b))


def conflict_layer_aware(a: Net, b: Net) -> bool:
    return not footprint_3d(a).isdisjoint(footprint_3d(b))


PREDICATES: dict[str, Callable[[Net, Net], bool]] = {
    "bbox": conflict_bbox,
    "layer_agnostic": conflict_layer_agnostic,
    "layer_aware": conflict_layer_aware,
}


@dataclass
class ConflictGraph:
    n: int
    edges: set[tuple[int, int]] = field(default_factory=set)

    def add(self, i: int, j: int) -> None:
        if i == j:
            return
        self.edges.add((i, j) if i < j else (j, i))

    def degree(self, i: int) -> int:
        return sum(1 for e in self.edges if i in e)


def build_conflict_graph(netlist: Netlist, strategy: Strategy) -> ConflictGraph:
    """Edge (i, j) iff the strategy predicate holds for nets i and j.

    Cell-sharing strategies are built by bucketing nets per cell rather than
    testing all pairs; bbox uses a sort-and-sweep over x intervals.  The
    all-pairs formulation is kept in the test suite as the oracle.
    """
    if strategy not in PREDICATES:
        raise ValueError(f"unknown strategy {strategy!r}")
    graph = ConflictGraph(len(netlist.nets))
    if strategy == "bbox":
        boxes = sorted(
            (bounding_box(net) + (net.id,) for net in netlist.nets),
            key=lambda t: t[0],
        )
        active: list[tuple[int, int, int, int, int]] = []
        for box in boxes:
            x0, y0, x1, y1, nid = box
            active = [b for b in active if b[2] >= x0]
            for ox0, oy0, ox1, oy1, oid in active:
                if y0 <= oy1 and oy0 <= y1:
                    graph.add(nid, oid)
            active.append(box)
        return graph

    by_cell: dict[tuple, list[int]] = {}
    for net in netlist.nets:
        cells = footprint_3d(net) if strategy == "layer_aware" else footprint_2d(net)
        for cell in cells:
            by_cell.setdefault(cell, []).append(net.id)
    for occupants in by_cell.values():
        if len(occupants) > 1:
            for i in range(len(occupants)):
                for j in range(i + 1, len(occupants)):
                    graph.add(occupants[i], occupants[j])
    return graph


def write_edge_list(graph: ConflictGraph, stream: TextIO) -> None:
    for i, j in sorted(graph.edges):
        stream.write(f"{i} {j}\n")


def read_edge_list(lines: Iterable[str]) -> set[tuple[int, int]]:
    edges = set()
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        i, j = (int(t) for t in line.split())
        edges.add((i, j) if i < j else (j, i))
    return edges
