"""Routing-grid domain model: grid, pins, segments, nets, netlist I/O and
synthetic instance generation.

Coordinates are G-cell indices on a 3D grid of x_g * y_g cells over l_g
metal layers.  A net's routing footprint is its pins plus the horizontal /
vertical segments of a rectilinear spanning-tree approximation built by
:func:`build_rsmt`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, TextIO


class ParseError(ValueError):
    """Malformed netlist text; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ValidationError(ValueError):
    """Geometry outside the declared grid, or an inconsistent netlist."""


class GenerationError(ValueError):
    """Synthetic instance request that cannot be satisfied."""


class Orientation(Enum):
    HORIZONTAL = "H"
    VERTICAL = "V"


@dataclass(frozen=True)
class GridDims:
    """G-cell grid extents: x_g columns, y_g rows, l_g metal layers."""

    x_g: int
    y_g: int
    l_g: int

    def __post_init__(self) -> None:
        if self.x_g <= 0 or self.y_g <= 0 or self.l_g <= 0:
            raise ValidationError(f"grid dims must be positive, got {self}")

    @property
    def n_cells(self) -> int:
        return self.x_g * self.y_g * self.l_g


@dataclass(frozen=True)
class Pin:
    x: int
    y: int
    layer: int


@dataclass(frozen=True)
class Segment:
    """Axis-aligned segment on one layer.

    A horizontal segment varies in x over the inclusive span [lo, hi] at
    fixed y; a vertical segment varies in y at fixed x.
    """

    orientation: Orientation
    layer: int
    fixed: int
    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValidationError(f"segment span [{self.lo}, {self.hi}] is inverted")

    @property
    def length(self) -> int:
        return self.hi - self.lo

    def cells_2d(self) -> Iterator[tuple[int, int]]:
        """Yield the (x, y) cells covered by the segment, endpoints included."""
        if self.orientation is Orientation.HORIZONTAL:
            for x in range(self.lo, self.hi + 1):
                yield (x, self.fixed)
        else:
            for y in range(self.lo, self.hi + 1):
                yield (self.fixed, y)


@dataclass
class Net:
    id: int
    pins: list[Pin]
    segments: list[Segment] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.pins:
            raise ValidationError(f"net {self.id} has no pins")

    @property
    def center(self) -> tuple[float, float]:
        """Mean pin (x, y) in grid units."""
        n = len(self.pins)
        return (sum(p.x for p in self.pins) / n, sum(p.y for p in self.pins) / n)

    @property
    def hpwl(self) -> int:
        """Half-perimeter wirelength of the pin bounding box."""
        xs = [p.x for p in self.pins]
        ys = [p.y for p in self.pins]
        return (max(xs) - min(xs)) + (max(ys) - min(ys))


@dataclass
class Netlist:
    grid: GridDims
    nets: list[Net]

    def __post_init__(self) -> None:
        for i, net in enumerate(self.nets):
            if net.id != i:
                raise ValidationError(
                    f"net ids must be dense 0..N-1; position {i} holds id {net.id}"
                )
            _check_net_bounds(net, self.grid)

    def __len__(self) -> int:
        return len(self.nets)


def _check_net_bounds(net: Net, grid: GridDims) -> None:
    for p in net.pins:
        if not (0 <= p.x < grid.x_g and 0 <= p.y < grid.y_g and 0 <= p.layer < grid.l_g):
            raise ValidationError(f"net {net.id}: pin {p} outside grid {grid}")
    for s in net.segments:
        if not 0 <= s.layer < grid.l_g:
            raise ValidationError(f"net {net.id}: segment layer {s.layer} outside grid")
        if s.orientation is Orientation.HORIZONTAL:
            ok = 0 <= s.lo and s.hi < grid.x_g and 0 <= s.fixed < grid.y_g
        else:
            ok = 0 <= s.lo and s.hi < grid.y_g and 0 <= s.fixed < grid.x_g
        if not ok:
            raise ValidationError(f"net {net.id}: segment {s} outside grid {grid}")


# ---------------------------------------------------------------------------
# RSMT approximation

def build_rsmt(net: Net, grid: GridDims) -> list[Segment]:
    """Approximate a rectilinear Steiner tree for the net's pin projections.

    Builds the rectilinear MST over pin (x, y) projections with Prim's
    algorithm (L1 distances, lowest-index tie-break) and decomposes each
    tree edge as a single L-shape, horizontal leg first.  Single-pin nets
    need no segments.
    """
    pts = [(p.x, p.y) for p in net.pins]
    k = len(pts)
    if k < 2:
        return []

    in_tree = [False] * k
    best_dist = [0] * k
    best_from = [0] * k
    in_tree[0] = True
    for j in range(1, k):
        best_dist[j] = _l1(pts[0], pts[j])
    edges: list[tuple[int, int]] = []
    for _ in range(k - 1):
        nxt = -1
        for j in range(k):
            if not in_tree[j] and (nxt == -1 or best_dist[j] < best_dist[nxt]):
                nxt = j
        edges.append((best_from[nxt], nxt))
        in_tree[nxt] = True
        for j in range(k):
            if not in_tree[j]:
                d = _l1(pts[nxt], pts[j])
                if d < best_dist[j]:
                    best_dist[j] = d
                    best_from[j] = nxt

    segments: list[Segment] = []
    for u, v in edges:
        segments.extend(_l_shape(net.pins[u], net.pins[v]))
    return segments


def _l1(a: tuple[int, int], b: tuple[int, int]) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def _segment_layer(a: Pin, b: Pin, orientation: Orientation) -> int:
    # Preferred direction: even layers horizontal, odd layers vertical.
    want = 0 if orientation is Orientation.HORIZONTAL else 1
    matching = [p.layer for p in (a, b) if p.layer % 2 == want]
    return min(matching) if matching else min(a.layer, b.layer)


def _l_shape(a: Pin, b: Pin) -> list[Segment]:
    """Decompose the edge a->b as H leg at a.y then V leg at b.x."""
    out = []
    if a.x != b.x:
        out.append(
            Segment(
                Orientation.HORIZONTAL,
                _segment_layer(a, b, Orientation.HORIZONTAL),
                fixed=a.y,
                lo=min(a.x, b.x),
                hi=max(a.x, b.x),
            )
        )
    if a.y != b.y:
        out.append(
            Segment(
                Orientation.VERTICAL,
                _segment_layer(a, b, Orientation.VERTICAL),
                fixed=b.x,
                lo=min(a.y, b.y),
                hi=max(a.y, b.y),
            )
        )
    return out


# ---------------------------------------------------------------------------
# Synthetic instances

def generate_synthetic(
    grid: GridDims,
    n_nets: int,
    pins_per_net: tuple[int, int] = (2, 8),
    seed: int = 0,
) -> Netlist:
    """Deterministic random netlist; every net gets RSMT segments."""
    lo, hi = pins_per_net
    if n_nets < 1:
        raise GenerationError("n_nets must be >= 1")
    if lo < 1 or lo > hi:
        raise GenerationError(f"invalid pins_per_net range ({lo}, {hi})")
    if hi > grid.n_cells:
        raise GenerationError(
            f"grid {grid} has only {grid.n_cells} cells; cannot place {hi} distinct pins"
        )
    rng = random.Random(seed)
    nets = []
    for nid in range(n_nets):
        k = rng.randint(lo, hi)
        seen: set[tuple[int, int, int]] = set()
        pins = []
        while len(pins) < k:
            cell = (
                rng.randrange(grid.x_g),
                rng.randrange(grid.y_g),
                rng.randrange(grid.l_g),
            )
            if cell not in seen:
                seen.add(cell)
                pins.append(Pin(*cell))
        net = Net(nid, pins)
        net.segments = build_rsmt(net, grid)
        nets.append(net)
    return Netlist(grid, nets)


# ---------------------------------------------------------------------------
# Text format

def parse_netlist(source: TextIO | Iterable[str]) -> Netlist:
    """Parse the line-oriented netlist format.

    Header ``grid <x_g> <y_g> <l_g>``, then per net ``net <id> <n_pins>``
    followed by ``pin``/``hseg``/``vseg`` lines.  Nets with no explicit
    segment lines get RSMT segments built for them.
    """
    grid: GridDims | None = None
    nets: list[Net] = []
    # pending net block: [id, expected_pins, pins, segments, has_seg_lines]
    cur: list | None = None

    def finish(line_no: int) -> None:
        if cur is None:
            return
        nid, expected, pins, segments, has_segs = cur
        if len(pins) != expected:
            raise ParseError(
                line_no, f"net {nid} declares {expected} pins, got {len(pins)}"
            )
        if not pins:
            raise ParseError(line_no, f"net {nid} has no pins")
        net = Net(nid, pins, segments)
        if not has_segs:
            assert grid is not None
            net.segments = build_rsmt(net, grid)
        nets.append(net)

    line_no = 0
    for line_no, raw in enumerate(source, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind, args = tokens[0], tokens[1:]
        try:
            vals = [int(a) for a in args]
        except ValueError:
            raise ParseError(line_no, f"non-integer field in {line!r}") from None
        if kind == "grid":
            if grid is not None:
                raise ParseError(line_no, "duplicate grid header")
            if len(vals) != 3:
                raise ParseError(line_no, "grid header needs 3 fields")
            grid = GridDims(*vals)
        elif kind == "net":
            if grid is None:
                raise ParseError(line_no, "net before grid header")
            if len(vals) != 2:
                raise ParseError(line_no, "net line needs id and pin count")
            finish(line_no)
            cur = [vals[0], vals[1], [], [], False]
        elif kind == "pin":
            if cur is None:
                raise ParseError(line_no, "pin outside a net block")
            if len(vals) != 3:
                raise ParseError(line_no, "pin line needs x y layer")
            cur[2].append(Pin(*vals))
        elif kind in ("hseg", "vseg"):
            if cur is None:
                raise ParseError(line_no, "segment outside a net block")
            if len(vals) != 4:
                raise ParseError(line_no, f"{kind} line needs layer fixed lo hi")
            orient = Orientation.HORIZONTAL if kind == "hseg" else Orientation.VERTICAL
            layer, fx, a, b = vals
            if a > b:
                raise ParseError(line_no, f"segment span [{a}, {b}] is inverted")
            cur[3].append(Segment(orient, layer, fixed=fx, lo=a, hi=b))
            cur[4] = True
        else:
            raise ParseError(line_no, f"unknown directive {kind!r}")
    if grid is None:
        raise ParseError(line_no or 1, "missing grid header")
    finish(line_no)
    return Netlist(grid, nets)


def serialize_netlist(netlist: Netlist) -> str:
    """Inverse of parse_netlist; always writes explicit segments."""
    out = [f"grid {netlist.grid.x_g} {netlist.grid.y_g} {netlist.grid.l_g}"]
    for net in netlist.nets:
        out.append(f"net {net.id} {len(net.pins)}")
        for p in net.pins:
            out.append(f"pin {p.x} {p.y} {p.layer}")
        for s in net.segments:
            kind = "hseg" if s.orientation is Orientation.HORIZONTAL else "vseg"
            out.append(f"{kind} {s.layer} {s.fixed} {s.lo} {s.hi}")
    return "\n".join(out) + "\n"
