"""Shared test helpers and oracles, importable from every test module."""

import io
import itertools

from layerbatch.netlist import GridDims, Netlist, generate_synthetic, parse_netlist
from layerbatch.overlap import PREDICATES, ConflictGraph

# Encoding of the four-net overlap figure: each net lives entirely on its
# own layer, so the layer-aware strategy sees no conflicts while the
# layer-agnostic projection shares cells (black-blue on row 5, green-black
# on column 6, red-blue on column 9).
FIG1_TEXT = """\
# four-net overlap fixture
grid 12 12 4
net 0 2  # black
pin 1 5 0
pin 6 2 0
hseg 0 5 1 6
vseg 0 6 2 5
net 1 2  # blue
pin 3 5 1
pin 9 8 1
hseg 1 5 3 9
vseg 1 9 5 8
net 2 2  # green
pin 6 2 2
pin 6 7 2
vseg 2 6 2 7
net 3 2  # red
pin 9 4 3
pin 9 8 3
vseg 3 9 4 8
"""


def fig1_netlist() -> Netlist:
    return parse_netlist(io.StringIO(FIG1_TEXT))


def fig1_single_layer() -> Netlist:
    """Same geometry with every pin and segment forced onto layer 0."""
    out = []
    for line in FIG1_TEXT.splitlines():
        tokens = line.split("#")[0].split()
        if tokens and tokens[0] == "pin":
            out.append(f"pin {tokens[1]} {tokens[2]} 0")
        elif tokens and tokens[0] in ("hseg", "vseg"):
            out.append(" ".join([tokens[0], "0"] + tokens[2:]))
        else:
            out.append(line)
    return parse_netlist(io.StringIO("\n".join(out)))


def brute_conflict_graph(netlist: Netlist, strategy: str) -> ConflictGraph:
    """All-pairs oracle, independent of the bucketed/swept construction."""
    predicate = PREDICATES[strategy]
    graph = ConflictGraph(len(netlist.nets))
    for a, b in itertools.combinations(netlist.nets, 2):
        if predicate(a, b):
            graph.add(a.id, b.id)
    return graph


def batch_is_conflict_free(netlist: Netlist, batch: list[int]) -> bool:
    predicate = PREDICATES["layer_aware"]
    nets = [netlist.nets[nid] for nid in batch]
    return not any(
        predicate(a, b) for a, b in itertools.combinations(nets, 2)
    )


def random_netlist(seed: int, n_nets: int = 60, grid=(20, 20, 4), pins=(2, 5)) -> Netlist:
    return generate_synthetic(GridDims(*grid), n_nets, pins, seed=seed)
