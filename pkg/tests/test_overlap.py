import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from layerbatch.netlist import (
    GridDims,
    Net,
    Netlist,
    Orientation,
    Pin,
    Segment,
    parse_netlist,
)
from layerbatch.occupancy import OccupancyMap, Representation, net_cell_indices
from layerbatch.overlap import (
    STRATEGIES,
    build_conflict_graph,
    conflict_bbox,
    conflict_layer_agnostic,
    conflict_layer_aware,
    read_edge_list,
    write_edge_list,
)

from helpers import brute_conflict_graph, random_netlist

GRID = GridDims(12, 12, 4)


def hseg(layer, y, x1, x2):
    return Segment(Orientation.HORIZONTAL, layer, fixed=y, lo=x1, hi=x2)


def vseg(layer, x, y1, y2):
    return Segment(Orientation.VERTICAL, layer, fixed=x, lo=y1, hi=y2)


class TestBbox:
    def test_fig1_black_vs_blue(self, fig1_netlist):
        assert conflict_bbox(fig1_netlist.nets[0], fig1_netlist.nets[1])

    def test_opposite_corners(self):
        a = Net(0, [Pin(0, 0, 0), Pin(2, 2, 0)], [hseg(0, 0, 0, 2)])
        b = Net(1, [Pin(9, 9, 0), Pin(11, 11, 0)], [hseg(0, 9, 9, 11)])
        assert not conflict_bbox(a, b)

    def test_touching_boundary_counts(self):
        a = Net(0, [Pin(0, 0, 0), Pin(3, 3, 0)])
        b = Net(1, [Pin(3, 3, 1), Pin(6, 6, 1)])
        assert conflict_bbox(a, b)
        c = Net(2, [Pin(4, 0, 1), Pin(6, 2, 1)])  # shares only x-range edge
        assert not conflict_bbox(a, c)
        d = Net(3, [Pin(3, 0, 1), Pin(6, 2, 1)])  # boxes share the line x=3
        assert conflict_bbox(a, d)


class TestLayerAgnostic:
    def test_fig1_aligned_horizontals(self, fig1_netlist):
        assert conflict_layer_agnostic(fig1_netlist.nets[0], fig1_netlist.nets[1])

    def test_fig1_aligned_verticals(self, fig1_netlist):
        assert conflict_layer_agnostic(fig1_netlist.nets[2], fig1_netlist.nets[0])

    def test_disjoint_rows_and_columns(self):
        a = Net(0, [Pin(0, 0, 0), Pin(3, 0, 0)], [hseg(0, 0, 0, 3)])
        b = Net(1, [Pin(0, 2, 1), Pin(3, 2, 1)], [hseg(1, 2, 0, 3)])
        assert not conflict_layer_agnostic(a, b)


class TestLayerAware:
    def test_fig1_different_layers_no_conflict(self, fig1_netlist):
        assert not conflict_layer_aware(fig1_netlist.nets[0], fig1_netlist.nets[1])

    def test_same_layer_conflicts(self):
        a = Net(0, [Pin(1, 5, 0), Pin(6, 5, 0)], [hseg(0, 5, 1, 6)])
        b = Net(1, [Pin(3, 5, 0), Pin(9, 5, 0)], [hseg(0, 5, 3, 9)])
        assert conflict_layer_aware(a, b)

    def test_coincident_single_pins(self):
        a = Net(0, [Pin(4, 4, 2)])
        b = Net(1, [Pin(4, 4, 2)])
        assert conflict_layer_aware(a, b)

    def test_pin_vs_segment_same_layer(self):
        a = Net(0, [Pin(3, 5, 0)])
        b = Net(1, [Pin(1, 5, 0), Pin(6, 5, 0)], [hseg(0, 5, 1, 6)])
        assert conflict_layer_aware(a, b)


class TestConflictGraph:
    def test_fig1_layer_aware_empty(self, fig1_netlist):
        assert build_conflict_graph(fig1_netlist, "layer_aware").edges == set()

    def test_fig1_layer_agnostic_edges(self, fig1_netlist):
        edges = build_conflict_graph(fig1_netlist, "layer_agnostic").edges
        assert {(0, 1), (0, 2), (1, 3)} <= edges
        assert len(edges) >= 3

    def test_empty_netlist(self):
        graph = build_conflict_graph(Netlist(GRID, []), "bbox")
        assert graph.edges == set()

    @pytest.mark.parametrize("strategy", STRATEGIES)
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_matches_all_pairs_oracle(self, strategy, seed):
        nl = random_netlist(seed)
        fast = build_conflict_graph(nl, strategy)
        brute = brute_conflict_graph(nl, strategy)
        assert fast.edges == brute.edges

    @pytest.mark.parametrize("seed", [3, 4, 5, 6])
    def test_containment_chain(self, seed):
        nl = random_netlist(seed)
        aware = build_conflict_graph(nl, "layer_aware").edges
        agnostic = build_conflict_graph(nl, "layer_agnostic").edges
        bbox = build_conflict_graph(nl, "bbox").edges
        assert aware <= agnostic <= bbox

    def test_edge_list_roundtrip(self, fig1_netlist):
        graph = build_conflict_graph(fig1_netlist, "layer_agnostic")
        buf = io.StringIO()
        write_edge_list(graph, buf)
        assert read_edge_list(buf.getvalue().splitlines()) == graph.edges


@given(seed=st.integers(0, 500), i=st.integers(0, 59), j=st.integers(0, 59))
@settings(max_examples=60, deadline=None)
def test_predicates_symmetric(seed, i, j):
    nl = random_netlist(seed % 5, n_nets=60)
    a, b = nl.nets[i], nl.nets[j]
    for name in STRATEGIES:
        from layerbatch.overlap import PREDICATES

        assert PREDICATES[name](a, b) == PREDICATES[name](b, a)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_layer_aware_agrees_with_occupancy(seed):
    nl = random_netlist(seed, n_nets=40)
    for a in nl.nets[:20]:
        for b in nl.nets[20:]:
            occ = OccupancyMap(nl.grid, Representation.SPARSE)
            occ.mark_net(a)
            collides = occ.any_marked(net_cell_indices(b, nl.grid))
            assert conflict_layer_aware(a, b) == collides
