import itertools

import pytest

from layerbatch.baselines import greedy_first_fit
from layerbatch.netlist import GridDims, Net, Netlist, Pin
from layerbatch.overlap import PREDICATES

from helpers import brute_conflict_graph, random_netlist


def first_fit_oracle(netlist, strategy):
    """Literal pairwise first-fit, the reference for the accelerated paths."""
    predicate = PREDICATES[strategy]
    batches = []
    for net in netlist.nets:
        for batch in batches:
            if not any(predicate(net, netlist.nets[o]) for o in batch):
                batch.append(net.id)
                break
        else:
            batches.append([net.id])
    return batches


class TestGreedyFirstFit:
    def test_fig1_layer_aware_single_batch(self, fig1_netlist):
        result = greedy_first_fit(fig1_netlist, "layer_aware")
        assert result.batches == [[0, 1, 2, 3]]

    def test_identical_nets_one_batch_each(self):
        nl = Netlist(GridDims(10, 10, 2), [Net(i, [Pin(4, 4, 1)]) for i in range(5)])
        for strategy in PREDICATES:
            result = greedy_first_fit(nl, strategy)
            assert len(result.batches) == 5

    @pytest.mark.parametrize("strategy", list(PREDICATES))
    @pytest.mark.parametrize("seed", [0, 1])
    def test_matches_pairwise_oracle(self, strategy, seed):
        nl = random_netlist(seed, n_nets=120, grid=(20, 20, 4))
        assert greedy_first_fit(nl, strategy).batches == first_fit_oracle(nl, strategy)

    @pytest.mark.parametrize("strategy", list(PREDICATES))
    def test_sound_and_complete(self, strategy):
        nl = random_netlist(2, n_nets=200, grid=(25, 25, 4))
        result = greedy_first_fit(nl, strategy)
        assert sorted(nid for b in result.batches for nid in b) == list(range(200))
        predicate = PREDICATES[strategy]
        for batch in result.batches:
            nets = [nl.nets[nid] for nid in batch]
            assert not any(
                predicate(a, b) for a, b in itertools.combinations(nets, 2)
            )

    @pytest.mark.parametrize("strategy", list(PREDICATES))
    def test_greedy_coloring_bound(self, strategy):
        nl = random_netlist(3, n_nets=150, grid=(20, 20, 4))
        result = greedy_first_fit(nl, strategy)
        graph = brute_conflict_graph(nl, strategy)
        max_degree = max(graph.degree(i) for i in range(150))
        assert len(result.batches) <= 1 + max_degree
