import random

import pytest

from tpaths.graph import InvalidInstance, MultiGraph, Network, kappa
from tpaths.oracle import (all_subpartitions, brute_max_tpaths, brute_min_kappa,
                           brute_multiflow, enumerate_tpaths)

from helpers import parallel, random_multigraph, random_network, star, triangle


def unit_expansion(net):
    edges = tuple(e for e, c in zip(net.graph.edges, net.capacities) for _ in range(c))
    return MultiGraph(net.graph.n, edges)


class TestMaxTPaths:
    def test_triangle(self):
        assert brute_max_tpaths(*triangle()) == 3

    def test_star_four(self):
        assert brute_max_tpaths(*star(4)) == 2

    def test_star_three(self):
        assert brute_max_tpaths(*star(3)) == 1

    def test_refuses_large(self):
        g = MultiGraph(2, ((0, 1),) * 15)
        with pytest.raises(InvalidInstance):
            brute_max_tpaths(g, {0, 1})

    def test_paths_listed_once(self):
        g, t = triangle()
        assert enumerate_tpaths(g, t) == [(0,), (1,), (2,)]


class TestMinKappa:
    def test_no_edges(self):
        assert brute_min_kappa(MultiGraph(3, ()), {0, 1})[0] == 0

    def test_star(self):
        value, x = brute_min_kappa(*star(3))
        assert value == 1 == kappa(*star(3), x)

    def test_parallel(self):
        assert brute_min_kappa(*parallel(3))[0] == 3

    def test_refuses_large(self):
        with pytest.raises(InvalidInstance):
            brute_min_kappa(MultiGraph(11, ()), {0, 1})

    def test_subpartition_count(self):
        g = MultiGraph(5, ())
        assert sum(1 for _ in all_subpartitions(g, frozenset({0, 1}))) == 3 ** 3


class TestMultiflow:
    def test_single_edge(self):
        assert brute_multiflow(Network(MultiGraph(2, ((0, 1),)), (5,)), {0, 1}) == 5

    def test_bottleneck(self):
        net = Network(MultiGraph(3, ((0, 1), (1, 2))), (3, 2))
        assert brute_multiflow(net, {0, 2}) == 2

    def test_unit_star(self):
        g, t = star(3)
        assert brute_multiflow(Network(g, (1, 1, 1)), t) == 1

    def test_refuses_large(self):
        net = Network(MultiGraph(2, ((0, 1),)), (21,))
        with pytest.raises(InvalidInstance):
            brute_multiflow(net, {0, 1})


def test_packing_equals_bound():
    rng = random.Random(5)
    for _ in range(150):
        g, t = random_multigraph(rng, 7, 11)
        assert brute_max_tpaths(g, t) == brute_min_kappa(g, t)[0]


def test_residual_packing_matches_unit_copies():
    rng = random.Random(6)
    for _ in range(80):
        net, t = random_network(rng, 6, 3, 14)
        assert brute_multiflow(net, t) == brute_max_tpaths(unit_expansion(net), t)


def test_capacitated_packing_equals_bound():
    rng = random.Random(7)
    for _ in range(80):
        net, t = random_network(rng, 6, 3, 16)
        assert brute_multiflow(net, t) == brute_min_kappa(net.graph, t, net.capacities)[0]
