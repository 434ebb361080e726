import random

import pytest

from tpaths.graph import MultiGraph, TPath
from tpaths.labeled import (FREE, STAR, Walk, build_auxiliary, is_augmenting,
                            is_shrunk_augmenting, level_symbols)
from tpaths.oracle import brute_max_tpaths
from tpaths.search import (FRONTIER, INTERIOR, Blossom, Exhausted, SearchError, SearchForest,
                           find_augmenting_walk)
from tpaths.solver import max_edge_disjoint_tpaths

from helpers import random_multigraph, star, walk_with_loop_fixture


def loop_blossom_graph():
    """s joined by a free edge to the inner vertex u of an r-q path."""
    g = MultiGraph(4, ((1, 3), (3, 2), (0, 3)))
    return build_auxiliary(g, frozenset({0, 1, 2}), [TPath((1, 3, 2), (0, 1))])


def calyx_graph(extra):
    """Path r-u-v-t plus free edges s-w, w-u, w-v and ``extra``.

    s=0, t=1, r=2, w=3, u=4, v=5.
    """
    edges = ((2, 4), (4, 5), (5, 1), (0, 3), (3, 4), (3, 5)) + tuple(extra)
    n = 1 + max(max(e) for e in edges)
    g = MultiGraph(n, edges)
    terminals = frozenset({0, 1, 2} | set(range(6, n)))
    return g, terminals, build_auxiliary(g, terminals, [TPath((2, 4, 5, 1), (0, 1, 2))])


def record(lg):
    events, holder = [], []
    res = find_augmenting_walk(lg, hook=events.append, forest_out=holder, check=True)
    return res, events, holder[0]


class TestClassify:
    def test_free_edge_from_root(self):
        lg = loop_blossom_graph()
        assert SearchForest(lg).classify_edge(2) == (FRONTIER, 0, 3)

    def test_labeled_edge_with_own_symbol_at_root(self):
        lg = loop_blossom_graph()
        assert SearchForest(lg).classify_edge(0) is None

    def test_free_edge_between_equal_marks(self):
        g = MultiGraph(4, ((0, 2), (0, 3), (2, 3), (3, 1)))
        lg = build_auxiliary(g, frozenset({0, 1}), [])
        f = SearchForest(lg)
        f.grow(0, 0, 2)
        f.grow(1, 0, 3)
        assert f.mark(2) == f.mark(3) == 0
        assert f.classify_edge(2) is None

    def test_free_edge_between_pseudo_vertices_is_interior(self):
        g, _, lg = calyx_graph([(6, 4)])
        f = SearchForest(lg)
        f.grow(3, 0, 3)
        f.grow(4, 3, 4)
        f.grow(1, 4, 5)
        f.shrink(f.resolve_interior(5, 3, 5))
        p = f.find(3)
        assert f.mark(p) == STAR
        kind, a, b = f.classify_edge(6)
        assert kind == INTERIOR and {a, b} == {p, 6}

    def test_loop_with_foreign_pair_is_interior(self):
        lg = loop_blossom_graph()
        f = SearchForest(lg)
        f.grow(2, 0, 3)
        assert f.classify_edge(3) == (INTERIOR, 3, 3)


class TestGrow:
    def test_free_edge_copies_root_mark(self):
        lg = loop_blossom_graph()
        f = SearchForest(lg)
        f.grow(2, 0, 3)
        assert (f.mark(3), f.stalk(3), f.parent(3)) == (0, 2, 0)

    def test_labeled_edge_sets_end_symbol(self):
        _, _, lg = calyx_graph([])
        f = SearchForest(lg)
        f.grow(3, 0, 3)
        f.grow(4, 3, 4)
        f.grow(1, 4, 5)
        assert f.mark(5) == lg.edges[1].sigma(5) == 1

    def test_grow_onto_forest_vertex(self):
        lg = loop_blossom_graph()
        f = SearchForest(lg)
        f.grow(2, 0, 3)
        with pytest.raises(SearchError):
            f.grow(1, 3, 2)


class TestResolveInterior:
    def test_distinct_roots_give_walk(self):
        g = MultiGraph(3, ((0, 2), (2, 1)))
        lg = build_auxiliary(g, frozenset({0, 1}), [])
        f = SearchForest(lg)
        f.grow(0, 0, 2)
        res = f.resolve_interior(1, 2, 1)
        assert res == Walk((0, 2, 1), (0, 1))
        assert is_shrunk_augmenting(lg, f, res)

    def test_loop_gives_singleton_blossom(self):
        lg = loop_blossom_graph()
        f = SearchForest(lg)
        f.grow(2, 0, 3)
        b = f.resolve_interior(3, 3, 3)
        assert isinstance(b, Blossom)
        assert (b.calyx, b.members, b.stalk) == (3, frozenset({3}), 2)
        assert lg.edges[b.stalk].kind == FREE

    def test_calyx_below_last_shared_free_edge(self):
        _, _, lg = calyx_graph([])
        f = SearchForest(lg)
        f.grow(3, 0, 3)
        f.grow(4, 3, 4)
        f.grow(5, 3, 5)
        b = f.resolve_interior(1, 4, 5)
        assert (b.calyx, b.stalk, b.members) == (3, 3, frozenset({3, 4, 5}))
        assert b.arm_u.vertices == (3, 4) and b.arm_v.vertices == (3, 5)


class TestShrink:
    def test_singleton_drops_loops(self):
        lg = loop_blossom_graph()
        f = SearchForest(lg)
        f.grow(2, 0, 3)
        f.shrink(f.resolve_interior(3, 3, 3))
        p = f.find(3)
        assert p == lg.n and f.is_pseudo(p)
        assert f.stalk(p) == 2 and f.mark(p) == STAR
        assert all(f.classify_edge(e) is None for e in range(len(lg.edges)))

    def test_edges_inside_blossom_vanish(self):
        # Edge 6 joins u and v outside the forest; after the shrink both ends
        # project to the pseudo-vertex.
        _, _, lg = calyx_graph([(4, 5)])
        f = SearchForest(lg)
        f.grow(3, 0, 3)
        f.grow(4, 3, 4)
        f.grow(1, 4, 5)
        f.shrink(f.resolve_interior(5, 3, 5))
        a, b = f.ends(6)
        assert a == b == f.find(4)
        assert f.classify_edge(6) is None

    def test_nested_projection(self):
        g = MultiGraph(6, ((1, 3), (3, 4), (3, 1), (2, 3), (3, 5), (0, 3), (2, 0), (3, 2),
                           (4, 1), (0, 5)))
        terminals = frozenset({0, 1, 4})
        graphs = []
        max_edge_disjoint_tpaths(g, terminals,
                                 hook=lambda ev: ev["kind"] == "round" and graphs.append(ev["graph"]))
        for lg in graphs:
            _, _, f = record(lg)
            outer = [b for b in f.blossoms if any(f.is_pseudo(x) for x in b.members)]
            if outer:
                break
        else:
            pytest.fail("no nested blossom in any round")
        b = outer[0]
        inner = next(x for x in b.members if f.is_pseudo(x))
        for x in f.originals[inner]:
            assert f.member_of(x, b.pseudo) == inner
            assert f.rep_at(x, inner) == inner
            assert f.rep_at(x, b.pseudo) == f.find(x)


class TestExpand:
    def test_walk_avoiding_blossom(self):
        _, _, lg = calyx_graph([])
        f = SearchForest(lg)
        f.grow(3, 0, 3)
        f.grow(4, 3, 4)
        f.grow(1, 4, 5)
        f.shrink(f.resolve_interior(5, 3, 5))
        q = Walk((2, 4), (0,))
        assert f.expand(Walk((2, 4), (0,))) == q

    def test_entry_at_calyx(self):
        _, _, lg = calyx_graph([(3, 6)])
        res, events, _ = record(lg)
        assert [e["kind"] for e in events][-1] == "expand"
        assert events[-1]["entry"] == 3 and events[-1]["case"] == "i"
        assert res == Walk((0, 3, 6), (3, 6))

    def test_detour_through_blossom_edge(self):
        g, t, lg = calyx_graph([(4, 0)])
        res, events, _ = record(lg)
        assert events[-1]["case"] == "ii"
        assert res == Walk((0, 3, 5, 4, 0), (3, 5, 1, 6))
        assert is_augmenting(lg, res)
        assert brute_max_tpaths(g, t) == 2

    def test_pseudo_vertex_twice_rejected(self):
        _, _, lg = calyx_graph([])
        f = SearchForest(lg)
        f.grow(3, 0, 3)
        f.grow(4, 3, 4)
        f.grow(1, 4, 5)
        b = f.resolve_interior(5, 3, 5)
        f.shrink(b)
        p = b.pseudo
        with pytest.raises(SearchError, match="A4"):
            f.expand_walk(b, [0, p, 2, p, 0], [3, 0, 0, 3])


class TestFindAugmentingWalk:
    def test_single_edge(self):
        lg = build_auxiliary(MultiGraph(2, ((0, 1),)), frozenset({0, 1}), [])
        assert find_augmenting_walk(lg) == Walk((0, 1), (0,))

    def test_star_with_one_path_is_exhausted(self):
        g, t = star(3)
        lg = build_auxiliary(g, t, [TPath((1, 0, 2), (0, 1))])
        assert isinstance(find_augmenting_walk(lg), Exhausted)
        assert brute_max_tpaths(g, t) == 1

    def test_loop_walk_fixture(self):
        fx = walk_with_loop_fixture()
        lg = build_auxiliary(fx.graph, fx.terminals, fx.paths)
        res = find_augmenting_walk(lg, check=True)
        assert is_augmenting(lg, res)
        assert brute_max_tpaths(fx.graph, fx.terminals) == 3

    def test_rejects_pseudo_vertices(self):
        lg = loop_blossom_graph()
        lg.edges[0] = lg.edges[0].__class__(9, 3, FREE)
        with pytest.raises(ValueError):
            find_augmenting_walk(lg)


def admissibility_checker(lg, holder, failures):
    """Hook asserting F1 and F2 on the live forest after every grow/shrink."""

    def hook(event):
        if event["kind"] not in ("grow", "shrink"):
            return
        f = holder[0]
        for x in f.current_vertices():
            if x >= len(f.in_forest) or not f.in_forest[x]:
                continue
            vs, es = f.root_path(x)
            syms = [s for s, _ in level_symbols(lg, f, Walk(tuple(vs), tuple(es)))]
            if any(a == b != STAR for a, b in zip(syms, syms[1:])):
                failures.append(("F1", x))
            if f.is_pseudo(x) and lg.edges[f.stalk(x)].kind != FREE:
                failures.append(("F2", x))

    return hook


def test_random_search_invariants():
    rng = random.Random(20)
    for _ in range(150):
        g, t = random_multigraph(rng, 8, 14)
        graphs = []
        max_edge_disjoint_tpaths(g, t, hook=lambda ev: ev["kind"] == "round" and graphs.append(ev["graph"]))
        for lg in graphs:
            holder, failures = [], []
            res = find_augmenting_walk(lg, hook=admissibility_checker(lg, holder, failures),
                                       forest_out=holder)
            assert failures == []
            f = holder[0]
            sets = [frozenset(f.originals[b.pseudo]) for b in f.blossoms]
            for a in sets:
                for b in sets:
                    assert a <= b or b <= a or not a & b
            if isinstance(res, Walk):
                assert is_augmenting(lg, res)
                assert len(res.vertices) <= 2 * g.n
                assert all(res.vertices.count(x) <= 2 for x in res.vertices)
                assert find_augmenting_walk(lg) == res
            else:
                assert len(f.blossoms) <= 2 * g.n

