"""Instance generators, hand-built fixtures and a from-definition walk checker
shared by the test modules."""

from __future__ import annotations

import random
from dataclasses import dataclass

from tpaths.augment import augment
from tpaths.graph import MultiGraph, Network, TPath
from tpaths.labeled import Walk, build_auxiliary
from tpaths.search import Exhausted, find_augmenting_walk

# Terminal names used by the hand-built fixtures.
S, T, R, Q = 0, 1, 2, 3


def random_multigraph(rng: random.Random, n_max: int, m_max: int, terminal_counts=(2, 3, 4),
                      n_min: int = 2):
    n = rng.randint(n_min, n_max)
    m = rng.randint(0, m_max)
    edges = []
    while len(edges) < m:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges.append((u, v))
    k = min(n, rng.choice(terminal_counts))
    return MultiGraph(n, tuple(edges)), frozenset(rng.sample(range(n), k))


def random_network(rng: random.Random, n_max: int, cap_max: int, cap_total: int):
    """Simple graph with capacities in ``1..cap_max`` summing to at most
    ``cap_total``."""
    n = rng.randint(2, n_max)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    rng.shuffle(pairs)
    edges, caps = [], []
    budget = cap_total
    for u, v in pairs[:rng.randint(0, len(pairs))]:
        c = rng.randint(1, cap_max)
        if c > budget:
            break
        budget -= c
        edges.append((u, v) if rng.random() < 0.5 else (v, u))
        caps.append(c)
    k = min(n, rng.choice((2, 3, 4)))
    g = MultiGraph(n, tuple(edges))
    return Network(g, tuple(caps)), frozenset(rng.sample(range(n), k))


@dataclass(frozen=True)
class Fixture:
    graph: MultiGraph
    terminals: frozenset[int]
    paths: tuple[TPath, ...]
    walk: Walk


def walk_with_loop_fixture() -> Fixture:
    """Paths s..t and r..q crossing at one vertex; the walk leaves t, runs
    twice along the s-t path, turns on the r-q selfloop and comes back."""
    g = MultiGraph(8, ((3, 7), (5, 2), (7, 5), (1, 7), (7, 4), (4, 6), (1, 6), (0, 6),
                       (4, 5), (2, 7), (1, 6)))
    paths = (TPath((0, 6, 4, 7, 1), (7, 5, 4, 3)), TPath((2, 7, 3), (9, 0)))
    # Edge 14 is the selfloop of the r-q path at vertex 7 (ids 11..13 are the
    # s-t path's selfloops).
    walk = Walk((1, 6, 4, 7, 7, 4, 6, 1), (6, 5, 4, 14, 4, 5, 10))
    return Fixture(g, frozenset({S, T, R, Q}), paths, walk)


def reroute_fixture() -> Fixture:
    """Two crossing paths where flipping the walk's edges against the paths
    leaves an edge set that is not a union of three T-paths."""
    g = MultiGraph(7, ((0, 5), (5, 4), (4, 6), (6, 1), (2, 5), (5, 6), (6, 4), (4, 3),
                       (0, 5), (1, 6)))
    paths = (TPath((0, 5, 4, 6, 1), (0, 1, 2, 3)), TPath((2, 5, 6, 4, 3), (4, 5, 6, 7)))
    walk = Walk((0, 5, 6, 4, 6, 1), (8, 5, 2, 6, 9))
    return Fixture(g, frozenset({S, T, R, Q}), paths, walk)


def crossing_segments_fixture() -> Fixture:
    """One path s-x1-x2-x3-x4-t and a walk from r that uses x3x4 and then
    x1x2, both towards t.  Rerouting through the walk's free prefix alone
    leaves an invalid walk, so a different shortcut is needed."""
    g = MultiGraph(7, ((0, 3), (3, 4), (4, 5), (5, 6), (6, 1), (2, 5), (6, 3), (4, 2)))
    paths = (TPath((0, 3, 4, 5, 6, 1), (0, 1, 2, 3, 4)),)
    walk = Walk((2, 5, 6, 3, 4, 2), (5, 3, 6, 1, 7))
    return Fixture(g, frozenset({0, 1, 2}), paths, walk)


def naive_augmenting(edge_ends, kinds, end_symbols, loop_pairs, terminals, vertices, edges) -> bool:
    """Direct reading of the three augmenting-walk conditions.

    ``edge_ends[e]`` is the endpoint pair, ``kinds[e]`` one of "free",
    "labeled", "loop"; ``end_symbols[e]`` maps endpoint -> symbol for
    labeled edges and ``loop_pairs[e]`` is a selfloop's symbol pair.
    """
    if len(vertices) != len(edges) + 1 or not edges:
        return False
    for i, e in enumerate(edges):
        if not 0 <= e < len(edge_ends):
            return False
        a, b = edge_ends[e]
        if sorted((a, b)) != sorted((vertices[i], vertices[i + 1])):
            return False
    if vertices[0] not in terminals or vertices[-1] not in terminals:
        return False
    if any(v in terminals for v in vertices[1:-1]):
        return False
    word = []
    for i, v in enumerate(vertices):
        if v in terminals:
            word.append(v)
        if i == len(edges):
            break
        e = edges[i]
        if kinds[e] == "labeled":
            word.append(end_symbols[e][vertices[i]])
            word.append(end_symbols[e][vertices[i + 1]])
        elif kinds[e] == "loop":
            word.extend(loop_pairs[e])
    if any(x == y for x, y in zip(word, word[1:])):
        return False
    uses: dict = {}
    for i, e in enumerate(edges):
        key = (e, vertices[i]) if kinds[e] == "labeled" else (e,)
        uses[key] = uses.get(key, 0) + 1
        if uses[key] > 1:
            return False
    return True


def naive_from_paths(g: MultiGraph, terminals, paths, walk: Walk) -> bool:
    """Label edges straight from the path family and run the naive check.

    Selfloop ids continue after the graph's edges, path by path, one per
    inner vertex in path order.
    """
    ends = list(g.edges)
    kinds = ["free"] * g.m
    syms: list = [None] * g.m
    loops: list = [None] * g.m
    for p in paths:
        s, t = p.vertices[0], p.vertices[-1]
        for i, e in enumerate(p.edges):
            kinds[e] = "labeled"
            syms[e] = {p.vertices[i]: s, p.vertices[i + 1]: t}
        for x in p.vertices[1:-1]:
            ends.append((x, x))
            kinds.append("loop")
            syms.append(None)
            loops.append((s, t))
    return naive_augmenting(ends, kinds, syms, loops, frozenset(terminals),
                            walk.vertices, walk.edges)


def star(leaves: int) -> tuple[MultiGraph, frozenset[int]]:
    """Star with centre 0 and terminal leaves 1..leaves."""
    g = MultiGraph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))
    return g, frozenset(range(1, leaves + 1))


def triangle() -> tuple[MultiGraph, frozenset[int]]:
    return MultiGraph(3, ((0, 1), (1, 2), (2, 0))), frozenset({0, 1, 2})


def parallel(k: int):
    return MultiGraph(2, ((0, 1),) * k), frozenset({0, 1})


def rounds(g: MultiGraph, terminals):
    """Yield ``(paths, labeled graph, search result, forest, shrunk walk)``
    for every search of a full solve."""
    paths: list[TPath] = []
    while True:
        lg = build_auxiliary(g, terminals, paths)
        holder: list = []
        events: list = []
        res = find_augmenting_walk(lg, hook=events.append, forest_out=holder)
        shrunk = next((Walk(tuple(e["vertices"]), tuple(e["edges"]))
                       for e in events if e["kind"] == "walk"), None)
        yield paths, lg, res, holder[0], shrunk
        if isinstance(res, Exhausted):
            return
        paths = augment(g, terminals, paths, res)
