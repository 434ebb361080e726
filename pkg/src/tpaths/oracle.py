"""Exponential reference solvers for small instances.

These depend only on the graph core so they can check the solver
independently.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Optional, Sequence

from .graph import (InvalidInstance, MultiGraph, Network, TSubpartition, check_terminals,
                    kappa)

MAX_EDGES = 14
MAX_VERTICES = 10
MAX_CAPACITY_SUM = 20


def enumerate_tpaths(g: MultiGraph, terminals: frozenset[int]) -> list[tuple[int, ...]]:
    """Every T-path of ``g`` once, as a sorted tuple of edge ids.

    A path and its reverse give the same edge set, so each is listed once;
    the list is sorted so memoised searches are reproducible.
    """
    out: set[tuple[int, ...]] = set()
    for s in sorted(terminals):
        stack = [(s, (s,), ())]
        while stack:
            x, seen, es = stack.pop()
            for e in g.adjacency[x]:
                y = g.other(e, x)
                if y in seen:
                    continue
                if y in terminals:
                    if y > s:
                        out.add(tuple(sorted(es + (e,))))
                    continue
                stack.append((y, seen + (y,), es + (e,)))
    return sorted(out)


def _max_packing(m: int, capacities: Sequence[int], paths: list[tuple[int, ...]]) -> int:
    by_edge: list[list[int]] = [[] for _ in range(m)]
    for i, p in enumerate(paths):
        for e in p:
            by_edge[e].append(i)

    @lru_cache(maxsize=None)
    def best(residual: tuple[int, ...]) -> int:
        # Branch on the lowest edge that is still usable: either it is never
        # used again, or some path through it is taken now.
        for e in range(m):
            if residual[e] > 0 and any(all(residual[f] > 0 for f in paths[i]) for i in by_edge[e]):
                break
        else:
            return 0
        res = list(residual)
        res[e] = 0
        value = best(tuple(res))
        for i in by_edge[e]:
            p = paths[i]
            if all(residual[f] > 0 for f in p):
                res = list(residual)
                for f in p:
                    res[f] -= 1
                value = max(value, 1 + best(tuple(res)))
        return value

    return best(tuple(capacities))


def brute_max_tpaths(g: MultiGraph, terminals, max_edges: int = MAX_EDGES) -> int:
    """Maximum number of edge-disjoint T-paths, by exhaustive search."""
    t = check_terminals(g, terminals)
    if g.m > max_edges:
        raise InvalidInstance(f"oracle limited to {max_edges} edges")
    return _max_packing(g.m, [1] * g.m, enumerate_tpaths(g, t))


def brute_multiflow(net: Network, terminals, max_capacity: int = MAX_CAPACITY_SUM) -> int:
    """Maximum value of an integral free multiflow, by exhaustive search.

    Parallel unit copies of an edge are interchangeable, so packing paths
    against residual capacities explores the same solutions as packing
    them in the unit expansion, without the symmetric duplicates.
    """
    g = net.graph
    t = check_terminals(g, terminals)
    if sum(net.capacities) > max_capacity:
        raise InvalidInstance(f"oracle limited to total capacity {max_capacity}")
    return _max_packing(g.m, list(net.capacities), enumerate_tpaths(g, t))


def all_subpartitions(g: MultiGraph, terminals: frozenset[int]):
    """Every T-subpartition: each non-terminal joins one part or none."""
    ts = sorted(terminals)
    others = [v for v in range(g.n) if v not in terminals]
    for choice in itertools.product(range(len(ts) + 1), repeat=len(others)):
        parts = {s: {s} for s in ts}
        for v, c in zip(others, choice):
            if c < len(ts):
                parts[ts[c]].add(v)
        yield TSubpartition({s: frozenset(xs) for s, xs in parts.items()})


def brute_min_kappa(g: MultiGraph, terminals, capacities: Optional[Sequence[int]] = None,
                    max_vertices: int = MAX_VERTICES) -> tuple[int, TSubpartition]:
    """Minimum of the dual bound over all T-subpartitions, with a minimiser."""
    t = check_terminals(g, terminals)
    if g.n > max_vertices:
        raise InvalidInstance(f"oracle limited to {max_vertices} vertices")
    best: Optional[tuple[int, TSubpartition]] = None
    for x in all_subpartitions(g, t):
        k = kappa(g, t, x, capacities)
        if best is None or k < best[0]:
            best = (k, x)
    assert best is not None
    return best
