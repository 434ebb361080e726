"""Problem instances: multigraphs with terminals, T-paths, T-subpartitions and
the Mader dual bound."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence


class InvalidInstance(ValueError):
    """Raised when an instance or a candidate solution is malformed."""


@dataclass(frozen=True)
class MultiGraph:
    """Undirected multigraph on vertices ``0..n-1``.

    Edge ``i`` is ``edges[i]``; parallel edges are distinct entities that
    only share their endpoints.  Selfloops are rejected.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n <= 0:
            raise InvalidInstance("vertex count must be positive")
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidInstance(f"edge {i} has an endpoint out of range")
            if u == v:
                raise InvalidInstance(f"edge {i} is a selfloop at vertex {u}")
            adj[u].append(i)
            adj[v].append(i)
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        object.__setattr__(self, "adjacency", tuple(tuple(a) for a in adj))

    @property
    def m(self) -> int:
        return len(self.edges)

    def other(self, e: int, x: int) -> int:
        u, v = self.edges[e]
        return v if x == u else u

    def is_simple(self) -> bool:
        seen = set()
        for u, v in self.edges:
            key = (min(u, v), max(u, v))
            if key in seen:
                return False
            seen.add(key)
        return True


def check_terminals(g: MultiGraph, terminals: Iterable[int]) -> frozenset[int]:
    t = frozenset(int(x) for x in terminals)
    if len(t) < 2:
        raise InvalidInstance("at least two terminals are required")
    for x in t:
        if not 0 <= x < g.n:
            raise InvalidInstance(f"terminal {x} is not a vertex")
    return t


@dataclass(frozen=True)
class TPath:
    """A path ``vertices[0] - edges[0] - vertices[1] - ... - vertices[-1]``."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def reversed(self) -> "TPath":
        return TPath(self.vertices[::-1], self.edges[::-1])

    def canonical(self) -> "TPath":
        """Orientation-independent representative (used for merging)."""
        r = self.reversed()
        return min(self, r, key=lambda p: (p.vertices, p.edges))


def validate_tpath(g: MultiGraph, terminals: frozenset[int], p: TPath) -> bool:
    """True iff ``p`` is a T-path of ``g``."""
    vs, es = p.vertices, p.edges
    if len(vs) < 2 or len(es) != len(vs) - 1:
        return False
    if len(set(vs)) != len(vs):
        return False
    if vs[0] not in terminals or vs[-1] not in terminals:
        return False
    if any(v in terminals for v in vs[1:-1]):
        return False
    for i, e in enumerate(es):
        if not 0 <= e < g.m:
            return False
        if set(g.edges[e]) != {vs[i], vs[i + 1]}:
            return False
    return True


def edge_disjoint(paths: Iterable[TPath]) -> bool:
    seen: set[int] = set()
    for p in paths:
        for e in p.edges:
            if e in seen:
                return False
            seen.add(e)
    return True


@dataclass(frozen=True)
class TSubpartition:
    """Disjoint vertex sets ``parts[s]``, one per terminal ``s``."""

    parts: Mapping[int, frozenset[int]]

    def union(self) -> frozenset[int]:
        out: set[int] = set()
        for x in self.parts.values():
            out |= x
        return frozenset(out)

    def owner(self) -> dict[int, int]:
        return {v: s for s, xs in self.parts.items() for v in xs}

    def to_json(self) -> dict[str, list[int]]:
        return {str(s): sorted(xs) for s, xs in sorted(self.parts.items())}


def singleton_subpartition(terminals: Iterable[int]) -> TSubpartition:
    return TSubpartition({s: frozenset([s]) for s in sorted(terminals)})


def validate_subpartition(g: MultiGraph, terminals: frozenset[int],
                          x: TSubpartition) -> Optional[str]:
    """Return ``None`` when valid, otherwise a short reason."""
    if set(x.parts) != set(terminals):
        return "parts must be indexed exactly by the terminals"
    seen: set[int] = set()
    for s, xs in x.parts.items():
        if any(not 0 <= v < g.n for v in xs):
            return f"part {s} contains a non-vertex"
        if xs & terminals != {s}:
            return f"part {s} must meet T exactly in {{{s}}}"
        if seen & xs:
            return "parts overlap"
        seen |= xs
    return None


@dataclass(frozen=True)
class Network:
    """Simple graph with positive integer capacities indexed by edge id."""

    graph: MultiGraph
    capacities: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.capacities) != self.graph.m:
            raise InvalidInstance("one capacity per edge is required")
        if any(int(c) != c or c <= 0 for c in self.capacities):
            raise InvalidInstance("capacities must be positive integers")
        if not self.graph.is_simple():
            raise InvalidInstance("the capacitated solver requires a simple graph "
                                  "(parallel edges are not merged)")


def boundary_degree(g: MultiGraph, x: Iterable[int],
                    capacities: Optional[Sequence[int]] = None) -> int:
    """|delta(x)|, or the capacity of delta(x) when ``capacities`` is given."""
    xs = x if isinstance(x, (set, frozenset)) else set(x)
    total = 0
    for e, (u, v) in enumerate(g.edges):
        if (u in xs) != (v in xs):
            total += 1 if capacities is None else capacities[e]
    return total


def components_outside(g: MultiGraph, x: TSubpartition) -> list[frozenset[int]]:
    """Connected components of ``g`` minus every vertex covered by ``x``."""
    covered = x.union()
    seen: set[int] = set(covered)
    comps = []
    for start in range(g.n):
        if start in seen:
            continue
        comp = {start}
        seen.add(start)
        stack = [start]
        while stack:
            a = stack.pop()
            for e in g.adjacency[a]:
                b = g.other(e, a)
                if b not in seen:
                    seen.add(b)
                    comp.add(b)
                    stack.append(b)
        comps.append(frozenset(comp))
    return comps


def kappa(g: MultiGraph, terminals: frozenset[int], x: TSubpartition,
          capacities: Optional[Sequence[int]] = None) -> int:
    """Mader's bound ``(sum_s d(X_s) - odd(G - X)) / 2``.

    With ``capacities`` this is the capacitated bound, where both the
    boundary sizes and the parity test use capacity sums.
    """
    reason = validate_subpartition(g, terminals, x)
    if reason is not None:
        raise InvalidInstance(reason)
    total = sum(boundary_degree(g, xs, capacities) for xs in x.parts.values())
    odd = sum(1 for k in components_outside(g, x)
              if boundary_degree(g, k, capacities) % 2 == 1)
    bracket = total - odd
    if bracket % 2 != 0 or bracket < 0:
        raise AssertionError(f"kappa bracket {bracket} is not a nonnegative even number")
    return bracket // 2


@dataclass(frozen=True)
class Multiflow:
    """Integral free multiflow: T-paths with positive integer coefficients."""

    paths: tuple[TPath, ...] = ()
    coefficients: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if len(self.paths) != len(self.coefficients):
            raise InvalidInstance("one coefficient per path is required")
        if any(int(a) != a or a <= 0 for a in self.coefficients):
            raise InvalidInstance("coefficients must be positive integers")

    @property
    def value(self) -> int:
        return sum(self.coefficients)

    def load(self, m: int) -> list[int]:
        """Per-edge load zeta(e)."""
        z = [0] * m
        for p, a in zip(self.paths, self.coefficients):
            for e in p.edges:
                z[e] += a
        return z

    def normalized(self) -> "Multiflow":
        """Merge identical paths (up to orientation) by summing coefficients."""
        acc: dict[TPath, int] = {}
        for p, a in zip(self.paths, self.coefficients):
            c = p.canonical()
            acc[c] = acc.get(c, 0) + a
        keys = sorted(acc, key=lambda p: (p.vertices, p.edges))
        return Multiflow(tuple(keys), tuple(acc[k] for k in keys))


def multiflow_problems(net: Network, terminals: frozenset[int], f: Multiflow) -> list[str]:
    """Reasons why ``f`` is not a feasible integral multiflow in ``net``."""
    out = []
    for i, p in enumerate(f.paths):
        if not validate_tpath(net.graph, terminals, p):
            out.append(f"path {i} is not a T-path")
    if not out:
        for e, (z, c) in enumerate(zip(f.load(net.graph.m), net.capacities)):
            if z > c:
                out.append(f"edge {e} carries {z} > capacity {c}")
    return out
