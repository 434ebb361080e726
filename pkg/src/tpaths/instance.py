"""Line-oriented instance format.

::

    c any comment
    p tpaths <n> <m>
    t <v>
    e <u> <v> [capacity]

Vertex ids are 1-based in text and 0-based in memory.  Edge ids follow the
order of the ``e`` lines.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .graph import InvalidInstance, MultiGraph, Network, check_terminals


class InstanceSyntaxError(InvalidInstance):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


@dataclass(frozen=True)
class Instance:
    graph: MultiGraph
    terminals: frozenset[int]
    capacities: Optional[tuple[int, ...]] = None

    def network(self) -> Network:
        caps = self.capacities or (1,) * self.graph.m
        return Network(self.graph, caps)


def _int(tok: str, line: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise InstanceSyntaxError(line, f"{what} {tok!r} is not an integer") from None


def parse_instance(text: str) -> Instance:
    header: Optional[tuple[int, int]] = None
    terminals: list[int] = []
    edges: list[tuple[int, int]] = []
    caps: list[Optional[int]] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        kind = parts[0]
        if kind == "p":
            if header is not None:
                raise InstanceSyntaxError(no, "second problem line")
            if len(parts) != 4 or parts[1] != "tpaths":
                raise InstanceSyntaxError(no, "expected 'p tpaths <n> <m>'")
            n, m = _int(parts[2], no, "vertex count"), _int(parts[3], no, "edge count")
            if n <= 0 or m < 0:
                raise InstanceSyntaxError(no, "vertex count must be positive, edge count nonnegative")
            header = (n, m)
            continue
        if header is None:
            raise InstanceSyntaxError(no, "problem line must come first")
        n = header[0]
        if kind == "t":
            if len(parts) != 2:
                raise InstanceSyntaxError(no, "expected 't <v>'")
            v = _int(parts[1], no, "terminal")
            if not 1 <= v <= n:
                raise InstanceSyntaxError(no, f"terminal {v} out of range 1..{n}")
            if v - 1 in terminals:
                raise InstanceSyntaxError(no, f"terminal {v} listed twice")
            terminals.append(v - 1)
        elif kind == "e":
            if len(parts) not in (3, 4):
                raise InstanceSyntaxError(no, "expected 'e <u> <v> [capacity]'")
            u, v = _int(parts[1], no, "endpoint"), _int(parts[2], no, "endpoint")
            for x in (u, v):
                if not 1 <= x <= n:
                    raise InstanceSyntaxError(no, f"vertex {x} out of range 1..{n}")
            if u == v:
                raise InstanceSyntaxError(no, f"selfloop at vertex {u}")
            cap = None
            if len(parts) == 4:
                cap = _int(parts[3], no, "capacity")
                if cap <= 0:
                    raise InstanceSyntaxError(no, "capacity must be positive")
            edges.append((u - 1, v - 1))
            caps.append(cap)
        else:
            raise InstanceSyntaxError(no, f"unknown line type {kind!r}")
    if header is None:
        raise InstanceSyntaxError(0, "missing problem line")
    if len(edges) != header[1]:
        raise InstanceSyntaxError(0, f"header announces {header[1]} edges, found {len(edges)}")
    given = [c is not None for c in caps]
    if any(given) and not all(given):
        raise InstanceSyntaxError(0, "either every edge has a capacity or none has")
    g = MultiGraph(header[0], tuple(edges))
    t = check_terminals(g, terminals)
    capacities = tuple(caps) if caps and all(given) else None  # type: ignore[arg-type]
    return Instance(g, t, capacities)


def format_instance(inst: Instance, comment: Optional[str] = None) -> str:
    """Canonical text: header, terminals ascending, edges in id order."""
    lines = []
    if comment:
        lines.append(f"c {comment}")
    lines.append(f"p tpaths {inst.graph.n} {inst.graph.m}")
    lines.extend(f"t {v + 1}" for v in sorted(inst.terminals))
    for i, (u, v) in enumerate(inst.graph.edges):
        cap = f" {inst.capacities[i]}" if inst.capacities is not None else ""
        lines.append(f"e {u + 1} {v + 1}{cap}")
    return "\n".join(lines) + "\n"


def random_instance(n: int, m: int, terminals: int, seed: int,
                    capacity: Optional[tuple[int, int]] = None) -> Instance:
    """Seeded random instance.

    Without capacities, endpoint pairs are drawn with replacement (selfloops
    redrawn), giving a multigraph.  With a capacity range the graph must be
    simple, so repeated pairs are redrawn as well.
    """
    if not 2 <= terminals <= n:
        raise InvalidInstance("need 2 <= terminals <= n")
    if m < 0 or (m > 0 and n < 2):
        raise InvalidInstance("edges need at least two vertices")
    if capacity is not None and m > n * (n - 1) // 2:
        raise InvalidInstance("too many edges for a simple graph")
    rng = random.Random(seed)
    t = sorted(rng.sample(range(n), terminals))
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    while len(edges) < m:
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if capacity is not None and key in seen:
            continue
        seen.add(key)
        edges.append((u, v))
    caps = None
    if capacity is not None:
        lo, hi = capacity
        if not 1 <= lo <= hi:
            raise InvalidInstance("capacity range must satisfy 1 <= low <= high")
        caps = tuple(rng.randint(lo, hi) for _ in edges)
    return Instance(MultiGraph(n, tuple(edges)), frozenset(t), caps)


def generate_instance(n: int, m: int, terminals: int, seed: int,
                      capacity: Optional[tuple[int, int]] = None) -> str:
    inst = random_instance(n, m, terminals, seed, capacity)
    return format_instance(inst, comment=f"seed {seed}")
