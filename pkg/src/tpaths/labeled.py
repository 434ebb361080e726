"""Auxiliary labeled graphs, symbol strings of walks and walk validators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Protocol, Sequence, Union

from .graph import InvalidInstance, MultiGraph, Multiflow, Network, TPath, edge_disjoint

STAR = "*"
Symbol = Union[int, str]

FREE = "free"
LABELED = "labeled"
LOOP = "loop"


@dataclass(frozen=True)
class LEdge:
    """Edge of a labeled graph.

    For labeled edges ``sym_u``/``sym_v`` are the symbols at ``u``/``v``; for a
    selfloop (``u == v``) they are the two symbols of its fixed pair.
    """

    u: int
    v: int
    kind: str
    sym_u: Optional[int] = None
    sym_v: Optional[int] = None
    path: Optional[int] = None
    origin: Optional[int] = None

    def sigma(self, x: int) -> int:
        if self.kind != LABELED:
            raise ValueError("only labeled edges carry end symbols")
        if x == self.u:
            return self.sym_u  # type: ignore[return-value]
        if x == self.v:
            return self.sym_v  # type: ignore[return-value]
        raise ValueError(f"vertex {x} is not an end of this edge")

    def other(self, x: int) -> int:
        return self.v if x == self.u else self.u


@dataclass
class LabeledGraph:
    """Vertices ``0..n-1`` of the instance plus symbol-carrying edges.

    ``loop_of`` maps ``(path index, vertex)`` (or ``(path index, vertex,
    terminal pair)`` in the flow variant) to the selfloop id.
    """

    n: int
    terminals: frozenset[int]
    edges: list[LEdge]
    incident: list[list[int]] = field(default_factory=list)
    loop_of: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.incident:
            self.incident = [[] for _ in range(self.n)]
            for i, e in enumerate(self.edges):
                self.incident[e.u].append(i)
                if e.v != e.u:
                    self.incident[e.v].append(i)

    def vertex_symbol(self, x: int) -> Optional[Symbol]:
        if x in self.terminals:
            return x
        if x >= self.n:
            return STAR
        return None

    def is_pseudo(self, x: int) -> bool:
        return x >= self.n

    def loops(self) -> list[int]:
        return [i for i, e in enumerate(self.edges) if e.kind == LOOP]


@dataclass(frozen=True)
class Walk:
    """``vertices[0], edges[0], vertices[1], ..., vertices[-1]``."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.vertices) != len(self.edges) + 1:
            raise ValueError("a walk has one more vertex than edges")

    def __len__(self) -> int:
        return len(self.edges)

    def reversed(self) -> "Walk":
        return Walk(self.vertices[::-1], self.edges[::-1])


def build_auxiliary(g: MultiGraph, terminals: frozenset[int],
                    paths: Sequence[TPath]) -> LabeledGraph:
    """Labeled graph of an edge-disjoint family of T-paths.

    Edge ids ``0..m-1`` coincide with the input edge ids; selfloops follow.
    Each path contributes one selfloop per internal vertex whose symbol pair
    is ``(start, end)`` of the path as stored.
    """
    if not edge_disjoint(paths):
        raise InvalidInstance("paths share an edge")
    edges = [LEdge(u, v, FREE, origin=i) for i, (u, v) in enumerate(g.edges)]
    loops: list[LEdge] = []
    loop_of: dict = {}
    for j, p in enumerate(paths):
        s, t = p.start, p.end
        for i, e in enumerate(p.edges):
            a, b = p.vertices[i], p.vertices[i + 1]
            edges[e] = LEdge(a, b, LABELED, s, t, j, e)
        for x in p.vertices[1:-1]:
            loop_of[(j, x)] = len(edges) + len(loops)
            loops.append(LEdge(x, x, LOOP, s, t, j, None))
    return LabeledGraph(g.n, terminals, edges + loops, loop_of=loop_of)


def build_auxiliary_flow(net: Network, terminals: frozenset[int],
                         f: Multiflow) -> LabeledGraph:
    """Labeled graph of an integral multiflow.

    Per input edge: one labeled edge per distinct end-symbol assignment used
    by some path (tagged with the smallest such path index), then one free
    edge if the residual capacity is 1 or two if it is at least 2.  Per
    non-terminal vertex and terminal pair carried through it: one selfloop.
    """
    g = net.graph
    load = f.load(g.m)
    for e, (z, c) in enumerate(zip(load, net.capacities)):
        if z > c:
            raise InvalidInstance(f"multiflow exceeds capacity on edge {e}")
    classes: dict[int, dict[tuple[int, int], int]] = {}
    loop_classes: dict[tuple[int, frozenset[int]], tuple[int, int, int]] = {}
    for j, p in enumerate(f.paths):
        s, t = p.start, p.end
        for i, e in enumerate(p.edges):
            a = p.vertices[i]
            u, _ = g.edges[e]
            key = (s, t) if a == u else (t, s)  # (symbol at u, symbol at v)
            cl = classes.setdefault(e, {})
            if key not in cl or j < cl[key]:
                cl[key] = j
        for x in p.vertices[1:-1]:
            k = (x, frozenset((s, t)))
            if k not in loop_classes or j < loop_classes[k][2]:
                loop_classes[k] = (s, t, j)
    edges: list[LEdge] = []
    for e, (u, v) in enumerate(g.edges):
        for (su, sv), j in sorted(classes.get(e, {}).items()):
            edges.append(LEdge(u, v, LABELED, su, sv, j, e))
        spare = net.capacities[e] - load[e]
        for _ in range(min(spare, 2)):
            edges.append(LEdge(u, v, FREE, origin=e))
    loop_of: dict = {}
    for (x, pair), (s, t, j) in sorted(loop_classes.items(), key=lambda kv: (kv[0][0], sorted(kv[0][1]))):
        loop_of[(j, x, pair)] = len(edges)
        edges.append(LEdge(x, x, LOOP, s, t, j, None))
    return LabeledGraph(g.n, terminals, edges, loop_of=loop_of)


def _check_walk(lg: LabeledGraph, q: Walk) -> Optional[int]:
    """Index of the first edge not joining its neighbours, else ``None``."""
    for i, e in enumerate(q.edges):
        ed = lg.edges[e]
        if {ed.u, ed.v} != {q.vertices[i], q.vertices[i + 1]}:
            return i
    return None


def gamma(lg: LabeledGraph, q: Walk) -> list[Symbol]:
    """Symbol string of a walk in a pseudo-free labeled graph."""
    out: list[Symbol] = []
    vs = q.vertices
    for i in range(len(vs)):
        sym = lg.vertex_symbol(vs[i])
        if sym is not None:
            out.append(sym)
        if i < len(q.edges):
            ed = lg.edges[q.edges[i]]
            if ed.kind == LABELED:
                out.append(ed.sigma(vs[i]))
                out.append(ed.sigma(vs[i + 1]))
            elif ed.kind == LOOP:
                out.append(ed.sym_u)  # type: ignore[arg-type]
                out.append(ed.sym_v)  # type: ignore[arg-type]
    return out


@dataclass
class Report:
    """Validator verdict: a list of ``(condition, walk index)`` violations."""

    violations: list[tuple[str, int]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return not self.violations

    def add(self, tag: str, index: int) -> None:
        self.violations.append((tag, index))

    @property
    def tags(self) -> set[str]:
        return {t for t, _ in self.violations}


def _check_a1(terminals: frozenset[int], q: Walk, rep: Report) -> None:
    vs = q.vertices
    if len(q.edges) == 0:
        rep.add("A1", 0)
        return
    if vs[0] not in terminals:
        rep.add("A1", 0)
    if vs[-1] not in terminals:
        rep.add("A1", len(vs) - 1)
    for i in range(1, len(vs) - 1):
        if vs[i] in terminals:
            rep.add("A1", i)


def _check_a3(lg: LabeledGraph, q: Walk, rep: Report) -> None:
    seen: set = set()
    for i, e in enumerate(q.edges):
        ed = lg.edges[e]
        key = (e, q.vertices[i]) if ed.kind == LABELED else e
        if key in seen:
            rep.add("A3", i)
        seen.add(key)


def is_augmenting(lg: LabeledGraph, q: Walk) -> Report:
    """Check conditions A1-A3 of an augmenting walk."""
    rep = Report()
    bad = _check_walk(lg, q)
    if bad is not None:
        rep.add("walk", bad)
        return rep
    if any(lg.is_pseudo(x) for x in q.vertices):
        raise ValueError("use is_shrunk_augmenting for graphs with pseudo-vertices")
    _check_a1(lg.terminals, q, rep)
    g = gamma(lg, q)
    for i in range(1, len(g)):
        if g[i] == g[i - 1]:
            rep.add("A2", i)
    _check_a3(lg, q, rep)
    return rep


class ForestView(Protocol):
    """What the shrunk-walk validator needs to know about a search state."""

    def vertex_symbol(self, x: int) -> Optional[Symbol]: ...

    def end_symbol(self, e: int, x: int) -> Optional[int]: ...

    def stalk(self, x: int) -> Optional[int]: ...

    def mark(self, x: int) -> Optional[Symbol]: ...

    def is_pseudo(self, x: int) -> bool: ...


def level_symbols(lg: LabeledGraph, view: ForestView, q: Walk) -> list[tuple[Symbol, int]]:
    """Symbol string of a walk at a contracted level, each symbol tagged with
    the walk position it belongs to (vertex ``i`` or edge ``i`` -> ``i``
    for the vertex, ``i + 0.5`` for an edge is encoded as ``2i`` / ``2i+1``)."""
    out: list[tuple[Symbol, int]] = []
    vs = q.vertices
    for i in range(len(vs)):
        sym = view.vertex_symbol(vs[i])
        if sym is not None:
            out.append((sym, 2 * i))
        if i < len(q.edges):
            e = q.edges[i]
            ed = lg.edges[e]
            if ed.kind == LABELED:
                out.append((view.end_symbol(e, vs[i]), 2 * i + 1))  # type: ignore[arg-type]
                out.append((view.end_symbol(e, vs[i + 1]), 2 * i + 1))  # type: ignore[arg-type]
            elif ed.kind == LOOP:
                out.append((ed.sym_u, 2 * i + 1))  # type: ignore[arg-type]
                out.append((ed.sym_v, 2 * i + 1))  # type: ignore[arg-type]
    return out


def is_shrunk_augmenting(lg: LabeledGraph, view: ForestView, q: Walk,
                         endpoints=None) -> Report:
    """Check A1, A2', A3, A4 and A5 for a walk at a (possibly) contracted level.

    ``endpoints(e)`` must return the two current endpoints of edge ``e``;
    by default the labeled graph's own endpoints are used.
    """
    rep = Report()
    vs, es = q.vertices, q.edges
    for i, e in enumerate(es):
        ends = endpoints(e) if endpoints is not None else (lg.edges[e].u, lg.edges[e].v)
        if set(ends) != {vs[i], vs[i + 1]}:
            rep.add("walk", i)
            return rep
    _check_a1(lg.terminals, q, rep)
    syms = level_symbols(lg, view, q)
    for k in range(1, len(syms)):
        if syms[k][0] == syms[k - 1][0] and syms[k][0] != STAR:
            rep.add("A2'", syms[k][1] // 2)
    seen: set = set()
    for i, e in enumerate(es):
        ed = lg.edges[e]
        key = (e, vs[i]) if ed.kind == LABELED else e
        if key in seen:
            rep.add("A3", i)
        seen.add(key)
    pseudo_seen: set[int] = set()
    for i in range(1, len(vs) - 1):
        x = vs[i]
        near = {es[i - 1], es[i]}
        if view.is_pseudo(x):
            if x in pseudo_seen:
                rep.add("A4", i)
            pseudo_seen.add(x)
            if view.stalk(x) not in near:
                rep.add("A4", i)
        if view.stalk(x) not in near:
            mk = view.mark(x)
            before = [s for s, pos in syms if pos <= 2 * i]
            after = [s for s, pos in syms if pos >= 2 * i]
            ok = (mk is not None and mk != STAR
                  and ((before and before[-1] == mk) or (after and after[0] == mk)))
            if not ok:
                rep.add("A5", i)
    return rep


def _strip_pass(lg: LabeledGraph, vs: list[int], es: list[int]) -> bool:
    """One left-to-right pass deleting redundant selfloops in place."""
    changed = False
    i = 0
    while i < len(es):
        ed = lg.edges[es[i]]
        if ed.kind != LOOP:
            i += 1
            continue
        before = _last_symbol(lg, vs, es, i)
        after = _first_symbol(lg, vs, es, i + 1)
        if before is None or after is None or before != after:
            del es[i]
            del vs[i + 1]
            changed = True
            continue
        i += 1
    return changed


def _last_symbol(lg: LabeledGraph, vs: Sequence[int], es: Sequence[int], k: int) -> Optional[Symbol]:
    """Last symbol of the prefix ending at vertex ``k``."""
    for i in range(k, -1, -1):
        sym = lg.vertex_symbol(vs[i])
        if sym is not None:
            return sym
        if i > 0:
            ed = lg.edges[es[i - 1]]
            if ed.kind == LABELED:
                return ed.sigma(vs[i])
            if ed.kind == LOOP:
                return ed.sym_v
    return None


def _first_symbol(lg: LabeledGraph, vs: Sequence[int], es: Sequence[int], k: int) -> Optional[Symbol]:
    """First symbol of the suffix starting at vertex ``k``."""
    for i in range(k, len(vs)):
        sym = lg.vertex_symbol(vs[i])
        if sym is not None:
            return sym
        if i < len(es):
            ed = lg.edges[es[i]]
            if ed.kind == LABELED:
                return ed.sigma(vs[i])
            if ed.kind == LOOP:
                return ed.sym_u
    return None


def remove_redundant_selfloops(lg: LabeledGraph, q: Walk) -> Walk:
    """Delete selfloops whose removal keeps A2, until none is left."""
    vs, es = list(q.vertices), list(q.edges)
    while _strip_pass(lg, vs, es):
        pass
    return Walk(tuple(vs), tuple(es))


def symbol_string(symbols: Iterable[Symbol], names: Optional[dict] = None) -> str:
    """Render a symbol sequence compactly, e.g. ``"tststrqtstst"``."""
    names = names or {}
    return "".join(str(names.get(s, s)) for s in symbols)
