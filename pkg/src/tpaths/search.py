"""Search for an augmenting walk by growing an admissible forest from the
terminals and shrinking blossoms.

Contraction is done in place: every pseudo-vertex gets a fresh id ``n + i``
and records the blossom it replaced, so a walk found at the top level can be
expanded level by level, newest blossom first.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable, Optional, Union

from .labeled import (FREE, LABELED, LOOP, STAR, LabeledGraph, Symbol, Walk,
                      is_shrunk_augmenting)

FRONTIER = "frontier"
INTERIOR = "interior"

TraceHook = Callable[[dict], None]


class SearchError(RuntimeError):
    """Internal invariant of the search was violated."""


@dataclass(frozen=True)
class Arm:
    """Forest path from the calyx down to one end of the interior edge."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]


@dataclass(frozen=True)
class Blossom:
    pseudo: int
    edge: int
    u: int
    v: int
    calyx: int
    arm_u: Arm
    arm_v: Arm
    stalk: int
    marks: dict
    members: frozenset[int]


@dataclass
class Exhausted:
    """Final state of a search that found no walk."""

    forest: "SearchForest"

    @property
    def levels(self) -> list[Blossom]:
        return self.forest.blossoms


@dataclass
class SearchStats:
    grows: int = 0
    shrinks: int = 0
    expands: int = 0
    interior_checks: int = 0


class SearchForest:
    """Admissible forest over a labeled graph, with the contraction stack.

    Vertex ids ``< n`` are original, ids ``>= n`` are pseudo-vertices.
    """

    def __init__(self, lg: LabeledGraph, roots=None, hook: Optional[TraceHook] = None):
        self.lg = lg
        self.n = lg.n
        n = lg.n
        self.outer: list[Optional[int]] = [None] * n
        self.top: list[int] = list(range(n))
        self.in_forest: list[bool] = [False] * n
        self.stalk_of: list[Optional[int]] = [None] * n
        self.root: list[Optional[int]] = [None] * n
        self.mark_of: list[Optional[Symbol]] = [None] * n
        self.children: list[list[int]] = [[] for _ in range(n)]
        self.originals: dict[int, list[int]] = {}
        self.blossoms: list[Blossom] = []
        self.stats = SearchStats()
        self.hook = hook
        for t in sorted(lg.terminals if roots is None else roots):
            self.in_forest[t] = True
            self.root[t] = t
            self.mark_of[t] = t

    # -- projections -------------------------------------------------------

    def find(self, x: int) -> int:
        top = self.top
        r = x
        while top[r] != r:
            r = top[r]
        while top[x] != r:
            top[x], x = r, top[x]
        return r

    def rep_at(self, x: int, limit: int) -> int:
        """Vertex representing original ``x`` once pseudo-vertices up to id
        ``limit`` exist."""
        outer = self.outer
        while outer[x] is not None and outer[x] <= limit:  # type: ignore[operator]
            x = outer[x]  # type: ignore[assignment]
        return x

    def member_of(self, x: int, pseudo: int) -> Optional[int]:
        """Direct member of ``pseudo`` that contains original vertex ``x``."""
        outer = self.outer
        while outer[x] is not None:
            if outer[x] == pseudo:
                return x
            x = outer[x]  # type: ignore[assignment]
        return None

    def ends(self, e: int) -> tuple[int, int]:
        ed = self.lg.edges[e]
        return self.find(ed.u), self.find(ed.v)

    # -- ForestView -------------------------------------------------------

    def vertex_symbol(self, x: int) -> Optional[Symbol]:
        if x >= self.n:
            return STAR
        return x if x in self.lg.terminals else None

    def end_symbol(self, e: int, x: int) -> Optional[int]:
        ed = self.lg.edges[e]
        if ed.kind != LABELED:
            return None
        return ed.sym_u if self.find(ed.u) == x else ed.sym_v

    def stalk(self, x: int) -> Optional[int]:
        return self.stalk_of[x] if x < len(self.stalk_of) else None

    def mark(self, x: int) -> Optional[Symbol]:
        return self.mark_of[x] if x < len(self.mark_of) else None

    def is_pseudo(self, x: int) -> bool:
        return x >= self.n

    # -- forest structure -------------------------------------------------

    def parent(self, x: int) -> Optional[int]:
        e = self.stalk_of[x]
        if e is None:
            return None
        a, b = self.ends(e)
        return b if a == x else a

    def root_path(self, x: int) -> tuple[list[int], list[int]]:
        """``P_F(x)`` as (vertices root..x, edges)."""
        vs = [x]
        es: list[int] = []
        while True:
            e = self.stalk_of[x]
            if e is None:
                break
            a, b = self.ends(e)
            x = b if a == x else a
            es.append(e)
            vs.append(x)
        vs.reverse()
        es.reverse()
        return vs, es

    def forest_edges(self) -> list[int]:
        return [e for x, e in enumerate(self.stalk_of)
                if e is not None and self.find(x) == x]

    def current_vertices(self) -> list[int]:
        return [x for x in range(len(self.top)) if self.top[x] == x]

    # -- classification ----------------------------------------------------

    def classify_edge(self, e: int):
        """``(FRONTIER, inside, outside)``, ``(INTERIOR, u, v)`` or ``None``."""
        ed = self.lg.edges[e]
        if ed.kind == LOOP:
            x = self.find(ed.u)
            if x >= self.n or not self.in_forest[x]:
                return None
            mk = self.mark_of[x]
            if mk != ed.sym_u and mk != ed.sym_v:
                return (INTERIOR, x, x)
            return None
        a, b = self.find(ed.u), self.find(ed.v)
        if a == b:
            return None
        fa, fb = self.in_forest[a], self.in_forest[b]
        if fa and fb:
            if self.stalk_of[a] == e or self.stalk_of[b] == e:
                return None
            ma, mb = self.mark_of[a], self.mark_of[b]
            if ed.kind == LABELED:
                if ma != ed.sym_u and mb != ed.sym_v:
                    return (INTERIOR, a, b)
                return None
            if ma != mb or ma == STAR:
                return (INTERIOR, a, b)
            return None
        if fa or fb:
            inside, outside = (a, b) if fa else (b, a)
            if ed.kind == FREE:
                return (FRONTIER, inside, outside)
            sym_in = ed.sym_u if fa else ed.sym_v
            if self.mark_of[inside] != sym_in:
                return (FRONTIER, inside, outside)
        return None

    def grow(self, e: int, inside: int, outside: int) -> None:
        if self.in_forest[outside] or not self.in_forest[inside]:
            raise SearchError(f"edge {e} is not a frontier edge")
        ed = self.lg.edges[e]
        self.in_forest[outside] = True
        self.stalk_of[outside] = e
        self.root[outside] = self.root[inside]
        if ed.kind == LABELED:
            self.mark_of[outside] = ed.sym_u if self.find(ed.u) == outside else ed.sym_v
        else:
            self.mark_of[outside] = self.mark_of[inside]
        self.children[inside].append(outside)
        self.stats.grows += 1
        if self.hook is not None:
            self.hook({"kind": "grow", "edge": e, "vertex": outside, "state": self.snapshot()})

    def resolve_interior(self, e: int, u: int, v: int) -> Union[Walk, Blossom]:
        """Turn an interior edge into a walk at this level, or a blossom."""
        pu_v, pu_e = self.root_path(u)
        pv_v, pv_e = self.root_path(v)
        self.stats.interior_checks += 1
        if pu_v[0] == pv_v[0]:
            c = 0
            lim = min(len(pu_v), len(pv_v))
            while c < lim and pu_v[c] == pv_v[c]:
                c += 1
            k = None
            for i in range(c - 2, -1, -1):
                if self.lg.edges[pu_e[i]].kind == FREE:
                    k = i
                    break
            if k is not None:
                w = pu_v[k + 1]
                arm_u = Arm(tuple(pu_v[k + 1:]), tuple(pu_e[k + 1:]))
                arm_v = Arm(tuple(pv_v[k + 1:]), tuple(pv_e[k + 1:]))
                members = frozenset(arm_u.vertices) | frozenset(arm_v.vertices)
                return Blossom(
                    pseudo=len(self.top), edge=e, u=u, v=v, calyx=w,
                    arm_u=arm_u, arm_v=arm_v, stalk=pu_e[k],
                    marks={x: self.mark_of[x] for x in members}, members=members)
        return Walk(tuple(pu_v + pv_v[::-1]), tuple(pu_e + [e] + pv_e[::-1]))

    def shrink(self, b: Blossom) -> list[int]:
        """Contract ``b`` into a new pseudo-vertex; return the original
        vertices whose incident edges must be re-examined."""
        p = len(self.top)
        if b.pseudo != p:
            raise SearchError("blossom does not belong to the current level")
        for x in b.members:
            if x in self.lg.terminals:
                raise SearchError("terminals are never shrunk")
        self.top.append(p)
        self.outer.append(None)
        self.in_forest.append(True)
        self.stalk_of.append(b.stalk)
        self.root.append(self.root[b.calyx])
        self.mark_of.append(STAR)
        kids = []
        orig: list[int] = []
        for x in sorted(b.members):
            self.outer[x] = p
            self.top[x] = p
            kids.extend(c for c in self.children[x] if c not in b.members)
            orig.extend(self.originals.get(x, [x]) if x >= self.n else [x])
        self.children.append(kids)
        self.originals[p] = orig
        self.blossoms.append(b)
        # Members already marked with the star keep classifying their edges
        # the same way, so only the others need a second look.
        touched = [x for x in b.members if x < self.n and b.marks[x] != STAR]
        stack = [p]
        while stack:
            x = stack.pop()
            for c in self.children[x]:
                c = self.find(c)
                if c >= self.n or c in self.lg.terminals:
                    continue
                if self.lg.edges[self.stalk_of[c]].kind != FREE:  # type: ignore[index]
                    continue
                if self.mark_of[c] != STAR:
                    self.mark_of[c] = STAR
                    touched.append(c)
                    stack.append(c)
        self.stats.shrinks += 1
        if self.hook is not None:
            self.hook({"kind": "shrink", "pseudo": p, "members": sorted(b.members),
                       "calyx": b.calyx, "edge": b.edge, "state": self.snapshot()})
        return touched

    # -- expansion ----------------------------------------------------------

    def _first_symbol_after(self, vs: list[int], es: list[int], i: int, limit: int) -> Optional[Symbol]:
        """First symbol after vertex ``i``'s own symbol, at the level where
        pseudo-vertices up to ``limit`` exist."""
        lg = self.lg
        for k in range(i, len(es)):
            ed = lg.edges[es[k]]
            if ed.kind == LABELED:
                return ed.sym_u if self.rep_at(ed.u, limit) == vs[k] else ed.sym_v
            if ed.kind == LOOP:
                return ed.sym_u
            sym = self.vertex_symbol(vs[k + 1])
            if sym is not None:
                return sym
        return None

    def expand_walk(self, b: Blossom, vs: list[int], es: list[int]) -> tuple[list[int], list[int]]:
        """Replace the pseudo-vertex of ``b`` in the walk by part of ``b``."""
        p = b.pseudo
        hits = [i for i, x in enumerate(vs) if x == p]
        if not hits:
            return vs, es
        if len(hits) > 1:
            raise SearchError(f"pseudo-vertex {p} occurs {len(hits)} times (A4)")
        i = hits[0]
        if i == 0 or i == len(vs) - 1:
            raise SearchError("a pseudo-vertex cannot be an end of the walk")
        if es[i - 1] != b.stalk:
            if es[i] != b.stalk:
                raise SearchError(f"neither walk edge at pseudo-vertex {p} is its stalk (A4)")
            vs, es = vs[::-1], es[::-1]
            i = len(vs) - 1 - i
        ed = self.lg.edges[es[i]]
        vprime = self.member_of(ed.u, p)
        if vprime is None:
            vprime = self.member_of(ed.v, p)
        if vprime is None:
            raise SearchError("edge after the pseudo-vertex does not enter the blossom")
        arm_u, arm_v = b.arm_u, b.arm_v
        if vprime not in arm_v.vertices:
            arm_u, arm_v = arm_v, arm_u
        k = arm_v.vertices.index(vprime)
        mk = b.marks[vprime]
        nxt = self._first_symbol_after(vs, es, i, p)
        if mk == STAR or mk != nxt:
            ins_v = list(arm_v.vertices[:k + 1])
            ins_e = list(arm_v.edges[:k])
        else:
            ins_v = list(arm_u.vertices) + list(arm_v.vertices[k:])[::-1]
            ins_e = list(arm_u.edges) + [b.edge] + list(arm_v.edges[k:])[::-1]
        self.stats.expands += 1
        if self.hook is not None:
            self.hook({"kind": "expand", "pseudo": p, "entry": vprime,
                       "case": "i" if len(ins_e) == k else "ii", "state": self.snapshot()})
        return vs[:i] + ins_v + vs[i + 1:], es[:i] + ins_e + es[i:]

    def expand(self, q: Walk) -> Walk:
        vs, es = list(q.vertices), list(q.edges)
        for b in reversed(self.blossoms):
            vs, es = self.expand_walk(b, vs, es)
        return Walk(tuple(vs), tuple(es))

    # -- certificates / tracing ---------------------------------------------

    def snapshot(self) -> dict:
        cur = [x for x in self.current_vertices() if x < len(self.in_forest)]
        return {
            "forest_edges": self.forest_edges(),
            "marks": {x: self.mark_of[x] for x in cur if self.in_forest[x]},
            "pseudo": {p: sorted(self.originals[p]) for p in cur if p >= self.n},
        }

    def final_marks(self) -> dict[int, Optional[Symbol]]:
        """Mark of the projection of every original vertex (``None`` when the
        projection is outside the forest)."""
        out = {}
        for x in range(self.n):
            r = self.find(x)
            out[x] = self.mark_of[r] if self.in_forest[r] else None
        return out


def find_augmenting_walk(lg: LabeledGraph, hook: Optional[TraceHook] = None,
                         check: bool = False,
                         forest_out: Optional[list] = None) -> Union[Walk, Exhausted]:
    """Grow, shrink and expand until an augmenting walk is found or no
    frontier/interior edge remains.

    Frontier edges are always processed before interior edges, smallest edge
    id first.  With ``check`` the walk is validated at the level where it was
    formed before expansion.
    """
    if any(x >= lg.n for e in lg.edges for x in (e.u, e.v)):
        raise ValueError("search starts from a pseudo-free labeled graph")
    f = SearchForest(lg, hook=hook)
    if forest_out is not None:
        forest_out.append(f)
    m = len(lg.edges)
    queued = [False] * m
    pending: list[int] = []
    interior: list[int] = []
    in_interior = [False] * m

    def push_vertex(x: int) -> None:
        for e in lg.incident[x]:
            if not queued[e]:
                queued[e] = True
                heapq.heappush(pending, e)

    for t in sorted(lg.terminals):
        push_vertex(t)
    while True:
        while pending:
            e = heapq.heappop(pending)
            queued[e] = False
            c = f.classify_edge(e)
            if c is None:
                continue
            if c[0] == FRONTIER:
                f.grow(e, c[1], c[2])
                push_vertex(c[2])
            elif not in_interior[e]:
                in_interior[e] = True
                heapq.heappush(interior, e)
        if not interior:
            return Exhausted(f)
        e = heapq.heappop(interior)
        in_interior[e] = False
        c = f.classify_edge(e)
        if c is None or c[0] != INTERIOR:
            continue
        res = f.resolve_interior(e, c[1], c[2])
        if isinstance(res, Walk):
            if check:
                rep = is_shrunk_augmenting(lg, f, res, endpoints=f.ends)
                if not rep:
                    raise SearchError(f"walk at the top level is invalid: {rep.violations}")
            if hook is not None:
                hook({"kind": "walk", "vertices": list(res.vertices), "edges": list(res.edges)})
            return f.expand(res)
        for x in f.shrink(res):
            push_vertex(x)
