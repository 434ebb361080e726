"""Turn k edge-disjoint T-paths plus an augmenting walk into k+1 paths.

The walk is rewritten with shortcut and uncrossing operations until it uses
no labeled edge; each rewrite strictly lowers the number of segments and is
re-validated against the rebuilt labeled graph before it is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .graph import (InvalidInstance, MultiGraph, Multiflow, Network, TPath, edge_disjoint,
                    validate_tpath)
from .labeled import (FREE, LABELED, LOOP, LabeledGraph, Walk, _first_symbol, _last_symbol,
                      build_auxiliary, build_auxiliary_flow, is_augmenting,
                      remove_redundant_selfloops)


class AugmentError(RuntimeError):
    """No rewrite of the walk passed validation; carries the state."""

    def __init__(self, message: str, state: dict):
        super().__init__(f"{message}: {state}")
        self.state = state


@dataclass(frozen=True)
class Segment:
    """Maximal stretch ``Q[start, stop]`` of walk edges owned by one path.

    ``direction`` is ``+1`` when the stretch runs towards the path's stored
    end and ``-1`` otherwise; a selfloop counts as ``+1`` because its symbol
    pair is stored in path order.
    """

    start: int
    stop: int
    path: int
    direction: int
    first: int
    last: int
    loop: bool = False

    @property
    def label(self) -> str:
        return "st" if self.direction > 0 else "ts"


@dataclass
class AugmentLog:
    """What happened during one augmentation: segment counts and moves."""

    mu: list[int] = field(default_factory=list)
    moves: list[str] = field(default_factory=list)
    uncrossings: int = 0


def _positions(p: TPath) -> dict[int, int]:
    return {x: i for i, x in enumerate(p.vertices)}


def segments(lg: LabeledGraph, q: Walk, paths: Sequence[TPath]) -> list[Segment]:
    """Path segments of a walk without redundant selfloops."""
    out: list[Segment] = []
    es = q.edges
    i = 0
    while i < len(es):
        ed = lg.edges[es[i]]
        if ed.kind == FREE:
            i += 1
            continue
        j = ed.path
        k = i
        while k + 1 < len(es) and lg.edges[es[k + 1]].kind != FREE and lg.edges[es[k + 1]].path == j:
            k += 1
        out.append(_make_segment(lg, q, paths[j], j, i, k + 1))  # type: ignore[index,arg-type]
        i = k + 1
    return out


def _make_segment(lg: LabeledGraph, q: Walk, p: TPath, j: int, a: int, b: int) -> Segment:
    es, vs = q.edges[a:b], q.vertices[a:b + 1]
    if len(es) == 1 and lg.edges[es[0]].kind == LOOP:
        return Segment(a, b, j, 1, vs[0], vs[0], loop=True)
    pos = _positions(p)
    if any(lg.edges[e].kind == LOOP for e in es):
        raise AugmentError("segment mixes a selfloop with path edges", {"start": a, "stop": b})
    d = pos[vs[1]] - pos[vs[0]]
    for i, e in enumerate(es):
        if pos[vs[i + 1]] - pos[vs[i]] != d or abs(d) != 1:
            raise AugmentError("segment is not a subpath of its path", {"start": a, "stop": b})
        k = min(pos[vs[i]], pos[vs[i + 1]])
        if p.edges[k] != e:
            raise AugmentError("segment edge is not on its path", {"start": a, "stop": b})
    return Segment(a, b, j, d, vs[0], vs[-1])


def subpath(p: TPath, x: int, y: int) -> tuple[list[int], list[int]]:
    """``P(x, y)`` traversed from ``x`` to ``y``."""
    pos = _positions(p)
    i, k = pos[x], pos[y]
    if i <= k:
        return list(p.vertices[i:k + 1]), list(p.edges[i:k])
    return list(p.vertices[k:i + 1])[::-1], list(p.edges[k:i])[::-1]


def simple_path(vs: Sequence[int], es: Sequence[int]) -> TPath:
    """Delete closed sub-walks until no vertex repeats; endpoints survive."""
    out_v: list[int] = []
    out_e: list[int] = []
    where: dict[int, int] = {}
    for i, x in enumerate(vs):
        if x in where:
            k = where[x]
            for y in out_v[k + 1:]:
                del where[y]
            del out_v[k + 1:]
            del out_e[k:]
        else:
            if i > 0:
                out_e.append(es[i - 1])
            where[x] = len(out_v)
            out_v.append(x)
            continue
    return TPath(tuple(out_v), tuple(out_e))


def _splice(q: Walk, a: int, d: int, vs: Sequence[int], es: Sequence[int]) -> Walk:
    """Replace ``Q[a, d]`` by the walk ``vs``/``es`` (same end vertices)."""
    if vs[0] != q.vertices[a] or vs[-1] != q.vertices[d]:
        raise ValueError("replacement must keep the end vertices")
    return Walk(q.vertices[:a] + tuple(vs) + q.vertices[d + 1:],
                q.edges[:a] + tuple(es) + q.edges[d:])


def _path_edge_set(p: TPath, x: int, y: int) -> set[int]:
    return set(subpath(p, x, y)[1])


def shortcut_applicable(lg: LabeledGraph, q: Walk, paths: Sequence[TPath],
                        segs: Sequence[Segment], first: Segment, second: Segment) -> bool:
    """Whether the shortcut over ``Q[first.start, second.stop]`` is allowed.

    ``first`` determines which end of its path is the target terminal.
    """
    if first.path != second.path or first.stop > second.start:
        return False
    p = paths[first.path]
    pos = _positions(p)
    va, vd = first.first, second.last
    sign = first.direction
    target = p.end if sign > 0 else p.start
    if sign * (pos[vd] - pos[va]) < 0:
        return False
    if _first_symbol(lg, q.vertices, q.edges, second.stop) == target:
        return False
    if va == vd:
        loop = lg.loop_of.get((first.path, va))
        outside = q.edges[:first.start] + q.edges[second.stop:]
        return loop is None or loop not in outside
    used = _path_edge_set(p, va, vd)
    for s in segs:
        if s.path != first.path or s.loop or s.direction != sign:
            continue
        if s.stop <= first.start or s.start >= second.stop:
            if used & set(q.edges[s.start:s.stop]):
                return False
    return True


def find_shortcut_pair(lg: LabeledGraph, q: Walk, paths: Sequence[TPath], j: int,
                       segs: Optional[Sequence[Segment]] = None) -> Optional[tuple[Segment, Segment]]:
    """An applicable pair of ``P_j`` segments, or ``None``.

    Pairs with equal directions are preferred over mixed ones, then the pair
    whose shortcut is shortest on ``P_j``, then the earliest one.
    """
    segs = segments(lg, q, paths) if segs is None else segs
    own = [s for s in segs if s.path == j]
    pos = _positions(paths[j])
    best = None
    for i, first in enumerate(own):
        for second in own[i + 1:]:
            if not shortcut_applicable(lg, q, paths, segs, first, second):
                continue
            mixed = 0 if first.direction == second.direction or second.loop or first.loop else 1
            key = (mixed, abs(pos[second.last] - pos[first.first]), first.start, second.start)
            if best is None or key < best[0]:
                best = (key, (first, second))
    return None if best is None else best[1]


def all_shortcut_pairs(lg: LabeledGraph, q: Walk, paths: Sequence[TPath]) -> list[tuple[Segment, Segment]]:
    """Every applicable pair, for cross-checking the search above."""
    segs = segments(lg, q, paths)
    return [(a, b) for i, a in enumerate(segs) for b in segs[i + 1:]
            if shortcut_applicable(lg, q, paths, segs, a, b)]


def segment_order_holds(lg: LabeledGraph, q: Walk, paths: Sequence[TPath], j: int) -> bool:
    """The ordering conditions that characterise "no shortcut for P_j".

    Same-direction segments must be pairwise distinct in their outer ends and
    lie on the path in reverse walk order; a later opposite segment that
    ends beyond an earlier one must be followed by the earlier one's target
    symbol.
    """
    p = paths[j]
    pos = _positions(p)
    own = [s for s in segments(lg, q, paths) if s.path == j]
    for i, a in enumerate(own):
        target = p.end if a.direction > 0 else p.start
        for b in own[i + 1:]:
            if a.direction == b.direction:
                if a.first == b.last:
                    return False
                lo_a = min(pos[a.first], pos[a.last])
                hi_a = max(pos[a.first], pos[a.last])
                lo_b = min(pos[b.first], pos[b.last])
                hi_b = max(pos[b.first], pos[b.last])
                ahead = hi_b <= lo_a if a.direction > 0 else lo_b >= hi_a
                if not ahead:
                    return False
            elif a.direction * (pos[b.last] - pos[a.first]) >= 0:
                if _first_symbol(lg, q.vertices, q.edges, b.stop) != target:
                    return False
    return True


def apply_shortcut(lg: LabeledGraph, q: Walk, paths: Sequence[TPath],
                   pair: tuple[Segment, Segment], check: bool = True) -> Walk:
    """Replace ``Q[a, d]`` by the path stretch between ``v_a`` and ``v_d``."""
    first, second = pair
    if check and not shortcut_applicable(lg, q, paths, segments(lg, q, paths), first, second):
        raise AugmentError("shortcut is not applicable",
                           {"first": first, "second": second})
    return _shortcut(lg, q, paths, first.path, first.start, second.stop)


def _shortcut(lg: LabeledGraph, q: Walk, paths: Sequence[TPath], j: int, a: int, d: int) -> Walk:
    va, vd = q.vertices[a], q.vertices[d]
    if va != vd:
        vs, es = subpath(paths[j], va, vd)
        return _splice(q, a, d, vs, es)
    before = _last_symbol(lg, q.vertices, q.edges, a)
    after = _first_symbol(lg, q.vertices, q.edges, d)
    loop = lg.loop_of.get((j, va))
    if before == after and loop is not None:
        return _splice(q, a, d, [va, va], [loop])
    return _splice(q, a, d, [va], [])


def uncross(q: Walk, first: tuple[int, int], second: tuple[int, int]) -> Walk:
    """Drop two identical stretches and reverse what lies between them."""
    a, b = first
    c, d = second
    if not (a < b <= c < d):
        raise ValueError("stretches must be ordered and non-empty")
    if q.vertices[a:b + 1] != q.vertices[c:d + 1] or q.edges[a:b] != q.edges[c:d]:
        raise ValueError("stretches are not identical")
    return Walk(q.vertices[:a] + q.vertices[b:c + 1][::-1] + q.vertices[d + 1:],
                q.edges[:a] + q.edges[b:c][::-1] + q.edges[d:])


def _next_duplicate(q: Walk, head: int) -> Optional[tuple[tuple[int, int], tuple[int, int]]]:
    """Maximal stretch of ``Q[0, head]`` repeated later in the same order,
    taking the repeat closest to ``head`` first."""
    vs, es = q.vertices, q.edges
    later: dict[tuple[int, int], int] = {}
    for k in range(len(es) - 1, head - 1, -1):
        later[(es[k], vs[k])] = k
    for i in range(head - 1, -1, -1):
        k = later.get((es[i], vs[i]))
        if k is None:
            continue
        lo_i, lo_k = i, k
        while lo_i > 0 and lo_k - 1 >= head and es[lo_i - 1] == es[lo_k - 1] and vs[lo_i - 1] == vs[lo_k - 1]:
            lo_i, lo_k = lo_i - 1, lo_k - 1
        hi_i, hi_k = i, k
        while hi_i + 1 < head and hi_k + 1 < len(es) and es[hi_i + 1] == es[hi_k + 1] \
                and vs[hi_i + 1] == vs[hi_k + 1]:
            hi_i, hi_k = hi_i + 1, hi_k + 1
        return (lo_i, hi_i + 1), (lo_k, hi_k + 1)
    return None


def step_2b(lg: LabeledGraph, q: Walk, paths: Sequence[TPath], seg: Segment,
            log: Optional[AugmentLog] = None) -> tuple[list[TPath], Walk]:
    """Reroute the path of the walk's first segment through the walk's free
    prefix and restart the walk at the path's other terminal.

    The returned walk still uses ids of ``lg``.
    """
    j = seg.path
    p = paths[j]
    s = p.start if seg.direction > 0 else p.end
    t = p.end if seg.direction > 0 else p.start
    a, b = seg.start, seg.stop
    head_v, head_e = subpath(p, seg.first, s)
    rerouted = simple_path(q.vertices[:a + 1] + tuple(head_v[1:]), q.edges[:a] + tuple(head_e))
    tail_v, tail_e = subpath(p, t, seg.last)
    dropped = set(subpath(p, seg.first, t)[0][1:])
    rest_v: list[int] = [q.vertices[b]]
    rest_e: list[int] = []
    for k in range(b, len(q.edges)):
        ed = lg.edges[q.edges[k]]
        if ed.kind == LOOP and ed.path == j and ed.u in dropped:
            continue
        rest_e.append(q.edges[k])
        rest_v.append(q.vertices[k + 1])
    w = Walk(tuple(tail_v) + tuple(rest_v[1:]), tuple(tail_e) + tuple(rest_e))
    head = len(tail_e)
    while True:
        dup = _next_duplicate(w, head)
        if dup is None:
            break
        w = uncross(w, dup[0], dup[1])
        head = dup[0][0]
        if log is not None:
            log.uncrossings += 1
    out = list(paths)
    out[j] = rerouted
    return out, w


def carry_walk(old: LabeledGraph, new: LabeledGraph, m: int, q: Walk) -> Walk:
    """Re-express a walk in a rebuilt labeled graph; selfloops that no longer
    exist are dropped."""
    vs = [q.vertices[0]]
    es: list[int] = []
    for k, e in enumerate(q.edges):
        if e >= m:
            ed = old.edges[e]
            e2 = new.loop_of.get((ed.path, ed.u))
            if e2 is None:
                continue
            e = e2
        es.append(e)
        vs.append(q.vertices[k + 1])
    return Walk(tuple(vs), tuple(es))


def _free_t_path(q: Walk) -> TPath:
    return simple_path(q.vertices, q.edges)


def _candidates(lg: LabeledGraph, q: Walk, paths: list[TPath], segs: list[Segment],
                log: Optional[AugmentLog]) -> Iterator[tuple[str, list[TPath], Walk]]:
    j = segs[0].path
    pair = find_shortcut_pair(lg, q, paths, j, segs)
    if pair is not None:
        yield "shortcut", paths, apply_shortcut(lg, q, paths, pair, check=False)
    else:
        np, nq = step_2b(lg, q, paths, segs[0], log)
        yield "step_2b", np, nq
    # Fallbacks: shortcuts between any two segments of one path, then the
    # rerouting step applied from the other end of the walk.
    for i, a in enumerate(segs):
        for c in segs[i + 1:]:
            if a.path == c.path:
                yield "shortcut_any", paths, _shortcut(lg, q, paths, a.path, a.start, c.stop)
    rq = q.reversed()
    rsegs = segments(lg, rq, paths)
    np, nq = step_2b(lg, rq, paths, rsegs[0], log)
    yield "step_2b_reversed", np, nq


def _accept(g: MultiGraph, terminals: frozenset[int], lg: LabeledGraph, paths: list[TPath],
            q: Walk, mu: int):
    if not all(validate_tpath(g, terminals, p) for p in paths) or not edge_disjoint(paths):
        return None
    nlg = build_auxiliary(g, terminals, paths)
    nq = remove_redundant_selfloops(nlg, carry_walk(lg, nlg, g.m, q))
    if not is_augmenting(nlg, nq):
        return None
    try:
        segs = segments(nlg, nq, paths)
    except AugmentError:
        return None
    if len(segs) >= mu:
        return None
    return nlg, nq, segs


def augment(g: MultiGraph, terminals, paths: Sequence[TPath], q: Walk,
            log: Optional[AugmentLog] = None) -> list[TPath]:
    """``k`` edge-disjoint T-paths and an augmenting walk -> ``k + 1`` paths."""
    t = frozenset(terminals)
    paths = list(paths)
    lg = build_auxiliary(g, t, paths)
    rep = is_augmenting(lg, q)
    if not rep:
        raise InvalidInstance(f"walk is not augmenting: {rep.violations}")
    q = remove_redundant_selfloops(lg, q)
    segs = segments(lg, q, paths)
    while True:
        mu = len(segs)
        if log is not None:
            log.mu.append(mu)
        if mu == 0:
            out = paths + [_free_t_path(q)]
            if not edge_disjoint(out) or not all(validate_tpath(g, t, p) for p in out):
                raise AugmentError("free walk did not yield a new T-path", {"walk": q})
            return out
        for move, np, nq in _candidates(lg, q, paths, segs, log):
            res = _accept(g, t, lg, np, nq, mu)
            if res is not None:
                lg, q, segs = res
                paths = np
                if log is not None:
                    log.moves.append(move)
                break
        else:
            raise AugmentError("no rewrite lowers the segment count",
                               {"paths": paths, "walk": q, "segments": segs})


def _unit_expansion(net: Network, f: Multiflow):
    """Unit-capacity multigraph with ``c(e)`` copies of each edge, and the
    multiflow's paths spread over distinct copies."""
    g = net.graph
    base = []
    edges = []
    for e, (u, v) in enumerate(g.edges):
        base.append(len(edges))
        edges.extend([(u, v)] * net.capacities[e])
    unit = MultiGraph(g.n, tuple(edges))
    used = [0] * g.m
    unit_paths: list[TPath] = []
    first_copy: dict[int, int] = {}
    for j, (p, alpha) in enumerate(zip(f.paths, f.coefficients)):
        for copy in range(alpha):
            es = []
            for e in p.edges:
                es.append(base[e] + used[e])
                used[e] += 1
            if copy == 0:
                first_copy[j] = len(unit_paths)
            unit_paths.append(TPath(p.vertices, tuple(es)))
    origin = [e for e, c in enumerate(net.capacities) for _ in range(c)]
    return unit, unit_paths, first_copy, base, used, origin


def augment_flow(net: Network, terminals, f: Multiflow, q: Walk,
                 log: Optional[AugmentLog] = None) -> Multiflow:
    """Raise the value of an integral multiflow by one along an augmenting
    walk of its labeled graph.

    The flow is spread over unit copies of the edges, the walk is translated
    to that graph, and the uncapacitated augmentation runs there.
    """
    t = frozenset(terminals)
    lg = build_auxiliary_flow(net, t, f)
    rep = is_augmenting(lg, q)
    if not rep:
        raise InvalidInstance(f"walk is not augmenting: {rep.violations}")
    q = remove_redundant_selfloops(lg, q)
    unit, unit_paths, first_copy, base, used, origin = _unit_expansion(net, f)
    ulg = build_auxiliary(unit, t, unit_paths)
    spare_next = list(used)
    es: list[int] = []
    for k, e in enumerate(q.edges):
        ed = lg.edges[e]
        if ed.kind == FREE:
            o = ed.origin
            es.append(base[o] + spare_next[o])  # type: ignore[index]
            spare_next[o] += 1  # type: ignore[index]
        elif ed.kind == LABELED:
            up = unit_paths[first_copy[ed.path]]  # type: ignore[index]
            es.append(next(x for x in up.edges if origin[x] == ed.origin))
        else:
            es.append(ulg.loop_of[(first_copy[ed.path], ed.u)])  # type: ignore[index]
    uq = Walk(q.vertices, tuple(es))
    rep = is_augmenting(ulg, uq)
    if not rep:
        raise AugmentError("walk did not translate to the unit graph", {"violations": rep.violations})
    out = augment(unit, t, unit_paths, uq, log)
    paths = tuple(TPath(p.vertices, tuple(origin[e] for e in p.edges)) for p in out)
    result = Multiflow(paths, (1,) * len(paths)).normalized()
    load = result.load(net.graph.m)
    if any(z > c for z, c in zip(load, net.capacities)) or result.value != f.value + 1:
        raise AugmentError("capacitated augmentation broke feasibility", {"flow": result})
    return result
