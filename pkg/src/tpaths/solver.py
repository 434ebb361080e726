"""End-to-end maximisation loops with min-max certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .augment import AugmentLog, augment, augment_flow
from .graph import (MultiGraph, Multiflow, Network, TPath, TSubpartition, check_terminals,
                    components_outside, edge_disjoint, kappa, multiflow_problems,
                    validate_subpartition, validate_tpath)
from .labeled import FREE, LABELED, LabeledGraph, build_auxiliary, build_auxiliary_flow
from .search import Exhausted, SearchForest, TraceHook, find_augmenting_walk


class CertificateError(AssertionError):
    """The final search state does not certify optimality."""


@dataclass
class RoundInfo:
    walk_length: int
    walk_vertices: int
    mu: list[int]
    moves: list[str]
    grows: int
    shrinks: int


@dataclass
class Solution:
    paths: list[TPath]
    certificate: TSubpartition
    kappa: int
    rounds: list[RoundInfo] = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.paths)


@dataclass
class FlowSolution:
    flow: Multiflow
    certificate: TSubpartition
    kappa: int
    rounds: list[RoundInfo] = field(default_factory=list)
    init: str = "zero"

    @property
    def value(self) -> int:
        return self.flow.value


def extract_certificate(state: Exhausted) -> TSubpartition:
    """Group original vertices by the mark of their final projection."""
    forest = state.forest
    marks = forest.final_marks()
    parts: dict[int, set[int]] = {s: set() for s in forest.lg.terminals}
    for x, mk in marks.items():
        if mk in parts:
            parts[mk].add(x)  # type: ignore[index]
    return TSubpartition({s: frozenset(xs) for s, xs in parts.items()})


def certificate_problems(lg: LabeledGraph, g: MultiGraph, x: TSubpartition,
                         capacities: Optional[Sequence[int]] = None) -> list[str]:
    """Check the three structural properties of a final search state.

    ``lg`` is the labeled graph the search ran on; its non-loop edges carry
    ``origin`` pointers to ``g``.
    """
    out = []
    owner = x.owner()
    for i, ed in enumerate(lg.edges):
        if ed.u == ed.v:
            continue
        su, sv = owner.get(ed.u), owner.get(ed.v)
        if su == sv:
            continue
        if ed.kind == FREE and su is not None and sv is not None:
            out.append(f"free edge {i} joins parts {su} and {sv}")
        if ed.kind == LABELED:
            if su is not None and ed.sym_u != su:
                out.append(f"labeled edge {i} leaves part {su} with symbol {ed.sym_u}")
            if sv is not None and ed.sym_v != sv:
                out.append(f"labeled edge {i} leaves part {sv} with symbol {ed.sym_v}")
    covered = x.union()
    for comp in components_outside(g, x):
        free = 0
        for ed in lg.edges:
            if ed.kind == FREE and ((ed.u in comp and ed.v in covered) or (ed.v in comp and ed.u in covered)):
                free += 1
        degree = 0
        for e, (u, v) in enumerate(g.edges):
            if (u in comp) != (v in comp):
                degree += 1 if capacities is None else capacities[e]
        if free > 1 or (free == 1) != (degree % 2 == 1):
            out.append(f"outside component {sorted(comp)} has {free} free boundary edges "
                       f"and boundary degree {degree}")
    return out


def _round_info(q, log: AugmentLog, state: SearchForest) -> RoundInfo:
    return RoundInfo(len(q.edges), len(q.vertices), list(log.mu), list(log.moves),
                     state.stats.grows, state.stats.shrinks)


def max_edge_disjoint_tpaths(g: MultiGraph, terminals, hook: Optional[TraceHook] = None) -> Solution:
    """Maximum family of edge-disjoint T-paths and a T-subpartition whose
    bound equals its size."""
    t = check_terminals(g, terminals)
    paths: list[TPath] = []
    rounds: list[RoundInfo] = []
    while True:
        lg = build_auxiliary(g, t, paths)
        if hook is not None:
            hook({"kind": "round", "graph": lg})
        holder: list[SearchForest] = []
        res = find_augmenting_walk(lg, hook=hook, forest_out=holder)
        if isinstance(res, Exhausted):
            break
        log = AugmentLog()
        paths = augment(g, t, paths, res, log)
        rounds.append(_round_info(res, log, holder[0]))
    cert = extract_certificate(res)
    problems = certificate_problems(lg, g, cert)
    if problems:
        raise CertificateError("; ".join(problems))
    value = kappa(g, t, cert)
    if value != len(paths):
        raise CertificateError(f"bound {value} differs from {len(paths)} paths")
    return Solution(paths, cert, value, rounds)


def max_integer_multiflow(net: Network, terminals, hook: Optional[TraceHook] = None) -> FlowSolution:
    """Maximum integral free multiflow, starting from the empty flow."""
    g = net.graph
    t = check_terminals(g, terminals)
    f = Multiflow()
    rounds: list[RoundInfo] = []
    while True:
        lg = build_auxiliary_flow(net, t, f)
        if hook is not None:
            hook({"kind": "round", "graph": lg})
        holder: list[SearchForest] = []
        res = find_augmenting_walk(lg, hook=hook, forest_out=holder)
        if isinstance(res, Exhausted):
            break
        log = AugmentLog()
        f = augment_flow(net, t, f, res, log)
        rounds.append(_round_info(res, log, holder[0]))
    cert = extract_certificate(res)
    problems = certificate_problems(lg, g, cert, net.capacities)
    if problems:
        raise CertificateError("; ".join(problems))
    value = kappa(g, t, cert, net.capacities)
    if value != f.value:
        raise CertificateError(f"bound {value} differs from flow value {f.value}")
    return FlowSolution(f, cert, value, rounds)


@dataclass
class VerifyReport:
    checks: dict[str, bool] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    value: Optional[int] = None
    bound: Optional[int] = None

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": self.checks, "notes": self.notes,
                "value": self.value, "bound": self.bound}


def verify(g: MultiGraph, terminals, solution: Union[Sequence[TPath], Multiflow],
           certificate: TSubpartition, capacities: Optional[Sequence[int]] = None) -> VerifyReport:
    """Re-check a solution and certificate from scratch."""
    rep = VerifyReport()
    t = check_terminals(g, terminals)
    if isinstance(solution, Multiflow):
        if capacities is None:
            raise ValueError("a multiflow needs capacities")
        probs = multiflow_problems(Network(g, tuple(capacities)), t, solution)
        rep.checks["paths"] = not any("T-path" in p for p in probs)
        rep.checks["feasible"] = not probs
        rep.notes.extend(probs)
        rep.value = solution.value
    else:
        bad = [i for i, p in enumerate(solution) if not validate_tpath(g, t, p)]
        rep.checks["paths"] = not bad
        rep.notes.extend(f"path {i} is not a T-path" for i in bad)
        rep.checks["feasible"] = edge_disjoint(solution)
        if not rep.checks["feasible"]:
            rep.notes.append("paths share an edge")
        rep.value = len(solution)
    reason = validate_subpartition(g, t, certificate)
    rep.checks["subpartition"] = reason is None
    if reason is not None:
        rep.notes.append(reason)
        rep.checks["equality"] = False
        return rep
    rep.bound = kappa(g, t, certificate, capacities)
    rep.checks["equality"] = rep.bound == rep.value
    if not rep.checks["equality"]:
        rep.notes.append(f"gap: value {rep.value} vs bound {rep.bound}")
    return rep
