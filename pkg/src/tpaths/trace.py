"""Graphviz rendering of search events, one DOT document per event."""

from __future__ import annotations

from typing import Optional, TextIO

from .labeled import FREE, LABELED, LOOP, STAR, LabeledGraph


def _sym(s) -> str:
    return STAR if s == STAR else str(s + 1)


class DotTrace:
    """Search hook that renders every event as a DOT document.

    A ``round`` event (sent by the solvers before each search) binds the
    labeled graph that later events refer to and renders nothing.
    """

    def __init__(self) -> None:
        self.documents: list[str] = []
        self.lg: Optional[LabeledGraph] = None
        self.round = 0

    def bind(self, lg: LabeledGraph) -> None:
        self.lg = lg
        self.round += 1

    def __call__(self, event: dict) -> None:
        if event["kind"] == "round":
            self.bind(event["graph"])
            return
        if self.lg is None:
            raise RuntimeError("bind a labeled graph before searching")
        self.documents.append(render_event(self.lg, event, len(self.documents), self.round))

    def write(self, sink: TextIO) -> None:
        for doc in self.documents:
            sink.write(doc)
            sink.write("\n")


def render_event(lg: LabeledGraph, event: dict, index: int, round_no: int = 1) -> str:
    kind = event["kind"]
    state = event.get("state", {})
    forest = set(state.get("forest_edges", ()))
    marks = state.get("marks", {})
    pseudo = state.get("pseudo", {})
    hot: set[int] = set()
    if kind == "grow":
        hot.add(event["edge"])
    elif kind == "shrink":
        hot.add(event["edge"])
    elif kind == "walk":
        hot.update(event["edges"])
    title = {"grow": f"grow edge {event.get('edge')}",
             "shrink": f"shrink into pseudo-vertex {event.get('pseudo')}",
             "expand": f"expand pseudo-vertex {event.get('pseudo')} case {event.get('case')}",
             "walk": "augmenting walk"}.get(kind, kind)
    out = [f"graph step_{index} {{",
           f'  label="round {round_no}: {title}";',
           "  node [shape=circle];"]
    inside = {x: p for p, xs in pseudo.items() for x in xs}
    owner_mark = {x: marks.get(p) for x, p in inside.items()}
    for p, xs in sorted(pseudo.items()):
        out.append(f"  subgraph cluster_{p} {{")
        out.append(f'    label="{STAR}"; style=filled; fillcolor=lightgrey;')
        out.extend(f"    v{x};" for x in xs)
        out.append("  }")
    for x in range(lg.n):
        mk = owner_mark.get(x, marks.get(x))
        label = f"{x + 1}" if mk is None else f"{x + 1}\\n{_sym(mk)}"
        shape = ", shape=doublecircle" if x in lg.terminals else ""
        out.append(f'  v{x} [label="{label}"{shape}];')
    for i, ed in enumerate(lg.edges):
        attrs = []
        if ed.kind == LABELED:
            attrs.append(f'taillabel="{_sym(ed.sym_u)}", headlabel="{_sym(ed.sym_v)}"')
        elif ed.kind == LOOP:
            attrs.append(f'label="{_sym(ed.sym_u)}{_sym(ed.sym_v)}", style=dotted')
        elif ed.kind == FREE:
            attrs.append("style=dashed")
        if i in forest:
            attrs.append("penwidth=3, color=blue")
        if i in hot:
            attrs.append("color=red, penwidth=3")
        out.append(f"  v{ed.u} -- v{ed.v} [id=e{i}, {', '.join(attrs)}];")
    out.append("}")
    return "\n".join(out) + "\n"
