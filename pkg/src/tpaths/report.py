"""Result serialisation (JSON or plain text) and reading solutions back."""

from __future__ import annotations

import json
from typing import Union

from .graph import InvalidInstance, Multiflow, TPath, TSubpartition
from .solver import FlowSolution, Solution

STRUCTURED = "structured"
PLAIN = "plain"


def _path_json(p: TPath) -> dict:
    return {"vertices": [v + 1 for v in p.vertices], "edges": [e + 1 for e in p.edges]}


def _certificate_json(x: TSubpartition) -> dict:
    return {str(s + 1): sorted(v + 1 for v in xs) for s, xs in sorted(x.parts.items())}


def result_object(sol: Union[Solution, FlowSolution]) -> dict:
    """Vertex and edge ids are 1-based, as in the instance file."""
    rounds = len(sol.rounds)
    if isinstance(sol, FlowSolution):
        return {
            "val": sol.value,
            "paths": [dict(_path_json(p), coefficient=a)
                      for p, a in zip(sol.flow.paths, sol.flow.coefficients)],
            "certificate": _certificate_json(sol.certificate),
            "kappa": sol.kappa,
            "optimal": sol.kappa == sol.value,
            "metadata": {"rounds": rounds, "initialization": sol.init},
        }
    return {
        "k": sol.k,
        "paths": [_path_json(p) for p in sol.paths],
        "certificate": _certificate_json(sol.certificate),
        "kappa": sol.kappa,
        "optimal": sol.kappa == sol.k,
        "metadata": {"rounds": rounds},
    }


def emit_result(sol: Union[Solution, FlowSolution], fmt: str = STRUCTURED) -> str:
    obj = result_object(sol)
    if fmt == STRUCTURED:
        return json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if fmt != PLAIN:
        raise ValueError(f"unknown format {fmt!r}")
    lines = []
    if "val" in obj:
        lines.append(f"val {obj['val']}")
    else:
        lines.append(f"k {obj['k']}")
    for p in obj["paths"]:
        coef = f" x{p['coefficient']}" if "coefficient" in p else ""
        lines.append("path " + " ".join(map(str, p["vertices"])) + coef)
    for s, xs in obj["certificate"].items():
        lines.append(f"part {s}: " + " ".join(map(str, xs)))
    lines.append(f"kappa {obj['kappa']}")
    lines.append(f"optimal {str(obj['optimal']).lower()}")
    return "\n".join(lines) + "\n"


def read_solution(obj: dict) -> tuple[Union[list[TPath], Multiflow], TSubpartition]:
    """Inverse of :func:`result_object` for the fields ``verify`` needs."""
    try:
        paths = [TPath(tuple(v - 1 for v in p["vertices"]), tuple(e - 1 for e in p["edges"]))
                 for p in obj["paths"]]
        cert = TSubpartition({int(s) - 1: frozenset(v - 1 for v in xs)
                              for s, xs in obj["certificate"].items()})
        if "val" in obj:
            coefs = tuple(int(p.get("coefficient", 1)) for p in obj["paths"])
            return Multiflow(tuple(paths), coefs), cert
        return paths, cert
    except (KeyError, TypeError, AttributeError) as ex:
        raise InvalidInstance(f"malformed solution object: {ex}") from None
