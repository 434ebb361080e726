"""Command-line entry point: ``tpaths solve|multiflow|verify|oracle|gen``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .graph import InvalidInstance, Multiflow
from .instance import Instance, generate_instance, parse_instance
from .oracle import brute_max_tpaths, brute_min_kappa, brute_multiflow
from .report import PLAIN, STRUCTURED, emit_result, read_solution
from .solver import max_edge_disjoint_tpaths, max_integer_multiflow, verify
from .trace import DotTrace

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path: str) -> Instance:
    return parse_instance(_read(path))


def _oracle_values(inst: Instance, capacitated: bool) -> dict:
    """Oracle results, or the reason they were skipped."""
    try:
        if capacitated:
            net = inst.network()
            return {"max": brute_multiflow(net, inst.terminals),
                    "min_kappa": brute_min_kappa(inst.graph, inst.terminals, net.capacities)[0]}
        return {"max": brute_max_tpaths(inst.graph, inst.terminals),
                "min_kappa": brute_min_kappa(inst.graph, inst.terminals)[0]}
    except InvalidInstance as ex:
        return {"skipped": str(ex)}


def _solve(args, capacitated: bool) -> int:
    inst = _load(args.instance)
    tracer = DotTrace() if args.trace else None
    if capacitated:
        sol = max_integer_multiflow(inst.network(), inst.terminals, hook=tracer)
        value = sol.value
    else:
        sol = max_edge_disjoint_tpaths(inst.graph, inst.terminals, hook=tracer)
        value = sol.k
    if tracer is not None:
        with open(args.trace, "w", encoding="utf-8") as fh:
            tracer.write(fh)
    sys.stdout.write(emit_result(sol, args.format))
    if args.oracle_check:
        ref = _oracle_values(inst, capacitated)
        agree = "skipped" in ref or ref["max"] == value == ref["min_kappa"]
        print(json.dumps({"oracle": ref, "agrees": agree}), file=sys.stderr)
        if not agree:
            return EXIT_MISMATCH
    return EXIT_OK


def _verify(args) -> int:
    inst = _load(args.instance)
    solution, cert = read_solution(json.loads(_read(args.solution)))
    caps = None
    if isinstance(solution, Multiflow):
        caps = inst.network().capacities
    rep = verify(inst.graph, inst.terminals, solution, cert, caps)
    sys.stdout.write(json.dumps(rep.to_json(), indent=2) + "\n")
    return EXIT_OK if rep.ok else EXIT_MISMATCH


def _oracle(args) -> int:
    inst = _load(args.instance)
    sys.stdout.write(json.dumps(_oracle_values(inst, args.capacitated), indent=2) + "\n")
    return EXIT_OK


def _gen(args) -> int:
    cap = None
    if args.cap_max is not None:
        cap = (args.cap_min, args.cap_max)
    sys.stdout.write(generate_instance(args.n, args.m, args.terminals, args.seed, cap))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tpaths",
                                     description="Maximum edge-disjoint T-paths and integer free multiflows.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (("solve", "maximum edge-disjoint T-paths"),
                            ("multiflow", "maximum integer free multiflow (capacities default to 1)")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("instance", help="instance file, or - for standard input")
        p.add_argument("--trace", metavar="PATH", help="write one DOT document per search event")
        p.add_argument("--format", choices=(STRUCTURED, PLAIN), default=STRUCTURED)
        p.add_argument("--oracle-check", action="store_true",
                       help="compare with the brute-force oracles when the instance is small enough")

    p = sub.add_parser("verify", help="re-check a solution object against an instance")
    p.add_argument("instance")
    p.add_argument("solution", help="JSON produced by solve or multiflow")

    p = sub.add_parser("oracle", help="brute-force optimum and minimum bound")
    p.add_argument("instance")
    p.add_argument("--capacitated", action="store_true")

    p = sub.add_parser("gen", help="seeded random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--terminals", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap-min", type=int, default=1)
    p.add_argument("--cap-max", type=int, default=None,
                   help="emit capacities drawn from [cap-min, cap-max] (simple graph)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "solve":
            return _solve(args, capacitated=False)
        if args.command == "multiflow":
            return _solve(args, capacitated=True)
        if args.command == "verify":
            return _verify(args)
        if args.command == "oracle":
            return _oracle(args)
        return _gen(args)
    except (InvalidInstance, OSError, json.JSONDecodeError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
