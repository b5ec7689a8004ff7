"""Command-line front end.

Exit codes: 0 success, 1 bad input, 2 verification mismatch.  Reports go to
stdout as JSON (CSV for ``bench``); diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import generators
from .costs import SCALE, Kind, objective, tour_objective
from .errors import HalinTSPError
from .instance_io import Instance, dump_json, dumps, read_instance, read_tour
from .oracle import DEFAULT_CAP, brute_solve, check_consecutiveness
from .reduction import ReductionOutput, decode_tour_to_assignment, parse_dimacs, sat_to_rqtsp
from .solver import solve

EXIT_INPUT = 1
EXIT_MISMATCH = 2


def _emit(doc) -> None:
    sys.stdout.write(dump_json(doc))


def _report(inst: Instance, tour, value, k: int, solver: str, elapsed_ms=None) -> dict:
    doc = {
        "tour": list(tour),
        "value_external": value // SCALE,
        "value_internal": value,
        "k": k,
        "solver": solver,
    }
    if elapsed_ms is not None:
        doc["elapsed_ms"] = round(elapsed_ms, 3)
    return doc


def cmd_solve(args) -> int:
    inst = read_instance(args.input)
    k = args.k if args.k is not None else inst.k
    t0 = time.perf_counter()
    if args.oracle:
        sol = brute_solve(inst.H, inst.costs, Kind.for_k(k), cap=args.cap)
        name = "oracle"
    else:
        sol = solve(inst.H, inst.costs, k)
        name = "dp"
    elapsed = (time.perf_counter() - t0) * 1000 if args.timing else None
    recomputed = tour_objective(inst.H, sol.tour, inst.costs, k).value
    if recomputed != sol.value.value:
        print(f"error: tour re-evaluates to {recomputed}, solver reported {sol.value.value}",
              file=sys.stderr)
        return EXIT_MISMATCH
    doc = _report(inst, sol.tour, sol.value.value, k, name, elapsed)
    if args.verify:
        other = brute_solve(inst.H, inst.costs, Kind.for_k(k), cap=args.cap) if not args.oracle \
            else solve(inst.H, inst.costs, k)
        if other.value.value != sol.value.value:
            _emit(doc)
            print(f"error: verification mismatch: {name} {sol.value.value} vs "
                  f"{'oracle' if name == 'dp' else 'dp'} {other.value.value}", file=sys.stderr)
            return EXIT_MISMATCH
        doc["verified"] = True
    _emit(doc)
    return 0


def _write_or_print(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_generate(args) -> int:
    lo, hi = args.cost_min, args.cost_max
    if args.type == "wheel":
        if args.rim is None:
            raise generators.InvalidParams("--type wheel needs --rim")
        inst = generators.gen_wheel(args.rim, args.seed, (lo, hi), args.k)
    else:
        if args.internal is None:
            raise generators.InvalidParams("--type random needs --internal")
        inst = generators.gen_random_halin(args.internal, args.max_fanout, args.seed, (lo, hi),
                                           args.q_density, args.extra_fraction, args.k)
    _write_or_print(dumps(inst), args.out)
    return 0


def _sidecar_path(out: str, explicit) -> Path:
    return Path(explicit) if explicit else Path(str(out) + ".map.json")


def cmd_reduce(args) -> int:
    f = parse_dimacs(Path(args.cnf).read_text())
    red = sat_to_rqtsp(f)
    Path(args.out).write_text(dumps(red.instance))
    side = _sidecar_path(args.out, args.map)
    side.write_text(dump_json(red.to_sidecar()))
    _emit({"instance": str(args.out), "map": str(side), "n": red.H.n,
           "clauses": len(f.clauses), "threshold": red.threshold})
    return 0


def cmd_verify(args) -> int:
    inst = read_instance(args.input)
    tour = read_tour(args.tour)
    doc = {}
    for k in (1, 2, 3):
        doc[f"TSP{k}"] = tour_objective(inst.H, tour, inst.costs, k).value // SCALE
    doc["QTSP"] = objective(inst.H, tour, inst.costs, Kind.QTSP).value // SCALE
    doc["consecutive"] = check_consecutiveness(inst.H, tour)
    if args.map:
        from .reduction import sat_brute

        red = ReductionOutput.from_sidecar(inst, json.loads(Path(args.map).read_text()))
        if doc["QTSP"] <= red.threshold:
            a = decode_tour_to_assignment(red, tour)
            doc["assignment"] = {f"x{i + 1}": v for i, v in enumerate(a.values)}
            doc["satisfies"] = a.satisfies(red.formula)
        else:
            doc["assignment"] = None
        if red.formula.num_vars <= 24:
            doc["sat_brute"] = sat_brute(red.formula)
    _emit(doc)
    return 0


def cmd_bench(args) -> int:
    sizes = [int(x) for x in args.sizes.split(",") if x]
    print("n,elapsed_ms,value")
    for n in sizes:
        inst = generators.gen_halin_of_size(n, seed=args.seed)
        best = None
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            sol = solve(inst.H, inst.costs, args.k)
            dt = (time.perf_counter() - t0) * 1000
            best = dt if best is None else min(best, dt)
        print(f"{inst.n},{best:.1f},{sol.value.external}")
        sys.stdout.flush()
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="halintsp", description="Exact TSP(k) on Halin graphs")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("input")
    s.add_argument("-k", type=int, choices=(1, 2, 3), default=None, help="defaults to the file's k")
    s.add_argument("--oracle", action="store_true", help="brute force instead of the DP")
    s.add_argument("--verify", action="store_true", help="run both solvers; exit 2 if they differ")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP, help="node cap for the brute force")
    s.add_argument("--timing", action="store_true", help="include elapsed_ms in the report")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("generate", help="write a seeded random instance")
    g.add_argument("--type", choices=("wheel", "random"), required=True)
    g.add_argument("--rim", type=int)
    g.add_argument("--internal", type=int)
    g.add_argument("--max-fanout", type=int, default=4)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--cost-min", type=int, default=0)
    g.add_argument("--cost-max", type=int, default=9)
    g.add_argument("--q-density", type=float, default=0.5)
    g.add_argument("--extra-fraction", type=float, default=0.1)
    g.add_argument("-k", type=int, choices=(1, 2, 3), default=3)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("reduce", help="compile a 3-CNF formula to an RQTSP instance")
    r.add_argument("--cnf", required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--map", help="sidecar path (default: OUT.map.json)")
    r.set_defaults(func=cmd_reduce)

    v = sub.add_parser("verify", help="evaluate a given tour")
    v.add_argument("--input", required=True)
    v.add_argument("--tour", required=True)
    v.add_argument("--map", help="reduction sidecar: decode and check the assignment")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="time the DP on generated instances (CSV)")
    b.add_argument("--sizes", default="1000,10000,100000")
    b.add_argument("--seed", type=int, default=1)
    b.add_argument("--repeat", type=int, default=1)
    b.add_argument("-k", type=int, choices=(1, 2, 3), default=3)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HalinTSPError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, KeyError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
