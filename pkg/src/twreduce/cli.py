"""Command-line entry point: ``solve``, ``decompose``, ``verify``, ``bench``, ``schema``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import kernels
from .bench import generate, kernel_benchmark, load_dir, run_bench, solve_instance, to_csv
from .decomposition import DecompositionError, heuristic_decompose, parse_td, serialize_td
from .graph import ParseError, parse_gr, parse_terminals
from .policy import ReducePolicy
from .schema import SCHEMA_VERSION, schema_text
from .verify import run_verify

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT = 0, 1, 2


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _add_policy(p):
    p.add_argument("--policy", choices=("never", "always", "threshold"), default="threshold")
    p.add_argument("--threshold", type=int, default=None,
                   help="rows per node before reducing (default 2^(width+1))")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twreduce", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve one instance, JSON on stdout")
    sp.add_argument("problem", choices=("hamilton", "tsp", "steiner"))
    sp.add_argument("--gr", required=True, type=Path)
    sp.add_argument("--td", type=Path)
    sp.add_argument("--terminals", type=Path)
    sp.add_argument("--mode", choices=("decision", "tsp"))
    sp.add_argument("--strategy", choices=("min-degree", "min-fill"), default="min-degree")
    sp.add_argument("--general-reduce", action="store_true",
                    help="use the cut-matrix reduce for matching tables too")
    sp.add_argument("--expect-feasible", action="store_true")
    sp.add_argument("--no-timing", action="store_true", help="omit clock-dependent fields")
    sp.add_argument("--node-rows", action="store_true", help="include per-node table sizes")
    _add_policy(sp)

    dp = sub.add_parser("decompose", help="heuristic tree decomposition in .td format")
    dp.add_argument("--gr", required=True, type=Path)
    dp.add_argument("--strategy", choices=("min-degree", "min-fill"), default="min-degree")
    dp.add_argument("-o", "--output", type=Path)

    vp = sub.add_parser("verify", help="randomized checks against brute-force oracles")
    vp.add_argument("--suite", choices=("reduce", "hamilton", "steiner", "all"), default="all")
    vp.add_argument("--trials", type=int, default=50)
    vp.add_argument("--seed", type=int, default=0)
    vp.add_argument("--no-timing", action="store_true")

    bp = sub.add_parser("bench", help="per (instance, policy) records as CSV or JSON")
    bp.add_argument("--instances", type=Path, help="directory of .gr files (optional .td/.terminals)")
    bp.add_argument("--generate", action="append", default=[], metavar="SPEC",
                    help="e.g. ktree:n=14,k=9,keep=0.5,path=1,seed=1 or cycle:n=1000")
    bp.add_argument("--problem", choices=("hamilton", "tsp", "steiner"), default="hamilton")
    bp.add_argument("--policies", default="never,always,threshold")
    bp.add_argument("--threshold", type=int, default=None)
    bp.add_argument("--terminal-frac", type=float, default=1.0)
    bp.add_argument("--timeout", type=float, default=None, help="seconds per (instance, policy)")
    bp.add_argument("--format", choices=("json", "csv"), default="json")
    bp.add_argument("--no-timing", action="store_true")
    bp.add_argument("--kernels", action="store_true", help="compare kernel backends instead")

    sub.add_parser("schema", help="print the versioned JSON schema")
    return ap


def _cmd_solve(args, ap) -> int:
    if args.problem == "tsp" and args.mode == "decision":
        ap.error("solve tsp computes a weight; --mode decision conflicts (use 'solve hamilton')")
    problem = args.problem
    if problem == "hamilton" and args.mode == "tsp":
        problem = "tsp"
    if problem == "steiner" and args.terminals is None:
        ap.error("solve steiner needs --terminals")
    try:
        g = parse_gr(args.gr.read_bytes())
        td = parse_td(args.td.read_bytes(), g) if args.td else None
        terms = parse_terminals(args.terminals.read_bytes(), g.n) if problem == "steiner" else None
    except (ParseError, DecompositionError, OSError) as exc:
        print(f"twreduce: {exc}", file=sys.stderr)
        return EXIT_INPUT
    policy = ReducePolicy(args.policy, args.threshold)
    answer, st, width = solve_instance(problem, g, td, terms, policy, args.strategy,
                                       matching_reduce=not args.general_reduce, record_nodes=args.node_rows)
    doc = {"schema": SCHEMA_VERSION, "problem": problem, "answer": answer, "n": g.n, "m": g.m,
           "width": width, "policy": args.policy, "backend": kernels.BACKEND,
           "stats": st.to_dict(timing=not args.no_timing)}
    print(_dump(doc))
    if args.expect_feasible and answer in ("no", "infeasible"):
        return EXIT_INFEASIBLE
    return EXIT_OK


def _cmd_decompose(args) -> int:
    try:
        g = parse_gr(args.gr.read_bytes())
    except (ParseError, OSError) as exc:
        print(f"twreduce: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = serialize_td(heuristic_decompose(g, args.strategy))
    if args.output:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_bench(args) -> int:
    if args.kernels:
        print(_dump({"schema": SCHEMA_VERSION, "kernels": kernel_benchmark()}))
        return EXIT_OK
    policies = [p for p in args.policies.split(",") if p]
    for p in policies:
        if p not in ("never", "always", "threshold"):
            print(f"twreduce: unknown policy {p!r}", file=sys.stderr)
            return EXIT_INPUT
    instances = []
    try:
        if args.instances:
            instances.extend(load_dir(args.instances, args.problem))
        for spec in args.generate:
            instances.extend(generate(spec, args.problem, args.terminal_frac))
    except (ParseError, DecompositionError, OSError, ValueError, KeyError) as exc:
        print(f"twreduce: {exc}", file=sys.stderr)
        return EXIT_INPUT
    records = run_bench(instances, args.problem, policies, args.threshold, args.timeout,
                        timing=not args.no_timing)
    if args.format == "csv":
        sys.stdout.write(to_csv(records))
    else:
        print(_dump({"schema": SCHEMA_VERSION, "records": records}))
    return EXIT_OK


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "solve":
        return _cmd_solve(args, ap)
    if args.command == "decompose":
        return _cmd_decompose(args)
    if args.command == "verify":
        report = run_verify(args.suite, args.trials, args.seed, timing=not args.no_timing)
        print(_dump(report))
        return EXIT_OK if report["pass"] else EXIT_INFEASIBLE
    if args.command == "bench":
        return _cmd_bench(args)
    if args.command == "schema":
        sys.stdout.write(schema_text())
        return EXIT_OK
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
