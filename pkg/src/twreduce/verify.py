"""Randomized self-checks of the solvers against the brute-force oracles."""

from __future__ import annotations

import random

from . import oracles
from .decomposition import heuristic_decompose, nicify
from .generators import random_graph
from .graph import SteinerInstance
from .hamilton import solve_hamilton
from .partitions import enumerate_partitions
from .policy import ReducePolicy, RunStats
from .reduce import perfect_matchings, reduce, reduce_matchings
from .steiner import solve_steiner

SUITES = ("reduce", "hamilton", "steiner")
MAX_REPORTED_FAILURES = 5


def random_table(t: int, rng: random.Random, wmax: int = 20) -> dict:
    parts = list(enumerate_partitions(t))
    k = rng.randint(1, len(parts))
    return {p: rng.randint(0, wmax) for p in rng.sample(parts, k)}


def random_matching_table(t: int, rng: random.Random, wmax: int = 20) -> dict:
    parts = list(perfect_matchings(t))
    k = rng.randint(1, len(parts))
    return {p: rng.randint(0, wmax) for p in rng.sample(parts, k)}


class _Suite:
    def __init__(self, name):
        self.name = name
        self.trials = 0
        self.failures = []
        self.nfail = 0
        self.stats = RunStats()

    def fail(self, case):
        if len(self.failures) < MAX_REPORTED_FAILURES:
            self.failures.append(case)
        self.nfail += 1

    def absorb(self, st: RunStats):
        agg = self.stats
        agg.nodes += st.nodes
        agg.max_table_rows = max(agg.max_table_rows, st.max_table_rows)
        agg.max_slice_rows = max(agg.max_slice_rows, st.max_slice_rows)
        agg.max_table_rows_after = max(agg.max_table_rows_after, st.max_table_rows_after)
        agg.max_slice_rows_after = max(agg.max_slice_rows_after, st.max_slice_rows_after)
        agg.reduce_calls += st.reduce_calls
        agg.rows_eliminated += st.rows_eliminated
        agg.reduce.add(st.reduce)
        agg.peak_live_rows = max(agg.peak_live_rows, st.peak_live_rows)
        agg.wall_nanos += st.wall_nanos

    def report(self, timing: bool) -> dict:
        return {
            "trials": self.trials,
            "failures": self.nfail,
            "failed_cases": self.failures,
            "pass": self.nfail == 0,
            "stats": self.stats.to_dict(timing),
        }


def verify_reduce(trials: int, rng: random.Random, suite: _Suite,
                  sizes=range(1, 8), matching_sizes=(2, 4, 6, 8)) -> None:
    for t in sizes:
        for _ in range(trials):
            table = random_table(t, rng)
            kept, rs = reduce(table, t)
            suite.trials += 1
            suite.stats.reduce.add(rs)
            suite.stats.reduce_calls += 1
            suite.stats.rows_eliminated += len(table) - len(kept)
            ok = len(kept) <= 1 << (t - 1) and set(kept.items()) <= set(table.items())
            ok = ok and oracles.oracle_representative(table.items(), kept.items(), t)
            if not ok:
                suite.fail({"kind": "reduce", "t": t, "table": sorted([list(p), w] for p, w in table.items())})
    for t in matching_sizes:
        for _ in range(trials):
            table = random_matching_table(t, rng)
            kept, rs = reduce_matchings(table, t)
            suite.trials += 1
            suite.stats.reduce.add(rs)
            suite.stats.reduce_calls += 1
            suite.stats.rows_eliminated += len(table) - len(kept)
            ok = len(kept) <= 1 << (t // 2) and set(kept.items()) <= set(table.items())
            ok = ok and oracles.oracle_representative(table.items(), kept.items(), t, matchings=True)
            if not ok:
                suite.fail({"kind": "matchings", "t": t, "table": sorted([list(p), w] for p, w in table.items())})


def _edges(g):
    return [[u + 1, v + 1, w] for u, v, w in g.edges]


def verify_hamilton(trials: int, rng: random.Random, suite: _Suite, nmin: int = 3, nmax: int = 8,
                    tsp: bool = True) -> None:
    for _ in range(trials):
        n = rng.randint(nmin, nmax)
        g = random_graph(n, rng.uniform(0.25, 0.9), rng, wmax=10)
        nd = nicify(heuristic_decompose(g), g)
        want = oracles.oracle_hamilton(g)
        want_w = oracles.oracle_tsp(g) if tsp else None
        suite.trials += 1
        for kind in ("never", "always"):
            got, st = solve_hamilton(g, nd, "decision", ReducePolicy(kind))
            suite.absorb(st)
            if got != want:
                suite.fail({"kind": "decision", "policy": kind, "n": n, "edges": _edges(g)})
            if tsp:
                got_w, st = solve_hamilton(g, nd, "tsp", ReducePolicy(kind))
                suite.absorb(st)
                if got_w != want_w:
                    suite.fail({"kind": "tsp", "policy": kind, "n": n, "edges": _edges(g)})


def verify_steiner(trials: int, rng: random.Random, suite: _Suite, nmax: int = 10, kmax: int = 4) -> None:
    for _ in range(trials):
        n = rng.randint(2, nmax)
        g = random_graph(n, rng.uniform(0.2, 0.8), rng, wmax=10)
        k = rng.randint(1, min(kmax, n))
        inst = SteinerInstance(g, frozenset(rng.sample(range(n), k)))
        nd = nicify(heuristic_decompose(g), g)
        want = oracles.oracle_steiner(inst)
        suite.trials += 1
        if want != oracles.oracle_steiner_exhaustive(inst):
            suite.fail({"kind": "oracle-disagreement", "n": n, "edges": _edges(g)})
        for kind in ("never", "always"):
            got, st = solve_steiner(inst, nd, ReducePolicy(kind))
            suite.absorb(st)
            if got != want:
                suite.fail({"kind": "steiner", "policy": kind, "n": n, "edges": _edges(g),
                            "terminals": sorted(v + 1 for v in inst.terminals)})


def run_verify(suite: str, trials: int, seed: int, timing: bool = True) -> dict:
    names = SUITES if suite == "all" else (suite,)
    results = {}
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}")
        rng = random.Random(f"{seed}:{name}")
        s = _Suite(name)
        {"reduce": verify_reduce, "hamilton": verify_hamilton, "steiner": verify_steiner}[name](trials, rng, s)
        results[name] = s.report(timing)
    return {
        "schema": "v1",
        "command": "verify",
        "seed": seed,
        "trials": trials,
        "results": results,
        "pass": all(r["pass"] for r in results.values()),
    }
