"""Benchmark harness: per (instance, policy) solve records, plus a kernel-backend comparison."""

from __future__ import annotations

import csv
import io
import multiprocessing as mp
import os
import random
import time
from pathlib import Path

from . import kernels
from .decomposition import heuristic_decompose, nicify, parse_td
from .generators import cycle, cycle_decomposition, random_graph, random_partial_ktree
from .graph import SteinerInstance, parse_gr, parse_terminals
from .hamilton import solve_hamilton
from .oracles import bell
from .policy import ReducePolicy
from .schema import SCHEMA_VERSION
from .steiner import solve_steiner

POLICIES = ("never", "always", "threshold")


def solve_instance(problem, g, td=None, terminals=None, policy=None, strategy="min-degree",
                   matching_reduce=True, record_nodes=False):
    """Decompose if needed and run one engine; returns ``(answer, stats, width)``.

    ``answer`` is in output form: ``"yes"``/``"no"``, an integer weight, or ``"infeasible"``.
    """
    if td is None:
        td = heuristic_decompose(g, strategy)
    nd = nicify(td, g)
    if problem == "steiner":
        inst = SteinerInstance(g, frozenset(terminals))
        ans, st = solve_steiner(inst, nd, policy, record_nodes=record_nodes)
        out = "infeasible" if ans is None else ans
    elif problem == "hamilton":
        ans, st = solve_hamilton(g, nd, "decision", policy, matching_reduce, record_nodes=record_nodes)
        out = "yes" if ans else "no"
    elif problem == "tsp":
        ans, st = solve_hamilton(g, nd, "tsp", policy, matching_reduce, record_nodes=record_nodes)
        out = "infeasible" if ans is None else ans
    else:
        raise ValueError(f"unknown problem {problem!r}")
    return out, st, nd.width


def _parse_spec(spec: str):
    kind, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, _, val = item.partition("=")
        params[key.strip()] = val.strip()
    return kind.strip(), params


def generate(spec: str, problem: str, terminal_frac: float = 1.0):
    """Yield ``(name, graph, td or None, terminals)`` from a generator spec.

    Specs: ``ktree:n=14,k=9,keep=0.5,wmax=10,path=1,seed=1,count=1``,
    ``random:n=8,p=0.5,wmax=10,seed=1,count=5``, ``cycle:n=1000``.
    """
    kind, ps = _parse_spec(spec)
    seed = int(ps.get("seed", 0))
    count = int(ps.get("count", 1))
    rng = random.Random(f"{spec}")
    for i in range(count):
        if kind == "ktree":
            n, k = int(ps["n"]), int(ps["k"])
            g, td = random_partial_ktree(n, k, rng, float(ps.get("keep", 1.0)), int(ps.get("wmax", 1)),
                                         path=ps.get("path", "0") not in ("0", "false"))
            name = f"ktree-n{n}-k{k}-s{seed}-{i}"
        elif kind == "random":
            n = int(ps["n"])
            g, td = random_graph(n, float(ps.get("p", 0.5)), rng, int(ps.get("wmax", 1))), None
            name = f"random-n{n}-s{seed}-{i}"
        elif kind == "cycle":
            n = int(ps["n"])
            g, td = cycle(n), cycle_decomposition(n)
            name = f"cycle-n{n}"
        else:
            raise ValueError(f"unknown generator {kind!r}")
        terms = None
        if problem == "steiner":
            k = max(1, round(terminal_frac * g.n))
            terms = frozenset(range(g.n)) if k >= g.n else frozenset(rng.sample(range(g.n), k))
        yield name, g, td, terms


def load_dir(path, problem: str):
    for gr in sorted(Path(path).glob("*.gr")):
        g = parse_gr(gr.read_bytes())
        tdp = gr.with_suffix(".td")
        td = parse_td(tdp.read_bytes(), g) if tdp.exists() else None
        terms = None
        if problem == "steiner":
            tp = gr.with_suffix(".terminals")
            terms = parse_terminals(tp.read_bytes(), g.n) if tp.exists() else frozenset(range(g.n))
        yield gr.stem, g, td, terms


def _record(name, problem, kind, g, td, terms, threshold, matching_reduce, timing):
    rec = {"schema": SCHEMA_VERSION, "instance": name, "problem": problem, "policy": kind,
           "n": g.n, "m": g.m}
    try:
        ans, st, width = solve_instance(problem, g, td, terms, ReducePolicy(kind, threshold),
                                        matching_reduce=matching_reduce)
    except Exception as exc:  # recorded, the run continues
        rec.update(status="error", error=f"{type(exc).__name__}: {exc}")
        return rec
    rec.update(status="ok", answer=ans, width=width, bell_ceiling=bell(width + 1),
               reduce_cap=1 << max(width, 0), stats=st.to_dict(timing))
    return rec


def _child(conn, args):
    conn.send(_record(*args))
    conn.close()


def _run_with_timeout(args, timeout):
    ctx = mp.get_context("fork")
    parent, child = ctx.Pipe(duplex=False)
    proc = ctx.Process(target=_child, args=(child, args))
    proc.start()
    child.close()
    if parent.poll(timeout):
        rec = parent.recv()
        proc.join()
        return rec
    proc.terminate()
    proc.join()
    name, problem, kind, g = args[:4]
    return {"schema": SCHEMA_VERSION, "instance": name, "problem": problem, "policy": kind,
            "n": g.n, "m": g.m, "status": "timeout", "timeout_s": timeout}


def run_bench(instances, problem: str, policies=POLICIES, threshold=None, timeout=None,
              matching_reduce=True, timing=True):
    """One record per (instance, policy), in input order."""
    threads = max(1, int(os.environ.get("TWREDUCE_THREADS", "1")))
    jobs = [(name, problem, kind, g, td, terms, threshold, matching_reduce, timing)
            for name, g, td, terms in instances for kind in policies]
    if timeout is None and threads == 1:
        return [_record(*job) for job in jobs]
    if timeout is None:
        ctx = mp.get_context("fork")
        with ctx.Pool(threads) as pool:
            return pool.starmap(_record, jobs)
    out = []
    for job in jobs:
        out.append(_run_with_timeout(job, timeout))
    return out


def _flatten(rec):
    row = {k: v for k, v in rec.items() if k != "stats"}
    for k, v in rec.get("stats", {}).items():
        if isinstance(v, dict):
            for k2, v2 in v.items():
                row[f"{k}_{k2}"] = v2
        elif not isinstance(v, list):
            row[k] = v
    return row


def to_csv(records) -> str:
    rows = [_flatten(r) for r in records]
    fields = []
    for r in rows:
        for k in r:
            if k not in fields:
                fields.append(k)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def kernel_benchmark(t: int = 10, rows: int = 2000, seed: int = 0, repeat: int = 3) -> list[dict]:
    """Time every available kernel backend on the same random cut-basis workload."""
    from .partitions import canonicalize

    rng = random.Random(seed)
    parts = sorted({canonicalize(rng.randrange(t) for _ in range(t)) for _ in range(rows)})
    out = []
    reference = None
    for name, mod in sorted(kernels.backends().items()):
        best = None
        for _ in range(repeat):
            t0 = time.perf_counter()
            kept, ops = mod.cut_basis(parts, t)
            dt = time.perf_counter() - t0
            best = dt if best is None else min(best, dt)
        if reference is None:
            reference = (kept, ops)
        out.append({"backend": name, "t": t, "rows": len(parts), "rank": len(kept), "xor_word_ops": ops,
                    "seconds": best, "agrees": (kept, ops) == reference})
    return out
