"""Compare the compiled and pure-Python GF(2) kernels.

Kernel level: cut-basis elimination on random partition tables, both backends
in one process. End to end: one Steiner solve under the ``always`` policy in a
fresh interpreter per backend (the backend is fixed at import).

    python3 benchmarks/bench_kernels.py --t 8 10 12 --rows 4000
"""

import argparse
import json
import os
import subprocess
import sys
import time

from twreduce import kernels
from twreduce.bench import kernel_benchmark

E2E = """
import random, time
from twreduce import kernels
from twreduce.decomposition import nicify
from twreduce.generators import random_partial_ktree
from twreduce.graph import SteinerInstance
from twreduce.policy import ReducePolicy
from twreduce.steiner import solve_steiner
g, td = random_partial_ktree({n}, {k}, random.Random(7), keep=0.5, wmax=10, path=True)
nd = nicify(td, g)
t0 = time.perf_counter()
ans, st = solve_steiner(SteinerInstance(g, frozenset(range(g.n))), nd, policy=ReducePolicy("always"))
print(kernels.BACKEND, ans, st.reduce.xor_word_ops, time.perf_counter() - t0)
"""


def end_to_end(n, k):
    rows = []
    for backend in sorted(kernels.backends()):
        env = dict(os.environ, TWREDUCE_KERNEL=backend)
        out = subprocess.run([sys.executable, "-c", E2E.format(n=n, k=k)], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        rows.append({"backend": out[0], "answer": int(out[1]), "xor_word_ops": int(out[2]),
                     "seconds": float(out[3])})
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t", type=int, nargs="+", default=[8, 10, 12])
    ap.add_argument("--rows", type=int, default=4000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--n", type=int, default=14)
    ap.add_argument("--k", type=int, default=9)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    t0 = time.perf_counter()
    report = {"kernel": [r for t in args.t for r in kernel_benchmark(t, args.rows, repeat=args.repeat)],
              "end_to_end": end_to_end(args.n, args.k)}
    if args.json:
        print(json.dumps(report, indent=2))
        return
    print(f"{'t':>3} {'rows':>6} {'backend':>8} {'rank':>6} {'ops':>10} {'seconds':>9}")
    for r in report["kernel"]:
        flag = "" if r["agrees"] else "  MISMATCH"
        print(f"{r['t']:>3} {r['rows']:>6} {r['backend']:>8} {r['rank']:>6} {r['xor_word_ops']:>10} "
              f"{r['seconds']:>9.4f}{flag}")
    print()
    for r in report["end_to_end"]:
        print(f"steiner n={args.n} k={args.k} {r['backend']:>8} answer={r['answer']} "
              f"ops={r['xor_word_ops']} {r['seconds']:.3f}s")
    print(f"total {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
