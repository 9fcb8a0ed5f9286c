"""Hamiltonian cycle and TSP by dynamic programming over a nice tree decomposition.

A state is a tuple over bag positions: ``-1`` for a vertex of degree 0 in
the partial edge set, ``-2`` for degree 2, and otherwise the position of the
other endpoint of the open path this vertex ends. As a (label, partition)
pair that is a degree vector plus a perfect matching on the degree-1
positions. Closing the last cycle never creates a table entry; it goes to
an answer accumulator.
"""

from __future__ import annotations

import time

from .decomposition import FORGET, INTRODUCE, INTRODUCE_EDGE, JOIN, LEAF, NiceDecomposition
from .graph import INF, Graph, checked_add
from .partitions import canonicalize
from .policy import ReducePolicy, RunStats, apply_policy
from .reduce import reduce, reduce_matchings

D0, D2 = -1, -2


def _put(table, key, w):
    old = table.get(key)
    if old is None or w < old:
        table[key] = w


def split_state(s):
    """State tuple -> (degree vector, matching on degree-1 positions)."""
    ones = [i for i, x in enumerate(s) if x >= 0]
    rank = {i: j for j, i in enumerate(ones)}
    label = tuple(0 if x == D0 else 2 if x == D2 else 1 for x in s)
    p = canonicalize(rank[min(i, s[i])] for i in ones)
    return label, p


def join_state(label, p):
    ones = [i for i, d in enumerate(label) if d == 1]
    s = [D0 if d == 0 else D2 for d in label]
    first = {}
    for j, b in enumerate(p):
        i = ones[j]
        o = first.get(b)
        if o is None:
            first[b] = i
        else:
            s[i], s[o] = o, i
    return tuple(s)


def _permute(table, perm):
    out = {}
    t = len(perm)
    for s, w in table.items():
        r = [0] * t
        for i, x in enumerate(s):
            r[perm[i]] = x if x < 0 else perm[x]
        out[tuple(r)] = w
    return out


def _glue(s, r):
    """Combine two states over one bag.

    Returns ``(state, None)`` for an ordinary result, ``(None, True)`` when the
    union closes exactly one cycle and leaves no vertex of degree 0 or 1, and
    ``(None, False)`` when the combination is invalid.
    """
    t = len(s)
    out = [D2] * t
    internal = 0
    ends = []
    for i in range(t):
        a, b = s[i], r[i]
        d = (0 if a == D0 else 2 if a == D2 else 1) + (0 if b == D0 else 2 if b == D2 else 1)
        if d > 2:
            return None, False
        if d == 0:
            out[i] = D0
        elif d == 1:
            ends.append(i)
        elif a >= 0:
            internal += 1
    seen = 0
    for e in ends:
        if out[e] != D2:
            continue
        side, other = (s, r) if s[e] >= 0 else (r, s)
        x = side[e]
        while other[x] >= 0:
            seen += 1
            x = other[x]
            side, other = other, side
        out[e], out[x] = x, e
    if seen == internal:
        return tuple(out), None
    if ends or D0 in out:
        return None, False
    start = next(i for i in range(t) if s[i] >= 0 and r[i] >= 0)
    x, length = start, 0
    while True:
        x = r[s[x]]
        length += 2
        if x == start:
            break
    return None, length == internal


def solve_hamilton(g: Graph, nd: NiceDecomposition, mode: str = "decision",
                   policy: ReducePolicy | None = None, matching_reduce: bool = True,
                   on_node=None, record_nodes: bool = False):
    """Return ``(answer, RunStats)``.

    ``mode="decision"`` answers ``True``/``False``; ``mode="tsp"`` answers the
    minimum cycle weight or ``None`` when no Hamiltonian cycle exists.
    """
    if mode not in ("decision", "tsp"):
        raise ValueError(f"unknown mode {mode!r}")
    policy = policy or ReducePolicy()
    stats = RunStats(per_node_rows=[] if record_nodes else None)
    t_start = time.perf_counter_ns()
    if nd.n != g.n:
        raise ValueError(f"decomposition has {nd.n} vertices, graph has {g.n}")
    if sum(1 for x in nd.nodes if x.kind == INTRODUCE_EDGE) != g.m:
        raise ValueError("decomposition does not introduce every graph edge exactly once")
    if g.n < 3:
        stats.wall_nanos = time.perf_counter_ns() - t_start
        return (False if mode == "decision" else None), stats

    weighted = mode == "tsp"
    n = g.n
    nodes = nd.nodes
    counts = nd.subtree_vertex_counts()
    if matching_reduce:
        reducer = reduce_matchings

        def cap(t):
            return 1 << (t // 2)
    else:
        reducer = reduce

        def cap(t):
            return 1 << (t - 1) if t else 1

    tables: dict[int, dict] = {}
    best = INF

    for idx, node in enumerate(nodes):
        kind = node.kind
        if kind == LEAF:
            table = {(): 0}
        elif kind == INTRODUCE:
            child = tables.pop(node.children[0])
            table = {s + (D0,): w for s, w in child.items()}
        elif kind == INTRODUCE_EDGE:
            table = tables.pop(node.children[0])
            u, v, ew = node.edge
            if not weighted:
                ew = 0
            iu, iv = node.bag.index(u), node.bag.index(v)
            complete = counts[idx] == n
            new = dict(table)
            for s, w in table.items():
                su, sv = s[iu], s[iv]
                if su == D2 or sv == D2:
                    continue
                if su == D0:
                    if sv == D0:
                        r = list(s)
                        r[iu], r[iv] = iv, iu
                    else:
                        r = list(s)
                        r[iv] = D2
                        r[iu] = sv
                        r[sv] = iu
                elif sv == D0:
                    r = list(s)
                    r[iu] = D2
                    r[iv] = su
                    r[su] = iv
                elif su == iv:
                    if complete and all(x == D2 for i, x in enumerate(s) if i != iu and i != iv):
                        c = checked_add(w, ew)
                        if c < best:
                            best = c
                    continue
                else:
                    r = list(s)
                    r[iu] = r[iv] = D2
                    r[su], r[sv] = sv, su
                _put(new, tuple(r), checked_add(w, ew))
            table = new
        elif kind == FORGET:
            c = node.children[0]
            child = tables.pop(c)
            i = nodes[c].bag.index(node.vertex)
            table = {}
            for s, w in child.items():
                if s[i] != D2:
                    continue
                r = tuple(x - 1 if x > i else x for x in s[:i] + s[i + 1:])
                _put(table, r, w)
        elif kind == JOIN:
            a, b = node.children
            left, right = tables.pop(a), tables.pop(b)
            rbag = nodes[b].bag
            if rbag != node.bag:
                pos = {v: j for j, v in enumerate(node.bag)}
                right = _permute(right, [pos[v] for v in rbag])
            complete = counts[idx] == n
            table = {}
            for s, w in left.items():
                for r, x in right.items():
                    out, closed = _glue(s, r)
                    if out is not None:
                        _put(table, out, checked_add(w, x))
                    elif closed and complete:
                        c = checked_add(w, x)
                        if c < best:
                            best = c
        else:
            raise ValueError(f"unknown node kind {kind}")

        table = apply_policy(table, policy, nd.width, stats, split_state, join_state, reducer, cap)
        tables[idx] = table
        stats.nodes += 1
        stats.peak_live_rows = max(stats.peak_live_rows, sum(len(t) for t in tables.values()))
        if record_nodes:
            stats.per_node_rows.append(len(table))
        if on_node is not None:
            on_node(idx, node, table)

    stats.wall_nanos = time.perf_counter_ns() - t_start
    if mode == "decision":
        return best != INF, stats
    return (None if best == INF else best), stats
