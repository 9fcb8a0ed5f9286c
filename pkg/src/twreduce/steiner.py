"""Minimum-weight Steiner tree by dynamic programming over a nice tree decomposition.

Table key ``(S, p)``: ``S`` is a bitmask over bag positions of the vertices
chosen into the partial tree, ``p`` a partition (restricted-growth tuple) of
the chosen positions in position order. Every component of a partial
solution touches the bag; a component whose last bag vertex is forgotten is
either a complete solution (recorded as an answer candidate) or discarded.
"""

from __future__ import annotations

import time

from .decomposition import FORGET, INTRODUCE, INTRODUCE_EDGE, JOIN, LEAF, NiceDecomposition
from .graph import INF, SteinerInstance, checked_add
from .partitions import canonicalize, lattice_join, merge_blocks, remove_position
from .policy import ReducePolicy, RunStats, apply_policy
from .reduce import reduce


def _shrink(mask: int, i: int) -> int:
    return ((mask >> (i + 1)) << i) | (mask & ((1 << i) - 1))


def _put(table, key, w):
    old = table.get(key)
    if old is None or w < old:
        table[key] = w


def _split(key):
    return key


def _join_key(label, p):
    return (label, p)


def _cap(t):
    return 1 << (t - 1) if t else 1


def _permute(table, perm):
    """Re-express a table in another bag order; ``perm[i]`` is the new position of old position ``i``."""
    out = {}
    for (S, p), w in table.items():
        pairs = []
        j = 0
        newS = 0
        for i, np_ in enumerate(perm):
            if S >> i & 1:
                newS |= 1 << np_
                pairs.append((np_, p[j]))
                j += 1
        pairs.sort()
        out[(newS, canonicalize(b for _, b in pairs))] = w
    return out


def solve_steiner(inst: SteinerInstance, nd: NiceDecomposition, policy: ReducePolicy | None = None,
                  on_node=None, record_nodes: bool = False):
    """Return ``(weight or None, RunStats)``; ``None`` means the terminals cannot be connected."""
    policy = policy or ReducePolicy()
    g = inst.graph
    stats = RunStats(per_node_rows=[] if record_nodes else None)
    t_start = time.perf_counter_ns()
    if nd.n != g.n:
        raise ValueError(f"decomposition has {nd.n} vertices, graph has {g.n}")
    if sum(1 for x in nd.nodes if x.kind == INTRODUCE_EDGE) != g.m:
        raise ValueError("decomposition does not introduce every graph edge exactly once")
    if len(inst.terminals) == 1:
        stats.wall_nanos = time.perf_counter_ns() - t_start
        return 0, stats

    terminals = inst.terminals
    k = len(terminals)
    nodes = nd.nodes
    term_count = [0] * len(nodes)
    tables: dict[int, dict] = {}
    live = 0
    best = INF

    for idx, node in enumerate(nodes):
        kind = node.kind
        if kind == LEAF:
            table = {(0, ()): 0}
        elif kind == INTRODUCE:
            c = node.children[0]
            child = tables.pop(c)
            v = node.vertex
            is_term = v in terminals
            term_count[idx] = term_count[c] + is_term
            bit = 1 << (len(node.bag) - 1)
            table = {}
            for (S, p), w in child.items():
                if not is_term:
                    table[(S, p)] = w
                table[(S | bit, p + ((max(p) + 1) if p else 0,))] = w
        elif kind == INTRODUCE_EDGE:
            c = node.children[0]
            table = tables.pop(c)
            term_count[idx] = term_count[c]
            u, v, ew = node.edge
            bag = node.bag
            iu, iv = bag.index(u), bag.index(v)
            need = (1 << iu) | (1 << iv)
            mu, mv = (1 << iu) - 1, (1 << iv) - 1
            new = dict(table)
            for (S, p), w in table.items():
                if S & need == need:
                    q = merge_blocks(p, (S & mu).bit_count(), (S & mv).bit_count())
                    _put(new, (S, q), checked_add(w, ew))
            table = new
        elif kind == FORGET:
            c = node.children[0]
            child = tables.pop(c)
            term_count[idx] = term_count[c]
            i = nodes[c].bag.index(node.vertex)
            bit = 1 << i
            low = bit - 1
            done = term_count[idx] == k
            table = {}
            for (S, p), w in child.items():
                if not S & bit:
                    _put(table, (_shrink(S, i), p), w)
                    continue
                q, single = remove_position(p, (S & low).bit_count())
                if single:
                    if S == bit and done and w < best:
                        best = w
                    continue
                _put(table, (_shrink(S, i), q), w)
        elif kind == JOIN:
            a, b = node.children
            left, right = tables.pop(a), tables.pop(b)
            term_count[idx] = term_count[a] + term_count[b] - sum(1 for v in node.bag if v in terminals)
            rbag = nodes[b].bag
            if rbag != node.bag:
                pos = {v: j for j, v in enumerate(node.bag)}
                right = _permute(right, [pos[v] for v in rbag])
            by_label: dict = {}
            for (S, q), x in right.items():
                by_label.setdefault(S, []).append((q, x))
            table = {}
            for (S, p), w in left.items():
                for q, x in by_label.get(S, ()):
                    _put(table, (S, lattice_join(p, q)), checked_add(w, x))
        else:
            raise ValueError(f"unknown node kind {kind}")

        table = apply_policy(table, policy, nd.width, stats, _split, _join_key, reduce, _cap)
        tables[idx] = table
        stats.nodes += 1
        live = sum(len(t) for t in tables.values())
        stats.peak_live_rows = max(stats.peak_live_rows, live)
        if record_nodes:
            stats.per_node_rows.append(len(table))
        if on_node is not None:
            on_node(idx, node, table)

    stats.wall_nanos = time.perf_counter_ns() - t_start
    return (None if best == INF else best), stats
