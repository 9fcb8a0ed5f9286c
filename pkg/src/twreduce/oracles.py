"""Brute-force ground truth at desk scale.

Nothing here imports the DP engines, the reduction code or the partition
algebra; only the graph data type is shared.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

from .graph import Graph, SteinerInstance


class OracleBudgetError(ValueError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_vertices: int = 10
    max_universe: int = 8
    max_matchings_universe: int = 8

    def check_vertices(self, n: int, limit: int | None = None) -> None:
        lim = self.max_vertices if limit is None else limit
        if n > lim:
            raise OracleBudgetError(f"oracle refuses n={n} (budget {lim})")


DEFAULT_BUDGET = OracleBudget()


def bell(t: int) -> int:
    """Bell number via the Bell triangle."""
    if t < 0:
        raise ValueError("bell(t) needs t >= 0")
    row = [1]
    for _ in range(t):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def _weights(g: Graph) -> dict:
    w = {}
    for u, v, x in g.edges:
        w[(u, v)] = w[(v, u)] = x
    return w


def _cycle_weight(order, w):
    total = 0
    for a, b in zip(order, order[1:] + order[:1]):
        x = w.get((a, b))
        if x is None:
            return None
        total += x
    return total


def oracle_hamilton(g: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> bool:
    """Permutation enumeration with vertex 0 fixed first."""
    budget.check_vertices(g.n)
    if g.n < 3:
        return False
    w = _weights(g)
    for perm in permutations(range(1, g.n)):
        if perm[0] > perm[-1]:
            continue
        if _cycle_weight((0,) + perm, w) is not None:
            return True
    return False


def oracle_tsp_permutations(g: Graph, budget: OracleBudget = DEFAULT_BUDGET):
    budget.check_vertices(g.n)
    if g.n < 3:
        return None
    w = _weights(g)
    best = None
    for perm in permutations(range(1, g.n)):
        if perm[0] > perm[-1]:
            continue
        c = _cycle_weight((0,) + perm, w)
        if c is not None and (best is None or c < best):
            best = c
    return best


def oracle_tsp(g: Graph, budget: OracleBudget = DEFAULT_BUDGET):
    """Held-Karp over subsets of vertices ``1..n-1``; ``None`` when no tour exists."""
    budget.check_vertices(g.n, 16)
    n = g.n
    if n < 3:
        return None
    w = _weights(g)
    INF = float("inf")
    full = 1 << (n - 1)
    # dp[mask][j]: cheapest path from 0 through exactly mask (over vertices 1..n-1) ending at j+1
    dp = [[INF] * (n - 1) for _ in range(full)]
    for j in range(n - 1):
        x = w.get((0, j + 1))
        if x is not None:
            dp[1 << j][j] = x
    for mask in range(1, full):
        row = dp[mask]
        for j in range(n - 1):
            cur = row[j]
            if cur == INF:
                continue
            for k in range(n - 1):
                if mask >> k & 1:
                    continue
                x = w.get((j + 1, k + 1))
                if x is None:
                    continue
                nm = mask | (1 << k)
                if cur + x < dp[nm][k]:
                    dp[nm][k] = cur + x
    best = INF
    for j in range(n - 1):
        x = w.get((j + 1, 0))
        if x is not None and dp[full - 1][j] + x < best:
            best = dp[full - 1][j] + x
    return None if best == INF else int(best)


def _dijkstra(g: Graph, src: int) -> list:
    dist = [None] * g.n
    dist[src] = 0
    heap = [(0, src)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v in g.adj[u]:
            nd = d + g.weight(u, v)
            if dist[v] is None or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def oracle_steiner(inst: SteinerInstance, budget: OracleBudget = DEFAULT_BUDGET):
    """Dreyfus-Wagner subset DP over terminals; ``None`` when terminals are disconnected."""
    g = inst.graph
    budget.check_vertices(g.n)
    terms = sorted(inst.terminals)
    if len(terms) == 1:
        return 0
    dist = [_dijkstra(g, s) for s in range(g.n)]
    if any(dist[terms[0]][t] is None for t in terms):
        return None
    INF = float("inf")

    def d(a, b):
        x = dist[a][b]
        return INF if x is None else x

    k = len(terms)
    # best[mask][v]: cheapest tree spanning terminals in mask plus vertex v
    best = [[INF] * g.n for _ in range(1 << k)]
    for i, t in enumerate(terms):
        for v in range(g.n):
            best[1 << i][v] = d(t, v)
    for mask in range(1, 1 << k):
        if mask & (mask - 1) == 0:
            continue
        row = best[mask]
        sub = (mask - 1) & mask
        while sub:
            if sub < mask ^ sub:
                a, b = best[sub], best[mask ^ sub]
                for v in range(g.n):
                    s = a[v] + b[v]
                    if s < row[v]:
                        row[v] = s
            sub = (sub - 1) & mask
        relaxed = [min(row[u] + d(u, v) for u in range(g.n)) for v in range(g.n)]
        best[mask] = relaxed
    return int(min(best[(1 << k) - 1]))


def oracle_steiner_exhaustive(inst: SteinerInstance, budget: OracleBudget = DEFAULT_BUDGET):
    """Minimum spanning tree weight over every vertex set containing the terminals."""
    g = inst.graph
    budget.check_vertices(g.n)
    terms = set(inst.terminals)
    if len(terms) == 1:
        return 0
    others = [v for v in range(g.n) if v not in terms]
    best = None
    for r in range(len(others) + 1):
        for extra in combinations(others, r):
            vs = terms | set(extra)
            es = sorted((w, u, v) for u, v, w in g.edges if u in vs and v in vs)
            parent = {v: v for v in vs}

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            total, used = 0, 0
            for w, u, v in es:
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv
                    total += w
                    used += 1
            if used == len(vs) - 1 and (best is None or total < best):
                best = total
    return best


# --- partition and matching enumeration, kept separate from the library's own


@lru_cache(maxsize=None)
def all_partitions(t: int) -> tuple:
    """Every set partition of ``range(t)`` as a tuple of frozensets."""
    if t == 0:
        return ((),)
    out = []
    for p in all_partitions(t - 1):
        out.append(p + (frozenset([t - 1]),))
        for i in range(len(p)):
            out.append(p[:i] + (p[i] | {t - 1},) + p[i + 1:])
    return tuple(out)


@lru_cache(maxsize=None)
def all_matchings(t: int) -> tuple:
    return tuple(p for p in all_partitions(t) if all(len(b) == 2 for b in p))


def partition_key(labels) -> frozenset:
    """Block structure of a labelling (any hashable block ids) as a frozenset of frozensets."""
    blocks: dict = {}
    for i, b in enumerate(labels):
        blocks.setdefault(b, set()).add(i)
    return frozenset(frozenset(s) for s in blocks.values())


def connects(p, q, t: int) -> bool:
    """Whether the union of two partitions (iterables of blocks) is a single block."""
    if t == 0:
        return True
    comp = list(range(t))

    def find(x):
        while comp[x] != x:
            x = comp[x]
        return x

    merges = 0
    for part in (p, q):
        for block in part:
            it = iter(block)
            root = find(next(it))
            for y in it:
                ry = find(y)
                if ry != root:
                    comp[ry] = root
                    merges += 1
    return merges == t - 1


def one_cycle(p, q, t: int) -> bool:
    """Union of two perfect matchings is one cycle iff it is connected (it is 2-regular)."""
    return t > 0 and connects(p, q, t)


@lru_cache(maxsize=None)
def _compat_masks(t: int, matchings: bool):
    qs = all_matchings(t) if matchings else all_partitions(t)
    ps = {}
    for p in qs:
        mask = 0
        for j, q in enumerate(qs):
            if (one_cycle if matchings else connects)(p, q, t):
                mask |= 1 << j
        ps[frozenset(p)] = mask
    return ps, len(qs)


def min_profile(rows, t: int, matchings: bool = False) -> dict:
    """For each completion ``q`` (by index), the minimum weight of a compatible row.

    ``rows`` is an iterable of ``(labels, weight)``; labels are any block
    labelling of ``range(t)``.
    """
    masks, nq = _compat_masks(t, matchings)
    pending = (1 << nq) - 1
    out = {}
    for labels, w in sorted(rows, key=lambda r: r[1]):
        hit = masks[partition_key(labels)] & pending
        pending &= ~hit
        while hit:
            low = hit & -hit
            out[low.bit_length() - 1] = w
            hit ^= low
    return out


def oracle_representative(input_rows, output_rows, t: int, matchings: bool = False,
                          budget: OracleBudget = DEFAULT_BUDGET) -> bool:
    """True iff the output achieves the input's minimum for every completion."""
    lim = budget.max_matchings_universe if matchings else budget.max_universe
    if t > lim:
        raise OracleBudgetError(f"oracle refuses universe {t} (budget {lim})")
    a = min_profile(input_rows, t, matchings)
    b = min_profile(output_rows, t, matchings)
    return a == b
