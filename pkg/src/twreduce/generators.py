"""Seeded instance generators for tests and benchmarks."""

from __future__ import annotations

import random

from .decomposition import TreeDecomposition
from .graph import Graph


def random_graph(n: int, p: float, rng: random.Random, wmax: int = 1) -> Graph:
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v, rng.randint(1, wmax)))
    return Graph.from_edges(n, edges)


def graph_from_mask(n: int, mask: int) -> Graph:
    """Graph whose edges are the set bits of ``mask`` over pairs ``(u, v)``, ``u < v``, in lexicographic order."""
    edges = []
    bit = 0
    for u in range(n):
        for v in range(u + 1, n):
            if mask >> bit & 1:
                edges.append((u, v, 1))
            bit += 1
    return Graph.from_edges(n, edges)


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n, 1) for i in range(n)])


def cycle_decomposition(n: int) -> TreeDecomposition:
    """Width-2 path decomposition of the cycle ``0-1-...-(n-1)-0``: bags ``{0, i, i+1}``."""
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    bags = [frozenset((0, i, i + 1)) for i in range(1, n - 1)]
    edges = [(i, i + 1) for i in range(len(bags) - 1)]
    return TreeDecomposition(bags, edges, n)


def random_partial_ktree(n: int, k: int, rng: random.Random, keep: float = 1.0,
                         wmax: int = 1, path: bool = False):
    """Random subgraph of a k-tree with its width-``k`` decomposition.

    With ``path=True`` every new vertex attaches to the most recent clique,
    giving a path decomposition.
    """
    if n < k + 1:
        raise ValueError("need n >= k + 1")
    base = list(range(k + 1))
    cliques = [frozenset(base)]
    edge_set = {(u, v) for u in base for v in base if u < v}
    bags = [frozenset(base)]
    tree_edges = []
    for v in range(k + 1, n):
        ci = len(cliques) - 1 if path else rng.randrange(len(cliques))
        clique = sorted(cliques[ci])
        drop = clique[0] if path else rng.choice(clique)
        sep = [x for x in clique if x != drop]
        for u in sep:
            edge_set.add((u, v))
        new = frozenset(sep + [v])
        cliques.append(new)
        bags.append(new)
        tree_edges.append((ci, len(bags) - 1))
    edges = [(u, v, rng.randint(1, wmax)) for u, v in sorted(edge_set) if rng.random() < keep]
    g = Graph.from_edges(n, edges)
    return g, TreeDecomposition(bags, tree_edges, n)
