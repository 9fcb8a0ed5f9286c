"""Undirected edge-weighted graphs and the PACE ``.gr`` exchange format.

Vertices are 1-based in files and 0-based in memory. The conversion happens
only in this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field

INF = (1 << 64) - 1


class ParseError(ValueError):
    """Malformed instance file; the message names the offending line."""


def checked_add(a: int, b: int) -> int:
    s = a + b
    if a >= INF or b >= INF or s >= INF:
        raise OverflowError(f"weight overflow: {a} + {b}")
    return s


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``edges`` holds ``(u, v, w)`` with ``u < v``, sorted, parallel edges
    collapsed to their minimum weight.
    """

    n: int
    edges: tuple[tuple[int, int, int], ...]
    adj: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)
    _weight: dict = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        best: dict[tuple[int, int], int] = {}
        for e in edges:
            u, v = e[0], e[1]
            w = e[2] if len(e) > 2 else 1
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if w < 0 or w >= INF:
                raise ValueError(f"edge weight {w} out of range")
            key = (u, v) if u < v else (v, u)
            if key not in best or w < best[key]:
                best[key] = w
        es = tuple(sorted((u, v, w) for (u, v), w in best.items()))
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v, _ in es:
            nbrs[u].append(v)
            nbrs[v].append(u)
        adj = tuple(tuple(sorted(a)) for a in nbrs)
        return cls(n, es, adj, dict(best))

    @property
    def m(self) -> int:
        return len(self.edges)

    def weight(self, u: int, v: int) -> int:
        return self._weight[(u, v) if u < v else (v, u)]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._weight

    def validate(self) -> None:
        """Check that the adjacency index agrees with the edge list."""
        seen = set()
        for u, v, w in self.edges:
            assert 0 <= u < v < self.n and 0 <= w < INF
            assert (u, v) not in seen
            seen.add((u, v))
            assert self._weight[(u, v)] == w
        for u in range(self.n):
            for v in self.adj[u]:
                assert ((u, v) if u < v else (v, u)) in seen
        assert sum(len(a) for a in self.adj) == 2 * len(self.edges)


@dataclass(frozen=True)
class SteinerInstance:
    graph: Graph
    terminals: frozenset[int]

    def __post_init__(self):
        if not self.terminals:
            raise ValueError("Steiner requires ≥1 terminal")
        for t in self.terminals:
            if not 0 <= t < self.graph.n:
                raise ValueError(f"terminal {t + 1} out of range")


def _text(data) -> str:
    if isinstance(data, (bytes, bytearray)):
        return data.decode("utf-8")
    return data


def parse_gr(data) -> Graph:
    """Parse a PACE ``.gr`` file, optionally with a third weight column."""
    n = m = None
    edges = []
    for lineno, raw in enumerate(_text(data).splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if n is not None:
                raise ParseError(f"duplicate header, line {lineno}")
            if len(parts) != 4 or parts[1] != "tw":
                raise ParseError(f"malformed header, line {lineno}")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"malformed header, line {lineno}") from None
            if n < 0 or m < 0:
                raise ParseError(f"malformed header, line {lineno}")
            continue
        if n is None:
            raise ParseError(f"edge before header, line {lineno}")
        if len(parts) not in (2, 3):
            raise ParseError(f"malformed edge line, line {lineno}")
        try:
            vals = [int(x) for x in parts]
        except ValueError:
            raise ParseError(f"non-integer token, line {lineno}") from None
        u, v = vals[0], vals[1]
        w = vals[2] if len(vals) == 3 else 1
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(f"vertex id out of range, line {lineno}")
        if u == v:
            raise ParseError(f"self-loop, line {lineno}")
        if w < 0:
            raise ParseError(f"negative weight, line {lineno}")
        if w >= INF:
            raise ParseError(f"weight too large, line {lineno}")
        edges.append((u - 1, v - 1, w))
    if n is None:
        raise ParseError("missing header 'p tw <n> <m>'")
    if len(edges) != m:
        raise ParseError(f"edge count mismatch: header says {m}, found {len(edges)}")
    return Graph.from_edges(n, edges)


def serialize_gr(g: Graph, weights: bool = True) -> str:
    lines = [f"p tw {g.n} {g.m}"]
    for u, v, w in g.edges:
        lines.append(f"{u + 1} {v + 1} {w}" if weights else f"{u + 1} {v + 1}")
    return "\n".join(lines) + "\n"


def parse_terminals(data, n: int | None = None) -> frozenset[int]:
    """Whitespace-separated 1-based vertex ids, returned 0-based and deduplicated."""
    out = set()
    for tok in _text(data).split():
        try:
            v = int(tok)
        except ValueError:
            raise ParseError(f"bad terminal id {tok!r}") from None
        if v < 1 or (n is not None and v > n):
            raise ParseError(f"terminal {v} out of range")
        out.add(v - 1)
    if not out:
        raise ParseError("Steiner requires ≥1 terminal")
    return frozenset(out)
