"""Tree decompositions: PACE ``.td`` I/O, validation, elimination heuristics
and conversion to nice form with introduce-edge nodes."""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass

from .graph import Graph, ParseError, _text


class DecompositionError(ValueError):
    """A tree-decomposition invariant does not hold.

    ``invariant`` is one of ``tree``, ``vertex-coverage``, ``edge-coverage``,
    ``connectivity``, ``width``; ``witness`` is the offending object
    (1-based vertex ids).
    """

    def __init__(self, invariant: str, witness, message: str):
        super().__init__(message)
        self.invariant = invariant
        self.witness = witness


@dataclass
class TreeDecomposition:
    bags: list[frozenset[int]]
    edges: list[tuple[int, int]]
    n: int

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1


def validate(td: TreeDecomposition, g: Graph | None = None, declared_width: int | None = None) -> None:
    k = len(td.bags)
    if k == 0:
        raise DecompositionError("tree", None, "decomposition has no bags")
    if len(td.edges) != k - 1:
        raise DecompositionError("tree", len(td.edges), f"{k} bags need {k - 1} tree edges, got {len(td.edges)}")
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in td.edges:
        if not (0 <= a < k and 0 <= b < k):
            raise DecompositionError("tree", (a + 1, b + 1), f"tree edge ({a + 1}, {b + 1}) names a missing bag")
        ra, rb = find(a), find(b)
        if ra == rb:
            raise DecompositionError("tree", (a + 1, b + 1), f"tree edge ({a + 1}, {b + 1}) closes a cycle")
        parent[ra] = rb

    n = td.n if g is None else g.n
    occurrences = [0] * n
    for i, bag in enumerate(td.bags):
        for v in bag:
            if not 0 <= v < n:
                raise DecompositionError("vertex-coverage", v + 1, f"bag {i + 1} holds unknown vertex {v + 1}")
            occurrences[v] += 1
    for v in range(n):
        if occurrences[v] == 0:
            raise DecompositionError("vertex-coverage", v + 1, f"vertex-coverage violated: vertex {v + 1} is in no bag")

    if g is not None:
        covered = set()
        for bag in td.bags:
            if len(bag) < 2:
                continue
            for u in bag:
                for v in g.adj[u]:
                    if u < v and v in bag:
                        covered.add((u, v))
        for u, v, _ in g.edges:
            if (u, v) not in covered:
                raise DecompositionError(
                    "edge-coverage", (u + 1, v + 1),
                    f"edge-coverage violated: edge ({u + 1},{v + 1}) is in no bag")

    shared = [0] * n
    for a, b in td.edges:
        small, big = sorted((td.bags[a], td.bags[b]), key=len)
        for v in small:
            if v in big:
                shared[v] += 1
    for v in range(n):
        if occurrences[v] - shared[v] != 1:
            raise DecompositionError(
                "connectivity", v + 1,
                f"connectivity violated: bags containing vertex {v + 1} are not a subtree")

    if declared_width is not None and declared_width != td.width:
        raise DecompositionError(
            "width", declared_width,
            f"width violated: declared {declared_width}, actual {td.width}")


def parse_td(data, g: Graph | None = None) -> TreeDecomposition:
    """Read a PACE ``.td`` file and check every invariant (edge coverage needs ``g``)."""
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges = []
    for lineno, raw in enumerate(_text(data).splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        try:
            if parts[0] == "s":
                if header is not None or len(parts) != 5 or parts[1] != "td":
                    raise ParseError(f"malformed solution line, line {lineno}")
                header = tuple(int(x) for x in parts[2:])
            elif parts[0] == "b":
                if header is None:
                    raise ParseError(f"bag before header, line {lineno}")
                bid = int(parts[1])
                if not 1 <= bid <= header[0] or bid in bags:
                    raise ParseError(f"bad bag id {bid}, line {lineno}")
                vs = [int(x) - 1 for x in parts[2:]]
                if any(not 0 <= v < header[2] for v in vs):
                    raise ParseError(f"vertex id out of range, line {lineno}")
                bags[bid] = frozenset(vs)
            else:
                if header is None:
                    raise ParseError(f"tree edge before header, line {lineno}")
                if len(parts) != 2:
                    raise ParseError(f"malformed tree edge, line {lineno}")
                edges.append((int(parts[0]) - 1, int(parts[1]) - 1))
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"non-integer token, line {lineno}") from None
    if header is None:
        raise ParseError("missing header 's td <bags> <width+1> <n>'")
    nb, width1, n = header
    if len(bags) != nb:
        raise ParseError(f"header declares {nb} bags, found {len(bags)}")
    if g is not None and g.n != n:
        raise ParseError(f"decomposition is for {n} vertices, graph has {g.n}")
    td = TreeDecomposition([bags[i + 1] for i in range(nb)], edges, n)
    validate(td, g, declared_width=width1 - 1)
    return td


def serialize_td(td: TreeDecomposition) -> str:
    lines = [f"s td {len(td.bags)} {td.width + 1} {td.n}"]
    for i, bag in enumerate(td.bags):
        lines.append(" ".join(["b", str(i + 1)] + [str(v + 1) for v in sorted(bag)]))
    for a, b in td.edges:
        lines.append(f"{a + 1} {b + 1}")
    return "\n".join(lines) + "\n"


def _elimination_order(g: Graph, strategy: str):
    nbrs = [set(a) for a in g.adj]
    eliminated = [False] * g.n
    if strategy == "min-degree":
        heap = [(len(nbrs[v]), v) for v in range(g.n)]
        heapq.heapify(heap)
        while heap:
            d, v = heapq.heappop(heap)
            if eliminated[v] or d != len(nbrs[v]):
                continue
            nb = nbrs[v]
            yield v, frozenset(nb)
            eliminated[v] = True
            for u in nb:
                nbrs[u].discard(v)
                nbrs[u].update(nb)
                nbrs[u].discard(u)
            for u in nb:
                heapq.heappush(heap, (len(nbrs[u]), u))
    elif strategy == "min-fill":
        alive = set(range(g.n))
        while alive:
            best = None
            for v in sorted(alive):
                nb = list(nbrs[v])
                fill = 0
                for i, a in enumerate(nb):
                    na = nbrs[a]
                    for b in nb[i + 1:]:
                        if b not in na:
                            fill += 1
                if best is None or fill < best[0]:
                    best = (fill, v)
                    if fill == 0:
                        break
            v = best[1]
            nb = nbrs[v]
            yield v, frozenset(nb)
            alive.discard(v)
            for u in nb:
                nbrs[u].discard(v)
                nbrs[u].update(nb)
                nbrs[u].discard(u)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")


def heuristic_decompose(g: Graph, strategy: str = "min-degree") -> TreeDecomposition:
    """Tree decomposition from a greedy elimination ordering (ties: lowest id)."""
    if g.n == 0:
        return TreeDecomposition([frozenset()], [], 0)
    order = []
    bags = []
    for v, nb in _elimination_order(g, strategy):
        order.append(v)
        bags.append(nb | {v})
    pos = {v: i for i, v in enumerate(order)}
    edges = []
    roots = []
    for i, v in enumerate(order):
        later = [pos[u] for u in bags[i] if u != v]
        if later:
            edges.append((i, min(later)))
        else:
            roots.append(i)
    for r in roots[:-1]:
        edges.append((r, roots[-1]))
    td = TreeDecomposition(bags, edges, g.n)
    return td


LEAF, INTRODUCE, INTRODUCE_EDGE, FORGET, JOIN = "leaf", "introduce", "introduce_edge", "forget", "join"


@dataclass(slots=True)
class NiceNode:
    kind: str
    bag: tuple[int, ...]  # universe order: append on introduce, left child's order at joins
    children: tuple[int, ...] = ()
    vertex: int = -1
    edge: tuple[int, int, int] | None = None


@dataclass
class NiceDecomposition:
    """Nodes stored in post-order: children always precede their parent; root is last."""

    nodes: list[NiceNode]
    width: int
    n: int

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    def subtree_vertex_counts(self) -> list[int]:
        """Number of graph vertices occurring in each node's subtree."""
        counts = [0] * len(self.nodes)
        for i, nd in enumerate(self.nodes):
            if nd.kind == LEAF:
                counts[i] = 0
            elif nd.kind == INTRODUCE:
                counts[i] = counts[nd.children[0]] + 1
            elif nd.kind == JOIN:
                a, b = nd.children
                counts[i] = counts[a] + counts[b] - len(nd.bag)
            else:
                counts[i] = counts[nd.children[0]]
        return counts

    def check(self, g: Graph) -> None:
        """Assert every nice-form invariant against ``g``."""
        nodes = self.nodes
        assert nodes[self.root].bag == ()
        seen_edges = {}
        for i, nd in enumerate(nodes):
            bag = set(nd.bag)
            assert len(bag) == len(nd.bag)
            assert all(c < i for c in nd.children)
            if nd.kind == LEAF:
                assert not nd.children and not bag
            elif nd.kind == INTRODUCE:
                (c,) = nd.children
                assert nd.vertex in bag and set(nodes[c].bag) == bag - {nd.vertex}
            elif nd.kind == FORGET:
                (c,) = nd.children
                assert nd.vertex not in bag and set(nodes[c].bag) == bag | {nd.vertex}
            elif nd.kind == INTRODUCE_EDGE:
                (c,) = nd.children
                u, v, w = nd.edge
                assert u in bag and v in bag and set(nodes[c].bag) == bag
                assert g.has_edge(u, v) and g.weight(u, v) == w
                seen_edges[(min(u, v), max(u, v))] = seen_edges.get((min(u, v), max(u, v)), 0) + 1
            elif nd.kind == JOIN:
                a, b = nd.children
                assert set(nodes[a].bag) == bag == set(nodes[b].bag)
                assert nodes[a].bag == nd.bag
            else:
                raise AssertionError(nd.kind)
            assert len(bag) <= self.width + 1
        assert len(seen_edges) == g.m and all(c == 1 for c in seen_edges.values())
        assert set(seen_edges) == {(u, v) for u, v, _ in g.edges}

    def flatten(self) -> TreeDecomposition:
        bags = [frozenset(nd.bag) for nd in self.nodes]
        edges = [(c, i) for i, nd in enumerate(self.nodes) for c in nd.children]
        return TreeDecomposition(bags, edges, self.n)


def nicify(td: TreeDecomposition, g: Graph) -> NiceDecomposition:
    """Nice form rooted at bag 0 with an empty root bag and binary joins."""
    validate(td, g)
    k = len(td.bags)
    tree_adj: list[list[int]] = [[] for _ in range(k)]
    for a, b in td.edges:
        tree_adj[a].append(b)
        tree_adj[b].append(a)
    parent = [-1] * k
    order = []
    seen = [False] * k
    seen[0] = True
    dq = deque([0])
    while dq:
        x = dq.popleft()
        order.append(x)
        for y in sorted(tree_adj[x]):
            if not seen[y]:
                seen[y] = True
                parent[y] = x
                dq.append(y)
    children: list[list[int]] = [[] for _ in range(k)]
    for x in order[1:]:
        children[parent[x]].append(x)

    nodes: list[NiceNode] = []
    introduced: set[tuple[int, int]] = set()

    def emit(node: NiceNode) -> int:
        nodes.append(node)
        return len(nodes) - 1

    def introduce(top: int, v: int) -> int:
        bag = nodes[top].bag + (v,)
        top = emit(NiceNode(INTRODUCE, bag, (top,), vertex=v))
        members = set(bag)
        for u in g.adj[v]:
            if u in members:
                key = (u, v) if u < v else (v, u)
                if key not in introduced:
                    introduced.add(key)
                    top = emit(NiceNode(INTRODUCE_EDGE, bag, (top,), edge=(key[0], key[1], g.weight(u, v))))
        return top

    def forget(top: int, v: int) -> int:
        bag = tuple(x for x in nodes[top].bag if x != v)
        return emit(NiceNode(FORGET, bag, (top,), vertex=v))

    def morph(top: int, target: frozenset[int]) -> int:
        cur = set(nodes[top].bag)
        for v in sorted(cur - target):
            top = forget(top, v)
        for v in sorted(target - cur):
            top = introduce(top, v)
        return top

    tops = [-1] * k
    for x in reversed(order):
        target = td.bags[x]
        if not children[x]:
            top = morph(emit(NiceNode(LEAF, ())), target)
        else:
            top = morph(tops[children[x][0]], target)
            for c in children[x][1:]:
                other = morph(tops[c], target)
                top = emit(NiceNode(JOIN, nodes[top].bag, (top, other)))
        tops[x] = top
    morph(tops[0], frozenset())
    return NiceDecomposition(nodes, max(td.width, 0), td.n)
