"""Set partitions in restricted-growth form and min-plus weighted partition tables.

A partition of positions ``0..t-1`` is a tuple ``a`` with ``a[0] == 0`` and
``a[i] <= 1 + max(a[:i])``. A table maps ``(label, partition)`` to the
minimum weight seen for that key; labels are opaque to this module.
"""

from __future__ import annotations

import os
from typing import Callable, Hashable, Iterable, Iterator

from .graph import INF, checked_add

MAX_UNIVERSE = 31
DEBUG = bool(os.environ.get("TWREDUCE_DEBUG"))

Partition = tuple
Table = dict  # (label, Partition) -> int


class Universe:
    """Ordered bag vertices; positions follow introduction order."""

    __slots__ = ("vertices", "pos")

    def __init__(self, vertices: Iterable[int] = ()):
        self.vertices = list(vertices)
        if len(self.vertices) > MAX_UNIVERSE:
            raise ValueError(f"universe larger than {MAX_UNIVERSE}")
        self.pos = {v: i for i, v in enumerate(self.vertices)}
        if len(self.pos) != len(self.vertices):
            raise ValueError("duplicate vertex in universe")

    def __len__(self):
        return len(self.vertices)

    def insert(self, v: int) -> "Universe":
        if v in self.pos:
            raise ValueError(f"vertex {v} already in universe")
        return Universe(self.vertices + [v])

    def remove(self, v: int) -> "Universe":
        return Universe([x for x in self.vertices if x != v])


def canonicalize(labels: Iterable[Hashable]) -> Partition:
    seen: dict = {}
    out = []
    for x in labels:
        b = seen.get(x)
        if b is None:
            b = seen[x] = len(seen)
        out.append(b)
    return tuple(out)


def num_blocks(p: Partition) -> int:
    return max(p) + 1 if p else 0


def block_masks(p: Partition) -> list[int]:
    masks = [0] * num_blocks(p)
    for i, b in enumerate(p):
        masks[b] |= 1 << i
    return masks


def bottom(t: int) -> Partition:
    return tuple(range(t))


def top(t: int) -> Partition:
    return (0,) * t


def lattice_join(p: Partition, q: Partition) -> Partition:
    """Finest common coarsening of two partitions of the same universe."""
    t = len(p)
    if len(q) != t:
        raise ValueError(f"universe size mismatch: {t} vs {len(q)}")
    parent = list(range(t))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for part in (p, q):
        first: dict = {}
        for i, b in enumerate(part):
            j = first.setdefault(b, i)
            if j != i:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    return canonicalize(find(i) for i in range(t))


def merge_blocks(p: Partition, i: int, j: int) -> Partition:
    bi, bj = p[i], p[j]
    if bi == bj:
        return p
    lo, hi = (bi, bj) if bi < bj else (bj, bi)
    return tuple(x if x < hi else (lo if x == hi else x - 1) for x in p)


def remove_position(p: Partition, i: int) -> tuple[Partition, bool]:
    """Drop position ``i``; also report whether it was a singleton block."""
    b = p[i]
    rest = p[:i] + p[i + 1:]
    if b in rest:
        return canonicalize(rest), False
    return tuple(x - 1 if x > b else x for x in rest), True


def _put(table: Table, key, w: int) -> None:
    old = table.get(key)
    if old is None or w < old:
        table[key] = w


def check_table(table: Table) -> None:
    for (label, p), w in table.items():
        assert 0 <= w < INF, w
        assert p == canonicalize(p), p


def tbl_union(a: Table, b: Table) -> Table:
    out = dict(a)
    for k, w in b.items():
        _put(out, k, w)
    return out


def tbl_insert(a: Table, extend_label: Callable | None = None) -> Table:
    """Append a new last position as a singleton block to every partition."""
    out: Table = {}
    for (label, p), w in a.items():
        nl = extend_label(label) if extend_label else label
        _put(out, (nl, p + (num_blocks(p),)), w)
    return out


def tbl_glue(a: Table, u: int, v: int, weight: int) -> Table:
    out: Table = {}
    for (label, p), w in a.items():
        _put(out, (label, merge_blocks(p, u, v)), checked_add(w, weight))
    return out


def tbl_project(a: Table, v: int, must_connect: bool = True,
                shrink_label: Callable | None = None) -> Table:
    """Remove position ``v``; with ``must_connect`` entries where it is a singleton die."""
    out: Table = {}
    for (label, p), w in a.items():
        q, single = remove_position(p, v)
        if single and must_connect:
            continue
        _put(out, (shrink_label(label) if shrink_label else label, q), w)
    return out


def tbl_join(a: Table, b: Table, compatible: Callable | None = None,
             combine: Callable | None = None, offset: Callable | None = None) -> Table:
    """Pairwise combination of two tables over the same universe.

    Without callbacks, labels must be equal and are kept as is; ``offset``
    maps the combined label to a weight counted on both sides.
    """
    out: Table = {}
    if compatible is None and combine is None:
        by_label: dict = {}
        for (label, p), w in b.items():
            by_label.setdefault(label, []).append((p, w))
        for (label, p), w in a.items():
            for q, x in by_label.get(label, ()):
                s = checked_add(w, x)
                if offset:
                    s -= offset(label)
                _put(out, (label, lattice_join(p, q)), s)
        return out
    for (la, p), w in a.items():
        for (lb, q), x in b.items():
            if compatible and not compatible(la, lb):
                continue
            label = combine(la, lb) if combine else la
            s = checked_add(w, x)
            if offset:
                s -= offset(label)
            _put(out, (label, lattice_join(p, q)), s)
    return out


def enumerate_partitions(t: int) -> Iterator[Partition]:
    """All partitions of ``t`` positions, lexicographic in restricted-growth form."""
    if t < 0 or t > 12:
        raise ValueError("enumerate_partitions is limited to 0 <= t <= 12")
    if t == 0:
        yield ()
        return
    a = [0] * t

    def rec(i, mx):
        if i == t:
            yield tuple(a)
            return
        for b in range(mx + 2):
            a[i] = b
            yield from rec(i + 1, max(mx, b))

    yield from rec(1, 0)


_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def format_partition(p: Partition) -> str:
    return "".join(_DIGITS[b] for b in p) or "-"


def parse_partition(s: str) -> Partition:
    return () if s == "-" else tuple(_DIGITS.index(c) for c in s)


def dump_table(table: Table, fmt_label: Callable = str) -> str:
    """One ``label partition weight`` line per entry, sorted."""
    lines = sorted(f"{fmt_label(label)} {format_partition(p)} {w}" for (label, p), w in table.items())
    return "\n".join(lines) + ("\n" if lines else "")
