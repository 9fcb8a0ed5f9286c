"""Representative subsets of weighted partition tables via GF(2) row bases.

``reduce`` keeps, among rows sorted by (weight, partition), exactly those
whose cut-matrix row is independent of the lighter rows before it. For every
partition ``q``, the cheapest kept ``p`` with ``p ⊔ q = top`` is then as cheap
as the cheapest input ``p``: the cut matrix ``M`` satisfies ``M Mᵀ = [p ⊔ q = top]``
over GF(2), so a dropped row is a sum of lighter kept rows and one of them
must also join ``q`` to the top.

``reduce_matchings`` does the same for perfect-matching tables with the
fits-cycle matrix itself as the row space.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from functools import lru_cache

from . import kernels
from ._kernels_py import cut_row_int

MAX_CUT_T = 21
MAX_MATCHING_T = 12


@dataclass
class ReduceStats:
    rows_in: int = 0
    rows_out: int = 0
    cols: int = 0
    xor_word_ops: int = 0
    nanos: int = 0

    def add(self, other: "ReduceStats") -> None:
        self.rows_in += other.rows_in
        self.rows_out += other.rows_out
        self.cols += other.cols
        self.xor_word_ops += other.xor_word_ops
        self.nanos += other.nanos

    def to_dict(self, timing: bool = True) -> dict:
        d = asdict(self)
        if not timing:
            del d["nanos"]
        return d


@dataclass
class Gf2Matrix:
    """Dense GF(2) matrix; row ``i`` is an int whose bit ``j`` is entry ``(i, j)``."""

    rows: list[int]
    ncols: int

    def __post_init__(self):
        if self.ncols > 1 << 30:
            raise ValueError("column count above 2^30")
        limit = 1 << self.ncols
        for r in self.rows:
            if not 0 <= r < limit:
                raise ValueError("row wider than the column count")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def bits(self, i: int) -> list[int]:
        r = self.rows[i]
        return [(r >> j) & 1 for j in range(self.ncols)]

    def rank(self) -> int:
        return len(gaussian_row_basis(self))


def gaussian_row_basis(m: Gf2Matrix, order=None) -> list[int]:
    """Indices of a row basis, greedily preferring earlier rows (in ``order`` if given)."""
    idx = list(range(m.nrows)) if order is None else list(order)
    kept, _ = kernels.row_basis([m.rows[i] for i in idx], m.ncols)
    return [idx[k] for k in kept]


def _check_t(t: int) -> None:
    if not 1 <= t <= MAX_CUT_T:
        raise ValueError(
            f"cut matrix needs 1 <= t <= {MAX_CUT_T} (2^{t - 1} columns requested); "
            f"raise reduce.MAX_CUT_T to allow wider universes")


def cut_row(p, t: int) -> list[int]:
    """Cut-matrix row of ``p`` as a list of ``2^(t-1)`` bits."""
    _check_t(t)
    if len(p) != t:
        raise ValueError("partition size does not match t")
    r = cut_row_int(p, t)
    return [(r >> j) & 1 for j in range(1 << (t - 1))]


def _sorted_rows(entries):
    items = entries.items() if isinstance(entries, dict) else entries
    return sorted(items, key=lambda pw: (pw[1], pw[0]))


def reduce(entries, t: int):
    """Representative subset of one table slice (``{partition: weight}``) over ``t`` positions.

    Returns ``(kept, stats)`` with ``kept`` a dict of the surviving rows.
    """
    t0 = time.perf_counter_ns()
    rows = _sorted_rows(entries)
    if not rows:
        return {}, ReduceStats()
    if t == 0:
        # the empty universe has a single partition
        p, w = rows[0]
        return {p: w}, ReduceStats(len(rows), 1, 1, 0, time.perf_counter_ns() - t0)
    _check_t(t)
    kept, ops = kernels.cut_basis([p for p, _ in rows], t)
    cap = 1 << (t - 1)
    if len(kept) > cap:
        raise AssertionError(f"reduce produced {len(kept)} rows over cap {cap}")
    out = {rows[i][0]: rows[i][1] for i in kept}
    return out, ReduceStats(len(rows), len(out), cap, ops, time.perf_counter_ns() - t0)


def mates(p) -> list[int]:
    """Partner array of a perfect matching given in restricted-growth form."""
    t = len(p)
    first: dict = {}
    mate = [-1] * t
    for i, b in enumerate(p):
        j = first.get(b)
        if j is None:
            first[b] = i
        else:
            if mate[j] != -1:
                raise ValueError(f"block {b} has more than two elements")
            mate[i], mate[j] = j, i
    if -1 in mate:
        raise ValueError("not a perfect matching")
    return mate


def fits_cycle(p, q) -> int:
    """1 iff the union of perfect matchings ``p`` and ``q`` is a single cycle."""
    t = len(p)
    if t != len(q) or t % 2:
        raise ValueError("fits_cycle needs two matchings on the same even universe")
    if t == 0:
        return 0
    mp, mq = mates(p), mates(q)
    x, length = 0, 0
    while True:
        x = mq[mp[x]]
        length += 2
        if x == 0:
            break
    return int(length == t)


@lru_cache(maxsize=None)
def perfect_matchings(t: int) -> tuple:
    """All perfect matchings of ``t`` positions in restricted-growth form.

    Order: the smallest unmatched position is paired with each later
    position in increasing order, recursively.
    """
    if t % 2 or t < 0:
        raise ValueError("perfect matchings need an even universe")
    out = []
    a = [-1] * t

    def rec(nb):
        try:
            i = a.index(-1)
        except ValueError:
            out.append(tuple(a))
            return
        a[i] = nb
        for j in range(i + 1, t):
            if a[j] == -1:
                a[j] = nb
                rec(nb + 1)
                a[j] = -1
        a[i] = -1

    rec(0)
    return tuple(out)


@lru_cache(maxsize=None)
def _fits_rows(t: int) -> dict:
    cols = perfect_matchings(t)
    rows = {}
    for p in cols:
        r = 0
        for j, q in enumerate(cols):
            if fits_cycle(p, q):
                r |= 1 << j
        rows[p] = r
    return rows


def fits_row(p) -> int:
    return _fits_rows(len(p))[p]


def reduce_matchings(entries, t: int):
    """Representative subset of a slice whose partitions are perfect matchings of ``t`` positions."""
    t0 = time.perf_counter_ns()
    rows = _sorted_rows(entries)
    if t % 2:
        raise ValueError("reduce_matchings needs an even universe")
    for p, _ in rows:
        if len(p) != t or any(c != 2 for c in _block_sizes(p)):
            raise ValueError(f"{p} is not a perfect matching of {t} positions")
    if not rows:
        return {}, ReduceStats()
    if t == 0:
        p, w = rows[0]
        return {p: w}, ReduceStats(len(rows), 1, 1, 0, time.perf_counter_ns() - t0)
    if t > MAX_MATCHING_T:
        return reduce(dict(rows), t)
    table = _fits_rows(t)
    ncols = len(table)
    kept, ops = kernels.row_basis([table[p] for p, _ in rows], ncols)
    cap = 1 << (t // 2)
    if len(kept) > cap:
        raise AssertionError(f"reduce_matchings produced {len(kept)} rows over cap {cap}")
    out = {rows[i][0]: rows[i][1] for i in kept}
    return out, ReduceStats(len(rows), len(out), ncols, ops, time.perf_counter_ns() - t0)


def _block_sizes(p):
    sizes = [0] * (max(p) + 1 if p else 0)
    for b in p:
        sizes[b] += 1
    return sizes
