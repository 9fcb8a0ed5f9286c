"""When to compress DP tables, and the counters every solve reports."""

from __future__ import annotations

from dataclasses import dataclass, field

from .reduce import ReduceStats

ENTRY_BYTES = 120  # rough CPython cost of one dict entry with a small tuple key


@dataclass(frozen=True)
class ReducePolicy:
    kind: str = "threshold"  # never | always | threshold
    threshold: int | None = None  # rows per node; default 2^(width+1)

    def __post_init__(self):
        if self.kind not in ("never", "always", "threshold"):
            raise ValueError(f"unknown policy {self.kind!r}")
        if self.threshold is not None and self.threshold < 1:
            raise ValueError("threshold must be >= 1")

    def threshold_for(self, width: int) -> int:
        if self.threshold is not None:
            return self.threshold
        return 1 << (max(width, 0) + 1)


@dataclass
class RunStats:
    nodes: int = 0
    max_table_rows: int = 0
    max_slice_rows: int = 0
    max_table_rows_after: int = 0
    max_slice_rows_after: int = 0
    reduce_calls: int = 0
    rows_eliminated: int = 0
    reduce: ReduceStats = field(default_factory=ReduceStats)
    peak_live_rows: int = 0
    wall_nanos: int = 0
    per_node_rows: list | None = None

    @property
    def peak_memory_bytes_est(self) -> int:
        return self.peak_live_rows * ENTRY_BYTES

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "nodes": self.nodes,
            "max_table_rows": self.max_table_rows,
            "max_slice_rows": self.max_slice_rows,
            "max_table_rows_after": self.max_table_rows_after,
            "max_slice_rows_after": self.max_slice_rows_after,
            "reduce_calls": self.reduce_calls,
            "rows_eliminated": self.rows_eliminated,
            "reduce": self.reduce.to_dict(timing),
            "peak_live_rows": self.peak_live_rows,
            "peak_memory_bytes_est": self.peak_memory_bytes_est,
        }
        if timing:
            d["wall_nanos"] = self.wall_nanos
        if self.per_node_rows is not None:
            d["per_node_rows"] = list(self.per_node_rows)
        return d


def apply_policy(table: dict, policy: ReducePolicy, width: int, stats: RunStats,
                 split, join, reducer, slice_cap) -> dict:
    """Record table sizes and, if the policy says so, reduce every label slice.

    ``split(key) -> (label, partition)``, ``join(label, partition) -> key``,
    ``reducer(slice, t) -> (kept, ReduceStats)`` and ``slice_cap(t)`` come
    from the engine.
    """
    total = len(table)
    slices: dict = {}
    for key, w in table.items():
        label, p = split(key)
        s = slices.get(label)
        if s is None:
            s = slices[label] = {}
        s[p] = w
    biggest = max((len(s) for s in slices.values()), default=0)
    stats.max_table_rows = max(stats.max_table_rows, total)
    stats.max_slice_rows = max(stats.max_slice_rows, biggest)

    if policy.kind == "never" or (policy.kind == "threshold" and total <= policy.threshold_for(width)):
        stats.max_table_rows_after = max(stats.max_table_rows_after, total)
        stats.max_slice_rows_after = max(stats.max_slice_rows_after, biggest)
        return table

    out = {}
    biggest = 0
    for label, s in slices.items():
        if len(s) > 1:
            t = len(next(iter(s)))
            kept, rs = reducer(s, t)
            stats.reduce_calls += 1
            stats.reduce.add(rs)
            stats.rows_eliminated += len(s) - len(kept)
            if len(kept) > slice_cap(t):
                raise AssertionError(f"slice of {len(kept)} rows exceeds cap {slice_cap(t)}")
            s = kept
        biggest = max(biggest, len(s))
        for p, w in s.items():
            out[join(label, p)] = w
    stats.max_table_rows_after = max(stats.max_table_rows_after, len(out))
    stats.max_slice_rows_after = max(stats.max_slice_rows_after, biggest)
    return out
