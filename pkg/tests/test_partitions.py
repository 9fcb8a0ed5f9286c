import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twreduce import oracles
from twreduce.partitions import (
    Universe, bottom, canonicalize, dump_table, enumerate_partitions, format_partition, lattice_join,
    parse_partition, tbl_glue, tbl_insert, tbl_join, tbl_project, tbl_union, top,
)

labelings = st.integers(1, 8).flatmap(lambda t: st.lists(st.integers(0, 5), min_size=t, max_size=t))


def partitions_of(t):
    return st.lists(st.integers(0, t - 1), min_size=t, max_size=t).map(canonicalize)


@pytest.mark.parametrize("raw, want", [([5, 5, 9], (0, 0, 1)), ([0, 1, 2], (0, 1, 2)), ([2, 1, 2, 1], (0, 1, 0, 1))])
def test_canonicalize_examples(raw, want):
    assert canonicalize(raw) == want


@given(labelings, st.permutations(range(6)))
def test_canonicalize_idempotent_and_label_invariant(raw, perm):
    p = canonicalize(raw)
    assert canonicalize(p) == p
    assert canonicalize(perm[x] for x in raw) == p
    assert p[0] == 0
    for i in range(1, len(p)):
        assert p[i] <= 1 + max(p[:i])


def test_join_examples():
    assert lattice_join((0, 0, 1), (0, 1, 1)) == (0, 0, 0)
    p = (0, 1, 0, 2)
    assert lattice_join(p, p) == p
    assert lattice_join(bottom(4), p) == p
    with pytest.raises(ValueError):
        lattice_join((0,), (0, 0))


@settings(max_examples=300)
@given(st.integers(1, 8).flatmap(lambda t: st.tuples(partitions_of(t), partitions_of(t), partitions_of(t))))
def test_join_lattice_laws(triple):
    p, q, r = triple
    t = len(p)
    assert lattice_join(p, q) == lattice_join(q, p)
    assert lattice_join(lattice_join(p, q), r) == lattice_join(p, lattice_join(q, r))
    assert lattice_join(p, p) == p
    assert lattice_join(p, bottom(t)) == p
    assert lattice_join(p, top(t)) == top(t)
    # agrees with the oracle's independent connectivity test
    assert (lattice_join(p, q) == top(t)) == oracles.connects(
        oracles.partition_key(p), oracles.partition_key(q), t)


def test_union():
    p, q = (0, 1), (0, 0)
    assert tbl_union({("L", p): 3}, {("L", p): 5}) == {("L", p): 3}
    assert tbl_union({("L", p): 3}, {("L", q): 5}) == {("L", p): 3, ("L", q): 5}
    assert tbl_union({}, {("L", q): 5}) == {("L", q): 5}


def test_insert():
    assert tbl_insert({(0, (0, 0)): 4}) == {(0, (0, 0, 1)): 4}
    assert tbl_insert({}) == {}
    assert tbl_insert({(0, ()): 0}) == {(0, (0,)): 0}
    assert tbl_insert({(1, (0,)): 2}, extend_label=lambda s: s | 2) == {(3, (0, 1)): 2}


def test_universe():
    u = Universe([4, 2])
    assert u.pos == {4: 0, 2: 1}
    u2 = u.insert(7)
    assert u2.vertices == [4, 2, 7]
    with pytest.raises(ValueError):
        u2.insert(2)
    assert u2.remove(2).pos == {4: 0, 7: 1}
    with pytest.raises(ValueError):
        Universe(range(32))


def test_glue():
    assert tbl_glue({(0, (0, 1)): 2}, 0, 1, 5) == {(0, (0, 0)): 7}
    assert tbl_glue({(0, (0, 0)): 2}, 0, 1, 5) == {(0, (0, 0)): 7}
    assert tbl_glue({}, 0, 1, 5) == {}
    # merged duplicates keep the minimum
    assert tbl_glue({(0, (0, 1, 0)): 9, (0, (0, 1, 1)): 4}, 0, 1, 1) == {(0, (0, 0, 0)): 5}
    with pytest.raises(OverflowError):
        tbl_glue({(0, (0, 1)): (1 << 64) - 2}, 0, 1, 5)


def test_project():
    assert tbl_project({(0, (0, 1)): 3}, 1) == {}
    assert tbl_project({(0, (0, 1)): 3}, 1, must_connect=False) == {(0, (0,)): 3}
    assert tbl_project({(0, (0, 0)): 3}, 1) == {(0, (0,)): 3}
    assert tbl_project({(0, (0, 1, 0)): 3, (0, (0, 1, 1)): 8}, 2) == {(0, (0, 1)): 3}
    # dropping the first element of a block re-canonicalizes
    assert tbl_project({(0, (0, 1, 0, 1)): 1}, 0) == {(0, (0, 1, 0)): 1}


def test_join_tables():
    p = (0, 0, 1)
    assert tbl_join({(0, p): 1}, {(0, bottom(3)): 0}) == {(0, p): 1}
    a = {(0, (0, 1, 2)): 1, (0, (0, 0, 1)): 2}
    b = {(0, (0, 1, 2)): 10, (0, (0, 1, 1)): 20, (0, (0, 1, 0)): 30}
    out = tbl_join(a, b)
    # products: bottom-neutral pairs plus joins; distinct results counted explicitly
    assert out == {
        (0, (0, 1, 2)): 11, (0, (0, 1, 1)): 21, (0, (0, 1, 0)): 31,
        (0, (0, 0, 1)): 12, (0, (0, 0, 0)): 22,
    }
    assert tbl_join({}, b) == {}
    # labels must match without callbacks
    assert tbl_join({(1, p): 1}, {(0, p): 1}) == {}
    got = tbl_join({("a", p): 1}, {("b", p): 2}, compatible=lambda x, y: True,
                   combine=lambda x, y: x + y, offset=lambda lab: 1)
    assert got == {("ab", p): 2}


def test_join_table_product_size():
    # |A| = 2, |B| = 3, all join results distinct -> 6 entries
    a = {(0, (0, 1, 2, 3)): 1, (0, (0, 0, 1, 2)): 1}
    b = {(0, (0, 1, 2, 3)): 1, (0, (0, 1, 1, 2)): 1, (0, (0, 1, 2, 2)): 1}
    joined = {lattice_join(p, q) for (_, p) in a for (_, q) in b}
    assert len(joined) == 6
    assert len(tbl_join(a, b)) == 6


def test_enumerate_counts_match_bell():
    for t in range(0, 9):
        parts = list(enumerate_partitions(t))
        assert len(parts) == oracles.bell(t)
        assert parts == sorted(set(parts))
        assert all(canonicalize(p) == p for p in parts)
    assert list(enumerate_partitions(1)) == [(0,)]
    assert len(list(enumerate_partitions(3))) == 5
    assert len(list(enumerate_partitions(4))) == 15
    with pytest.raises(ValueError):
        list(enumerate_partitions(13))


def test_dump_format():
    table = {(3, (0, 1, 0)): 7, (1, ()): 0}
    assert dump_table(table) == "1 - 0\n3 010 7\n"
    for p in [(), (0,), (0, 1, 2, 1), tuple(range(12))]:
        assert parse_partition(format_partition(p)) == p


def _certificate_footprint(t, edges):
    """Partition of range(t) induced by an edge set, through an independent union-find."""
    return oracles.partition_key([_root(t, edges, i) for i in range(t)])


def _root(t, edges, i):
    comp = list(range(t))

    def find(x):
        while comp[x] != x:
            x = comp[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            comp[ra] = rb
    return find(i)


def test_glue_then_project_matches_certificates():
    # operations on footprints commute with the same operations on explicit edge sets
    rng = random.Random(8)
    for _ in range(300):
        t = rng.randint(2, 8)
        pairs = [(a, b) for a in range(t) for b in range(a + 1, t)]
        edges = rng.sample(pairs, rng.randint(0, min(5, len(pairs))))
        p = canonicalize(_root(t, edges, i) for i in range(t))
        table = {(0, p): len(edges)}
        u, v = rng.sample(range(t), 2)
        glued = tbl_glue(table, u, v, 1)
        ((_, gp), w), = glued.items()
        assert oracles.partition_key(gp) == _certificate_footprint(t, edges + [(u, v)])
        assert w == len(edges) + 1
        drop = rng.randrange(t)
        projected = tbl_project(glued, drop, must_connect=False)
        ((_, pp), _), = projected.items()
        full = _certificate_footprint(t, edges + [(u, v)])
        expected = {frozenset(x - (x > drop) for x in b if x != drop) for b in full} - {frozenset()}
        assert oracles.partition_key(pp) == frozenset(expected)
