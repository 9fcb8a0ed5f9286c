import random

import pytest

from twreduce import kernels, oracles
from twreduce.partitions import canonicalize, enumerate_partitions
from twreduce.reduce import (
    Gf2Matrix, cut_row, fits_cycle, gaussian_row_basis, perfect_matchings, reduce, reduce_matchings,
)
from twreduce.verify import random_matching_table, random_table

BACKENDS = sorted(kernels.backends().items())

# ranks computed offline with an unrelated list-of-lists eliminator over the
# explicit matrices (see test_fits_rank_oracle for the in-suite recomputation)
FITS_RANK = {2: 1, 4: 2, 6: 4, 8: 8}


def _rank(rows):
    """Textbook elimination over lists of bits, independent of the kernels."""
    m = [list(r) for r in rows]
    rank = 0
    for c in range(len(m[0]) if m else 0):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                m[i] = [x ^ y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def test_cut_row_examples():
    assert cut_row((0,), 1) == [1]
    assert cut_row((0, 1), 2) == [1, 1]
    assert cut_row((0, 0), 2) == [0, 1]


def test_cut_row_matches_definition():
    for t in range(1, 7):
        cols = [s for s in range(1 << t) if s & 1]
        for p in enumerate_partitions(t):
            blocks = {}
            for i, b in enumerate(p):
                blocks.setdefault(b, set()).add(i)
            want = [int(all(all(s >> x & 1 for x in blk) or not any(s >> x & 1 for x in blk)
                            for blk in blocks.values())) for s in cols]
            assert cut_row(p, t) == want


def test_cut_row_guard():
    with pytest.raises(ValueError, match="raise"):
        cut_row((0,) * 22, 22)
    with pytest.raises(ValueError):
        cut_row((0,), 0)


def test_cut_matrix_rank_full():
    for t in range(1, 6):
        rows = [cut_row(p, t) for p in enumerate_partitions(t)]
        assert _rank(rows) == 1 << (t - 1)


@pytest.mark.parametrize("name, mod", BACKENDS)
def test_row_basis_examples(name, mod):
    assert mod.row_basis([1, 2, 4], 3)[0] == [0, 1, 2]
    assert mod.row_basis([5, 5, 3], 3)[0] == [0, 2]
    assert mod.row_basis([3, 6, 5], 3)[0] == [0, 1]
    assert mod.row_basis([0, 0], 3)[0] == []
    assert mod.row_basis([], 3) == ([], 0)


def test_gaussian_row_basis_order():
    m = Gf2Matrix([0b011, 0b110, 0b101], 3)
    assert gaussian_row_basis(m) == [0, 1]
    assert gaussian_row_basis(m, order=[2, 1, 0]) == [2, 1]
    assert m.rank() == 2
    assert m.bits(1) == [0, 1, 1]
    with pytest.raises(ValueError):
        Gf2Matrix([8], 3)


def test_backends_agree_exactly():
    rng = random.Random(4)
    mods = dict(BACKENDS)
    for _ in range(200):
        ncols = rng.choice([1, 5, 63, 64, 65, 130, 300])
        rows = [rng.getrandbits(ncols) for _ in range(rng.randint(0, 40))]
        results = {name: mod.row_basis(rows, ncols) for name, mod in mods.items()}
        assert len(set(map(repr, results.values()))) == 1, results
    for _ in range(100):
        t = rng.randint(1, 11)
        parts = [tuple(p) for p in random_table(min(t, 7), rng)] if t <= 7 else [
            tuple(rng.randrange(t) for _ in range(t)) for _ in range(50)]
        parts = [canonicalize(p) for p in parts]
        tt = len(parts[0])
        results = {name: mod.cut_basis(parts, tt) for name, mod in mods.items()}
        assert len(set(map(repr, results.values()))) == 1


def test_reduce_trivial():
    kept, st = reduce({}, 3)
    assert kept == {} and st.rows_in == 0
    kept, st = reduce({(0, 1, 1): 4}, 3)
    assert kept == {(0, 1, 1): 4}
    assert (st.rows_in, st.rows_out, st.cols) == (1, 1, 4)
    assert reduce({(): 3}, 0)[0] == {(): 3}


def test_reduce_all_five_of_t3():
    table = {p: w for w, p in enumerate(enumerate_partitions(3), 1)}
    kept, _ = reduce(table, 3)
    assert len(kept) <= 4
    assert oracles.oracle_representative(table.items(), kept.items(), 3)


def test_reduce_representative_random():
    rng = random.Random(12)
    for t in range(1, 8):
        for _ in range(60):
            table = random_table(t, rng)
            kept, st = reduce(table, t)
            assert len(kept) <= 1 << (t - 1)
            assert st.rows_out == len(kept) <= st.rows_in == len(table)
            assert set(kept.items()) <= set(table.items())
            assert oracles.oracle_representative(table.items(), kept.items(), t)
            again, _ = reduce(kept, t)
            assert oracles.oracle_representative(table.items(), again.items(), t)


def test_reduce_prefers_light_rows():
    rng = random.Random(5)
    for t in range(2, 7):
        for _ in range(30):
            table = random_table(t, rng)
            kept, _ = reduce(table, t)
            rows = sorted(table.items(), key=lambda pw: (pw[1], pw[0]))
            # a dropped row depends only on lighter-or-equal earlier rows: the kept
            # prefix up to it already spans it
            for i, (p, w) in enumerate(rows):
                if p in kept:
                    continue
                span = [cut_row(q, t) for q, x in rows[:i] if q in kept]
                assert _rank(span + [cut_row(p, t)]) == _rank(span)
                assert all(x <= w for q, x in rows[:i] if q in kept)


def test_oracle_rejects_empty_output():
    table = {(0, 1): 3}
    assert not oracles.oracle_representative(table.items(), [], 2)
    assert oracles.oracle_representative(table.items(), table.items(), 2)


def test_fits_cycle_examples():
    assert fits_cycle((0, 0), (0, 0)) == 1
    assert fits_cycle((0, 0, 1, 1), (0, 1, 1, 0)) == 1
    assert fits_cycle((0, 0, 1, 1), (0, 0, 1, 1)) == 0
    with pytest.raises(ValueError):
        fits_cycle((0, 0, 0, 1), (0, 0, 1, 1))
    with pytest.raises(ValueError):
        fits_cycle((0, 0), (0, 0, 1, 1))


def test_perfect_matchings_enumeration():
    for t, count in [(0, 1), (2, 1), (4, 3), (6, 15), (8, 105), (10, 945)]:
        ms = perfect_matchings(t)
        assert len(ms) == count == len(set(ms))
    assert {oracles.partition_key(m) for m in perfect_matchings(6)} == {frozenset(m) for m in oracles.all_matchings(6)}


@pytest.mark.parametrize("t", [2, 4, 6, 8])
def test_fits_rank_oracle(t):
    ms = oracles.all_matchings(t)
    matrix = [[int(oracles.one_cycle(p, q, t)) for q in ms] for p in ms]
    assert _rank(matrix) == FITS_RANK[t]
    table = {m: 1 for m in perfect_matchings(t)}
    kept, st = reduce_matchings(table, t)
    assert len(kept) == FITS_RANK[t]
    assert len(kept) <= 1 << (t // 2)


def test_reduce_matchings_examples():
    assert reduce_matchings({(0, 0): 5}, 2)[0] == {(0, 0): 5}
    kept, _ = reduce_matchings({m: 1 for m in perfect_matchings(4)}, 4)
    assert len(kept) == 2
    with pytest.raises(ValueError):
        reduce_matchings({(0, 0, 0): 1}, 3)
    with pytest.raises(ValueError):
        reduce_matchings({(0, 0, 1, 2): 1}, 4)


def test_reduce_matchings_representative_random():
    rng = random.Random(21)
    for t in (2, 4, 6, 8):
        for _ in range(80):
            table = random_matching_table(t, rng)
            kept, _ = reduce_matchings(table, t)
            assert len(kept) <= FITS_RANK[t]
            assert oracles.oracle_representative(table.items(), kept.items(), t, matchings=True)


def test_general_reduce_also_represents_matchings():
    # two perfect matchings fit a cycle exactly when their join is the top partition
    rng = random.Random(6)
    for t in (4, 6, 8):
        for _ in range(40):
            table = random_matching_table(t, rng)
            kept, _ = reduce(table, t)
            assert oracles.oracle_representative(table.items(), kept.items(), t, matchings=True)


def test_wide_matchings_fall_back_to_cut_reduce():
    rng = random.Random(1)
    t = 14
    table = {}
    for _ in range(30):
        perm = list(range(t))
        rng.shuffle(perm)
        lab = [0] * t
        for i in range(0, t, 2):
            lab[perm[i]] = lab[perm[i + 1]] = i
        table[canonicalize(lab)] = rng.randint(1, 9)
    kept, st = reduce_matchings(table, t)
    assert st.cols == 1 << (t - 1)
    assert len(kept) <= len(table)
