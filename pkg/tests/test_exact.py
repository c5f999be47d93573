from collections import Counter

import numpy as np
import pytest
from sympy.functions.combinatorial.numbers import partition as sympy_partition

from oddunimodal import exact
from oddunimodal.errors import ResourceError, UsageError


def test_small_counts():
    assert [int(x) for x in exact.ou_counts(7)] == [0, 1, 2, 4, 6, 9, 14, 20]


def test_brute_force_agrees_with_engine():
    engine = exact.ou_counts(25)
    for n in range(26):
        assert len(exact.brute_force_enumerate(n)) == engine[n]


def test_brute_force_small_cases():
    assert exact.brute_force_enumerate(1) == [exact.OddUnimodalSeq((), 1, ())]
    got = set(exact.brute_force_enumerate(2))
    assert got == {exact.OddUnimodalSeq((1,), 1, ()), exact.OddUnimodalSeq((), 1, (1,))}


def test_brute_force_limit():
    with pytest.raises(ResourceError):
        exact.brute_force_enumerate(exact.BRUTE_FORCE_MAX + 1)


def test_sequence_invariants():
    for n in range(1, 13):
        for s in exact.brute_force_enumerate(n):
            parts = s.left + (s.peak,) + s.right
            assert all(p % 2 == 1 for p in parts)
            assert max(s.left, default=0) <= s.peak >= max(s.right, default=0)
            assert s.weight == n
            assert s.rank == len(s.left) - len(s.right)


def test_invalid_sequences():
    with pytest.raises(UsageError):
        exact.OddUnimodalSeq((2,), 3, ())
    with pytest.raises(UsageError):
        exact.OddUnimodalSeq((3, 1), 3, ())
    with pytest.raises(UsageError):
        exact.OddUnimodalSeq((), 3, (5,))


def test_by_peak():
    assert exact.ou_by_peak(3, 0) == 3
    assert exact.ou_by_peak(3, 1) == 1
    for m in range(20):
        assert exact.ou_by_peak(2 * m + 1, m) == 1
    counts = exact.ou_counts(200)
    for n in (1, 50, 117, 200):
        assert sum(exact.peak_counts(n)) == counts[n]


def test_by_peak_brute_force():
    for n in range(1, 16):
        c = Counter((s.peak - 1) // 2 for s in exact.brute_force_enumerate(n))
        for m in range((n - 1) // 2 + 1):
            assert exact.ou_by_peak(n, m) == c.get(m, 0)


def test_rank_distribution_small():
    assert exact.rank_distribution(3).counts == {-2: 1, 0: 2, 2: 1}
    assert exact.rank_distribution(2).counts == {-1: 1, 1: 1}


def test_rank_distribution_brute_force():
    for n in range(1, 21):
        brute = Counter(s.rank for s in exact.brute_force_enumerate(n))
        assert exact.rank_distribution(n).counts == dict(brute)


def test_rank_symmetry_and_totals():
    table = exact.rank_table(100)
    counts = exact.ou_counts(100)
    assert np.all(table == table[:, ::-1])
    for n in range(101):
        assert sum(table[n]) == counts[n]


def test_moments():
    mom = exact.rank_moments(2000, 2)
    assert mom[2][3] == 8
    assert list(mom[0]) == list(exact.ou_counts(2000))
    allm = exact.rank_moments_all(60, 4)
    assert all(x == 0 for x in allm.moment(1) + allm.moment(3))
    ev = exact.rank_moments(60, 4)
    assert allm.moment(4) == list(ev[4])


def test_moments_against_distribution():
    table = exact.rank_table(80)
    mom = exact.rank_moments(80, 6)
    for n in (5, 33, 80):
        d = exact.rank_distribution(n, table)
        for ell in (0, 2, 4, 6):
            assert mom[ell][n] == d.moment(ell)


def test_partition_count():
    p = exact.partition_count(500)
    assert p[0] == 1 and p[5] == 7
    assert all(p[n] == sympy_partition(n) for n in range(0, 501, 7))
    assert all(p[5 * n + 4] % 5 == 0 for n in range(100))


def test_rank_and_crank_of_four():
    rank, crank = exact.rank_crank_tables(4)
    assert rank[3] == 1 and rank[0] == 1 and rank[-1] == 1
    assert sum(rank.values()) == sum(crank.values()) == 5


def test_crank_at_one():
    _, crank = exact.rank_crank_tables(1)
    assert crank == {-1: 1, 0: -1, 1: 1}


def test_rank_crank_against_partitions():
    for n in range(2, 26):
        parts = list(exact.partitions(n))
        rank, crank = exact.rank_crank_tables(n)
        assert rank == dict(Counter(exact.dyson_rank(lam) for lam in parts))
        assert crank == dict(Counter(exact.crank(lam) for lam in parts))
    p = exact.partition_count(40)
    for n in (2, 17, 40):
        rank, crank = exact.rank_crank_tables(n)
        assert sum(rank.values()) == sum(crank.values()) == p[n]


def test_moments_csv():
    text = exact.moments_csv(10, (0, 2))
    rows = text.strip().split("\n")
    assert rows[0] == "n,ou,ou_2"
    assert len(rows) == 12
    assert rows[4] == "3,4,8"
    with pytest.raises(UsageError):
        exact.moments_csv(10, (0, 3))


def test_bad_inputs():
    with pytest.raises(UsageError):
        exact.ou_counts(-1)
    with pytest.raises(UsageError):
        exact.rank_distribution(0)
