import math

import numpy as np
import pytest

from oddunimodal.errors import UsageError
from oddunimodal.qseries import (MomentSeries, TruncatedSeries, inv_factor, moment_divide,
                                 moment_divide_rank_pair, moment_mul, series_mul)


def series(coeffs):
    return TruncatedSeries(len(coeffs) - 1, coeffs)


def partition_dp(n_max):
    # p(n) by the "largest part at most k" recursion
    p = [1] + [0] * n_max
    for k in range(1, n_max + 1):
        for n in range(k, n_max + 1):
            p[n] += p[n - k]
    return p


def test_difference_of_squares():
    assert series_mul(series([1, 1, 0]), series([1, -1, 0])).tolist() == [1, 0, -1]


def test_multiply_by_one():
    a = series([3, -1, 4, 1, 5])
    assert series_mul(a, TruncatedSeries.one(4)) == a


def test_geometric_times_one_minus_q():
    geo = inv_factor(1, 1, 1, 1, 10)
    assert geo.tolist() == [1] * 11
    assert series_mul(geo, series([1, -1] + [0] * 9)).tolist() == [1] + [0] * 10


def test_length_and_order_guard():
    a = series([1, 2, 3])
    assert len(a) == 3
    with pytest.raises(UsageError):
        a + series([1, 2])


def test_partition_generating_function():
    assert inv_factor(1, 1, math.inf, 1, 5).tolist() == [1, 1, 2, 3, 5, 7]
    assert inv_factor(1, 1, None, 1, 30).tolist() == partition_dp(30)


def test_inv_factor_powers():
    assert inv_factor(1, 2, 1, 2, 4).tolist() == [1, 2, 3, 4, 5]
    assert inv_factor(1, 2, 2, 2, 4).tolist() == [1, 2, 3, 6, 9]


def test_inv_factor_against_brute_force():
    # 1/((1-q)^2 (1-q^3)^2): count (a, b, c, d) with a + b + 3c + 3d = n
    order = 12
    brute = [sum(1 for c in range(n // 3 + 1) for d in range((n - 3 * c) // 3 + 1)
                 for a in range(n - 3 * c - 3 * d + 1)) for n in range(order + 1)]
    assert inv_factor(1, 2, 2, 2, order).tolist() == brute


def test_coefficients_are_python_ints():
    s = inv_factor(1, 1, None, 1, 500)
    assert isinstance(s[500], int)
    assert s[500] > 2**63


def test_moment_mul_rank_pair():
    a = MomentSeries.factor(1, 1, 2, 2)
    b = MomentSeries.factor(1, -1, 2, 2)
    c = moment_mul(a, b)
    assert c.moment(0) == [1, 2, 3]
    assert c.moment(1) == [0, 0, 0]
    assert c.moment(2)[2] == 8
    # enumerate (e1, e2) with e1 + e2 = n directly
    for n in range(3):
        assert c.moment(2)[n] == sum((e1 - (n - e1)) ** 2 for e1 in range(n + 1))


def test_moment_mul_identity_and_counts():
    a = MomentSeries.factor(3, 2, 9, 3)
    one = MomentSeries.constant(9, 3)
    assert moment_mul(a, one) == a
    b = MomentSeries.factor(2, -1, 9, 3)
    assert moment_mul(a, b).counts() == series_mul(a.counts(), b.counts())


def test_moment_divide_matches_moment_mul():
    base = MomentSeries.from_series(series([1, 1, 0, 2, 0, 0, 1, 0]), 4, rank=1)
    via_mul = moment_mul(base, MomentSeries.factor(2, 3, 7, 4))
    assert moment_divide(base, 2, 3) == via_mul


def test_rank_pair_division():
    base = MomentSeries.constant(10, 4)
    pair = moment_divide_rank_pair(base, 3)
    general = moment_divide(moment_divide(base, 3, 1), 3, -1)
    assert pair == general
    assert all(x == 0 for x in pair.moment(1) + pair.moment(3))
    with pytest.raises(UsageError):
        moment_divide_rank_pair(MomentSeries.factor(1, 1, 4, 2), 1)


def test_moment_zero_nonnegative():
    t = MomentSeries.constant(20, 2)
    for d in (1, 3, 5):
        t = moment_divide_rank_pair(t, d)
    assert all(x >= 0 for x in t.moment(0))


def test_moment_shape_mismatch():
    with pytest.raises(UsageError):
        moment_mul(MomentSeries.constant(4, 2), MomentSeries.constant(5, 2))
    with pytest.raises(UsageError):
        MomentSeries(3, 1, np.zeros((3, 2), dtype=object))
