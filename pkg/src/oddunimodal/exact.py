"""Exact enumeration of odd unimodal sequences and partitions.

An odd unimodal sequence of weight n is

    a_1 <= ... <= a_r <= c >= b_1 >= ... >= b_s,   all parts odd,

with the peak c marked. Equal neighbours of the peak give distinct objects
depending on which copy is marked, so for a peak 2m+1 the left and right
parts are two independent multisets of odd parts not exceeding 2m+1. This
is the convention of the generating function

    OU(zeta; q) = sum_m q^(2m+1) / ((zeta q, zeta^-1 q; q^2)_(m+1)),

and it gives ou(2) = 2: (1 | 1) and (1 | _ 1). The rank is r - s.

Everything here is exact. Large tables use one of two engines: Python
integers in numpy object arrays (counts and moments), or int64 arithmetic
modulo several primes followed by Chinese remaindering (full rank tables).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ResourceError, UsageError
from .qseries import (MomentSeries, _zeros, divide_one_minus_qd, moment_divide,
                      pair_divide_even)

__all__ = [
    "OddUnimodalSeq",
    "RankDistribution",
    "ou_counts",
    "peak_counts",
    "ou_by_peak",
    "rank_table",
    "rank_distribution",
    "rank_moments",
    "rank_moments_all",
    "brute_force_enumerate",
    "partition_count",
    "partitions",
    "dyson_rank",
    "crank",
    "rank_crank_tables",
    "moments_csv",
]

BRUTE_FORCE_MAX = 40

# primes just below 2^62: sums of two residues stay below 2^63
_PRIMES = (4611686018427387847, 4611686018427387817, 4611686018427387787,
           4611686018427387761, 4611686018427387751, 4611686018427387737,
           4611686018427387733, 4611686018427387709)


@dataclass(frozen=True)
class OddUnimodalSeq:
    """A peak-marked odd unimodal sequence (left run, peak, right run)."""

    left: tuple
    peak: int
    right: tuple

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        parts = self.left + (self.peak,) + self.right
        if any(p <= 0 or p % 2 == 0 for p in parts):
            raise UsageError("all parts must be odd positive integers")
        if any(x > y for x, y in zip(self.left, self.left[1:])):
            raise UsageError("left run must be weakly increasing")
        if any(x < y for x, y in zip(self.right, self.right[1:])):
            raise UsageError("right run must be weakly decreasing")
        if (self.left and self.left[-1] > self.peak) or (self.right and self.right[0] > self.peak):
            raise UsageError("peak must dominate both runs")

    @property
    def weight(self):
        return self.peak + sum(self.left) + sum(self.right)

    @property
    def rank(self):
        return len(self.left) - len(self.right)

    def __str__(self):
        left = " ".join(map(str, self.left))
        right = " ".join(map(str, self.right))
        return f"({left} [{self.peak}] {right})".replace("( ", "(").replace(" )", ")")


@dataclass(frozen=True)
class RankDistribution:
    """Exact counts ou(m, n) for one weight n."""

    n: int
    counts: dict = field(hash=False)

    @property
    def total(self):
        return sum(self.counts.values())

    def moment(self, j):
        return sum(m ** j * c for m, c in self.counts.items())

    def support(self):
        return sorted(self.counts)

    def is_symmetric(self):
        return all(self.counts.get(-m, 0) == c for m, c in self.counts.items())


def _check_nmax(n_max):
    if int(n_max) != n_max or n_max < 0:
        raise UsageError("N_max must be a non-negative integer")
    return int(n_max)


def _peak_iter(n_max):
    """Yield (m, P_m) with P_m the series q^(2m+1)/(q;q^2)_(m+1)^2 truncated at n_max.

    P_(m+1) = P_m * q^2 / (1 - q^(2m+3))^2; stops once 2m+1 > n_max.
    """
    p = _zeros(n_max + 1)
    if n_max < 1:
        return
    p[1] = 1
    p = divide_one_minus_qd(divide_one_minus_qd(p, 1), 1)
    m = 0
    while 2 * m + 1 <= n_max:
        yield m, p
        d = 2 * m + 3
        shifted = _zeros(n_max + 1)
        shifted[2:] = p[:-2]
        p = divide_one_minus_qd(divide_one_minus_qd(shifted, d), d)
        m += 1


@lru_cache(maxsize=8)
def _ou_counts_cached(n_max):
    total = _zeros(n_max + 1)
    for _, p in _peak_iter(n_max):
        total += p
    total.flags.writeable = False
    return total


def ou_counts(n_max):
    """Exact ou(0), ..., ou(n_max) as an object array of Python ints.

    ou(0) = 0: the generating function has no constant term.
    """
    return _ou_counts_cached(_check_nmax(n_max)).copy()


@lru_cache(maxsize=8)
def _peak_counts_cached(n):
    vals = [int(p[n]) for _, p in _peak_iter(n)]
    return tuple(vals)


def peak_counts(n):
    """Exact ou_m(n) for m = 0, ..., (n-1)//2 (sequences with peak 2m+1)."""
    n = _check_nmax(n)
    if n < 1:
        raise UsageError("n must be at least 1")
    return np.array(_peak_counts_cached(n), dtype=object)


def ou_by_peak(n, m):
    """Number of odd unimodal sequences of weight n with peak 2m+1."""
    if n < 1 or m < 0:
        raise UsageError("need n >= 1 and m >= 0")
    if 2 * m + 1 > n:
        return 0
    return int(_peak_counts_cached(int(n))[m])


# ---------------------------------------------------------------------------
# full rank tables, multi-modular

def _rank_table_mod(n_max, p):
    """ou(r, n) mod p as an int64 array indexed [n, r + n_max].

    Horner over peaks, largest first:
        U_m = (q^(2m+1) + U_(m+1)) / ((1 - zeta q^(2m+1))(1 - zeta^-1 q^(2m+1))).
    Only additions occur, so every residue stays in [0, p).
    """
    width = 2 * n_max + 1
    t = np.zeros((n_max + 1, width), dtype=np.int64)
    m_top = (n_max - 1) // 2
    for m in range(m_top, -1, -1):
        d = 2 * m + 1
        t[d, n_max] += 1
        if t[d, n_max] >= p:
            t[d, n_max] -= p
        for shift in (1, -1):
            for lo in range(d, n_max + 1, d):
                hi = min(lo + d, n_max + 1)
                src = t[lo - d: hi - d]
                dst = t[lo:hi]
                if shift == 1:
                    dst[:, 1:] += src[:, :-1]
                else:
                    dst[:, :-1] += src[:, 1:]
                dst -= p * (dst >= p)
    return t


def _crt(residues, primes):
    """Garner reconstruction of non-negative integers from residues."""
    x = residues[0].astype(object)
    mod = primes[0]
    for r, p in zip(residues[1:], primes[1:]):
        inv = pow(mod, -1, p)
        rr = r.astype(object)
        t = ((rr - x) % p * inv) % p
        x = x + mod * t
        mod *= p
    return x


@lru_cache(maxsize=4)
def _rank_table_cached(n_max):
    bound = max(int(ou_counts(n_max).max()), 1)
    k = 1
    while math.prod(_PRIMES[:k]) <= bound:
        k += 1
        if k > len(_PRIMES):
            raise ResourceError(f"rank table to n={n_max} exceeds the prime budget")
    primes = _PRIMES[:k]
    res = [_rank_table_mod(n_max, p) for p in primes]
    table = _crt(res, primes)
    table.flags.writeable = False
    return table


def rank_table(n_max):
    """Exact ou(r, n) as an object array T with T[n, r + n_max] = ou(r, n).

    Ranks range over -n_max..n_max. Practical for n_max up to about 600.
    """
    n_max = _check_nmax(n_max)
    if n_max > 2000:
        raise ResourceError("full rank tables are limited to n <= 2000; use rank_moments")
    return _rank_table_cached(n_max).copy()


def rank_distribution(n, table=None):
    """Exact rank distribution {m: ou(m, n)} for one weight n >= 1."""
    if n < 1:
        raise UsageError("n must be at least 1")
    if table is None:
        t = _rank_table_cached(int(n))
        n_max = int(n)
    else:
        t = table
        n_max = (t.shape[1] - 1) // 2
        if n > n_max:
            raise UsageError("table too small for this n")
    row = t[n]
    counts = {r - n_max: int(c) for r, c in enumerate(row) if c != 0}
    return RankDistribution(int(n), counts)


# ---------------------------------------------------------------------------
# rank moments

@lru_cache(maxsize=4)
def _even_moments_cached(n_max, half):
    """Object array [n, i] = ou_(2i)(n), i = 0..half."""
    from .qseries import _pair_matrix

    mat = _pair_matrix(half + 1)
    t = _zeros((n_max + 1, half + 1))
    for m in range((n_max - 1) // 2, -1, -1):
        d = 2 * m + 1
        t[d, 0] += 1
        t = pair_divide_even(t, d, mat)
    t.flags.writeable = False
    return t


def rank_moments(n_max, L):
    """Exact even rank moments ou_l(n) for l = 0, 2, ..., L and n <= n_max.

    Returns a dict mapping l to an object array over n. Odd moments vanish
    by the zeta <-> 1/zeta symmetry; use ``rank_moments_all`` to compute
    them without assuming it.
    """
    n_max = _check_nmax(n_max)
    if L < 0:
        raise UsageError("L must be non-negative")
    half = L // 2
    t = _even_moments_cached(n_max, half)
    return {2 * i: t[:, i].copy() for i in range(half + 1)}


def rank_moments_all(n_max, L):
    """All rank moments ou_j(n), 0 <= j <= L, with no symmetry assumption.

    Uses the general moment transport (left and right factors separately);
    slower than ``rank_moments``. Returns a MomentSeries.
    """
    n_max = _check_nmax(n_max)
    t = MomentSeries.constant(n_max, L, 0)
    for m in range((n_max - 1) // 2, -1, -1):
        d = 2 * m + 1
        c = t.coeffs.copy()
        c[d, 0] += 1
        t = MomentSeries(n_max, L, c)
        t = moment_divide(moment_divide(t, d, 1), d, -1)
    return t


# ---------------------------------------------------------------------------
# brute force

def _odd_multisets(total, max_part):
    """Weakly decreasing tuples of odd parts <= max_part summing to total."""
    if total == 0:
        yield ()
        return
    top = min(max_part, total)
    if top % 2 == 0:
        top -= 1
    for p in range(top, 0, -2):
        for rest in _odd_multisets(total - p, p):
            yield (p,) + rest


def brute_force_enumerate(n):
    """All peak-marked odd unimodal sequences of weight n (direct search)."""
    if n < 0 or int(n) != n:
        raise UsageError("n must be a non-negative integer")
    if n > BRUTE_FORCE_MAX:
        raise ResourceError(f"brute force is limited to n <= {BRUTE_FORCE_MAX}")
    out = []
    for peak in range(1, n + 1, 2):
        rest = n - peak
        for left_total in range(rest + 1):
            lefts = list(_odd_multisets(left_total, peak))
            if not lefts:
                continue
            rights = list(_odd_multisets(rest - left_total, peak))
            for lt in lefts:
                for rt in rights:
                    out.append(OddUnimodalSeq(tuple(reversed(lt)), peak, rt))
    return out


# ---------------------------------------------------------------------------
# partitions, rank and crank

def partition_count(n_max):
    """Exact p(0), ..., p(n_max) via the Euler product 1/(q;q)_inf."""
    n_max = _check_nmax(n_max)
    arr = _zeros(n_max + 1)
    arr[0] = 1
    for d in range(1, n_max + 1):
        arr = divide_one_minus_qd(arr, d)
    return arr


def partitions(n, max_part=None):
    """Partitions of n as weakly decreasing tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for p in range(min(n, max_part), 0, -1):
        for rest in partitions(n - p, p):
            yield (p,) + rest


def dyson_rank(lam):
    """Largest part minus number of parts."""
    return (lam[0] if lam else 0) - len(lam)


def crank(lam):
    """Andrews-Garvan crank: largest part if there are no ones, else
    (#parts larger than the number of ones) - (number of ones)."""
    ones = lam.count(1)
    if ones == 0:
        return lam[0] if lam else 0
    return sum(1 for x in lam if x > ones) - ones


def _divide_rank_shift(t, d, shift):
    """Divide a [n, r] table by (1 - zeta^shift q^d)."""
    n1 = t.shape[0]
    g = t.copy()
    for lo in range(d, n1, d):
        hi = min(lo + d, n1)
        src = g[lo - d: hi - d]
        if shift == 1:
            g[lo:hi, 1:] = g[lo:hi, 1:] + src[:, :-1]
        else:
            g[lo:hi, :-1] = g[lo:hi, :-1] + src[:, 1:]
    return g


def _rank_gf_table(n):
    """N(m, k) for k <= n via sum_j q^(j^2)/(zeta q, zeta^-1 q; q)_j."""
    width = 2 * n + 1
    total = _zeros((n + 1, width))
    total[0, n] = 1
    j_top = math.isqrt(n)
    for j in range(1, j_top + 1):
        t = _zeros((n + 1, width))
        t[j * j, n] = 1
        for d in range(1, j + 1):
            t = _divide_rank_shift(_divide_rank_shift(t, d, 1), d, -1)
        total = total + t
    return total


def _crank_gf_table(n):
    """M(m, k) for k <= n via (q;q)_inf/(zeta q, zeta^-1 q; q)_inf."""
    width = 2 * n + 1
    t = _zeros((n + 1, width))
    t[0, n] = 1
    for d in range(1, n + 1):
        t = _divide_rank_shift(_divide_rank_shift(t, d, 1), d, -1)
    for d in range(1, n + 1):
        s = t.copy()
        s[d:] = s[d:] - t[:-d]
        t = s
    return t


def rank_crank_tables(n):
    """Return ({m: N(m, n)}, {m: M(m, n)}) from the two generating functions.

    For n = 1 the crank generating function forces M(-1,1) = M(1,1) = 1 and
    M(0,1) = -1, which differs from the combinatorial crank count.
    """
    if n < 0 or int(n) != n:
        raise UsageError("n must be a non-negative integer")
    if n > 200:
        raise ResourceError("rank/crank tables are limited to n <= 200")
    n = int(n)
    r = _rank_gf_table(n)[n]
    c = _crank_gf_table(n)[n]
    rank = {i - n: int(v) for i, v in enumerate(r) if v != 0}
    crk = {i - n: int(v) for i, v in enumerate(c) if v != 0}
    return rank, crk


# ---------------------------------------------------------------------------
# output

def moments_csv(n_max, moments=(0, 2), n_min=0):
    """CSV text with header ``n,ou,ou_2,...``; integers as decimal strings."""
    moments = sorted(set(int(x) for x in moments))
    if any(x % 2 for x in moments) or any(x < 0 for x in moments):
        raise UsageError("moment orders must be even and non-negative")
    top = max(moments) if moments else 0
    table = rank_moments(n_max, top)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n"] + ["ou" if x == 0 else f"ou_{x}" for x in moments])
    for n in range(n_min, n_max + 1):
        w.writerow([n] + [str(int(table[x][n])) for x in moments])
    return buf.getvalue()
