"""Truncated power series in q with exact integer coefficients.

Two value types live here. ``TruncatedSeries`` holds c(0..N). ``MomentSeries``
holds, for every power q^n, the power sums mu_j(n) = sum_m m^j c(m, n) of
a series in two variables zeta and q. Rank statistics add under products,
so power sums of a product follow from the binomial theorem and the zeta
expansion itself is never formed.

Coefficients are Python integers stored in read-only numpy object arrays.
Every operation returns a fresh value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UsageError

__all__ = [
    "TruncatedSeries",
    "MomentSeries",
    "series_mul",
    "inv_factor",
    "moment_mul",
    "moment_divide",
    "moment_divide_rank_pair",
    "divide_one_minus_qd",
]


def _frozen(arr):
    arr.flags.writeable = False
    return arr


def _zeros(shape):
    out = np.empty(shape, dtype=object)
    out.fill(0)
    return out


def divide_one_minus_qd(arr, d):
    """Return ``arr / (1 - q^d)`` truncated to the same length (axis 0).

    Works on object or integer arrays of any trailing shape. The division is
    a running sum with stride ``d``, done as a cumulative sum over blocks.
    """
    if d < 1:
        raise UsageError("exponent step must be positive")
    n1 = arr.shape[0]
    if d >= n1:
        return arr.copy()
    blocks = -(-n1 // d)
    pad = blocks * d - n1
    if pad:
        fill = _zeros((pad,) + arr.shape[1:]) if arr.dtype == object else np.zeros(
            (pad,) + arr.shape[1:], dtype=arr.dtype)
        work = np.concatenate([arr, fill])
    else:
        work = arr.copy()
    work = work.reshape((blocks, d) + arr.shape[1:]).cumsum(axis=0)
    return work.reshape((blocks * d,) + arr.shape[1:])[:n1]


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Power series c(0) + c(1) q + ... + c(N) q^N with integer coefficients."""

    order: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array([int(x) for x in self.coeffs], dtype=object)
        if self.order < 0 or len(c) != self.order + 1:
            raise UsageError(f"need {self.order + 1} coefficients, got {len(c)}")
        object.__setattr__(self, "coeffs", _frozen(c))

    @classmethod
    def one(cls, order):
        c = [0] * (order + 1)
        c[0] = 1
        return cls(order, c)

    @classmethod
    def monomial(cls, order, exponent, coeff=1):
        c = [0] * (order + 1)
        if 0 <= exponent <= order:
            c[exponent] = coeff
        return cls(order, c)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return self.order + 1

    def tolist(self):
        return list(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.tolist() == other.tolist()

    def __hash__(self):
        return hash((self.order, tuple(self.coeffs)))

    def _check(self, other):
        if not isinstance(other, TruncatedSeries) or other.order != self.order:
            raise UsageError("series orders differ")

    def __add__(self, other):
        self._check(other)
        return TruncatedSeries(self.order, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return TruncatedSeries(self.order, self.coeffs - other.coeffs)

    def __mul__(self, other):
        return series_mul(self, other)

    def __repr__(self):
        head = ", ".join(str(x) for x in self.coeffs[:8])
        more = ", ..." if self.order >= 8 else ""
        return f"TruncatedSeries(order={self.order}, [{head}{more}])"


def _cauchy(a, b):
    """Truncated Cauchy product along axis 0 of two equal-length arrays."""
    n1 = a.shape[0]
    out = _zeros(np.broadcast_shapes(a.shape, b.shape))
    for i in range(n1):
        ai = a[i]
        if np.all(ai == 0):
            continue
        out[i:] += ai * b[: n1 - i]
    return out


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product of two series of the same order."""
    a._check(b)
    return TruncatedSeries(a.order, _cauchy(a.coeffs, b.coeffs))


def inv_factor(start, step, count, power, order) -> TruncatedSeries:
    """Truncation of prod_{k=0}^{count-1} (1 - q^(start + k*step))^(-power).

    ``count`` may be ``math.inf`` (or None) to include every factor whose
    exponent does not exceed ``order``.
    """
    if step < 1 or power < 1 or start < 1:
        raise UsageError("start, step and power must be positive")
    if count is None:
        count = math.inf
    if count != math.inf and (count < 1 or int(count) != count):
        raise UsageError("count must be a positive integer or infinity")
    arr = _zeros(order + 1)
    arr[0] = 1
    k = 0
    while k < count:
        e = start + k * step
        if e > order:
            break
        for _ in range(power):
            arr = divide_one_minus_qd(arr, e)
        k += 1
    return TruncatedSeries(order, arr)


@dataclass(frozen=True, eq=False)
class MomentSeries:
    """Rank power sums mu_j(n) of a series in zeta and q.

    ``coeffs[n, j]`` is sum_m m^j c(m, n) for 0 <= n <= order and
    0 <= j <= max_moment.
    """

    order: int
    max_moment: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=object)
        if c.shape != (self.order + 1, self.max_moment + 1):
            raise UsageError(
                f"coefficient table must have shape {(self.order + 1, self.max_moment + 1)}")
        c = np.vectorize(int, otypes=[object])(c) if c.size else c.copy()
        object.__setattr__(self, "coeffs", _frozen(c))

    @classmethod
    def constant(cls, order, max_moment, value=1):
        c = _zeros((order + 1, max_moment + 1))
        c[0, 0] = value
        return cls(order, max_moment, c)

    @classmethod
    def from_series(cls, series: TruncatedSeries, max_moment, rank=0):
        """Lift a plain series whose every term carries the same rank."""
        c = _zeros((series.order + 1, max_moment + 1))
        for j in range(max_moment + 1):
            c[:, j] = series.coeffs * (rank ** j)
        return cls(series.order, max_moment, c)

    @classmethod
    def factor(cls, step, weight, order, max_moment):
        """Moments of 1/(1 - zeta^weight q^step): the term q^(e*step) has rank e*weight."""
        if step < 1:
            raise UsageError("step must be positive")
        c = _zeros((order + 1, max_moment + 1))
        for e in range(order // step + 1):
            for j in range(max_moment + 1):
                c[e * step, j] = (e * weight) ** j
        return cls(order, max_moment, c)

    def counts(self) -> TruncatedSeries:
        """The zeta = 1 specialization (the mu_0 layer)."""
        return TruncatedSeries(self.order, self.coeffs[:, 0])

    def moment(self, j):
        return list(self.coeffs[:, j])

    def __eq__(self, other):
        if not isinstance(other, MomentSeries):
            return NotImplemented
        return (self.order, self.max_moment) == (other.order, other.max_moment) and bool(
            np.all(self.coeffs == other.coeffs))

    def __hash__(self):
        return hash((self.order, self.max_moment, tuple(self.coeffs.ravel())))


def _binom_table(L):
    return [[math.comb(j, i) for i in range(L + 1)] for j in range(L + 1)]


def moment_mul(a: MomentSeries, b: MomentSeries) -> MomentSeries:
    """Product of two zeta-graded series in power-sum form.

    mu_j(n) = sum_{n1+n2=n} sum_i C(j,i) mu_i^a(n1) mu_{j-i}^b(n2).
    """
    if not (isinstance(a, MomentSeries) and isinstance(b, MomentSeries)):
        raise UsageError("moment_mul needs two MomentSeries")
    if (a.order, a.max_moment) != (b.order, b.max_moment):
        raise UsageError("moment series shapes differ")
    L = a.max_moment
    C = _binom_table(L)
    conv = {}
    out = _zeros((a.order + 1, L + 1))
    for j in range(L + 1):
        for i in range(j + 1):
            key = (i, j - i)
            if key not in conv:
                conv[key] = _cauchy(a.coeffs[:, i], b.coeffs[:, j - i])
            out[:, j] += C[j][i] * conv[key]
    return MomentSeries(a.order, L, out)


def moment_divide(a: MomentSeries, step, weight) -> MomentSeries:
    """Multiply by 1/(1 - zeta^weight q^step) in power-sum form.

    G = F + zeta^w q^d G gives mu_j^G(n) = mu_j^F(n) + sum_i C(j,i) w^(j-i) mu_i^G(n-d).
    """
    if step < 1:
        raise UsageError("step must be positive")
    L = a.max_moment
    T = np.array([[math.comb(j, i) * weight ** (j - i) if i <= j else 0
                   for j in range(L + 1)] for i in range(L + 1)], dtype=object)
    g = a.coeffs.copy()
    n1 = a.order + 1
    for lo in range(step, n1, step):
        hi = min(lo + step, n1)
        g[lo:hi] = g[lo:hi] + g[lo - step: hi - step].dot(T)
    return MomentSeries(a.order, L, g)


def _pair_matrix(n_even):
    # even moments 0, 2, ..., 2(n_even-1); entry [i, j] = 2 C(2j, 2i)
    return np.array([[2 * math.comb(2 * j, 2 * i) if i <= j else 0
                      for j in range(n_even)] for i in range(n_even)], dtype=object)


def pair_divide_even(even, step, mat=None):
    """Divide an even-moment table by (1 - zeta q^d)(1 - zeta^-1 q^d).

    ``even[n, i]`` holds mu_{2i}(n) of a rank-symmetric series. Using
    1/((1 - zeta x)(1 - x/zeta)) = G with G = F + (zeta + 1/zeta) x G - x^2 G,
    mu_j^G(n) = mu_j^F(n) + 2 sum_{i even} C(j,i) mu_i^G(n-d) - mu_j^G(n-2d).
    """
    if mat is None:
        mat = _pair_matrix(even.shape[1])
    g = even.copy()
    n1 = g.shape[0]
    d = step
    for lo in range(d, n1, d):
        hi = min(lo + d, n1)
        upd = g[lo - d: hi - d].dot(mat)
        if lo - 2 * d >= 0:
            upd = upd - g[lo - 2 * d: hi - 2 * d]
        g[lo:hi] = g[lo:hi] + upd
    return g


def moment_divide_rank_pair(a: MomentSeries, step) -> MomentSeries:
    """Multiply a rank-symmetric series by 1/((1 - zeta q^d)(1 - zeta^-1 q^d)).

    Only even moments are transported; the input must have vanishing odd
    moments, and so does the output.
    """
    L = a.max_moment
    if any(x != 0 for j in range(1, L + 1, 2) for x in a.coeffs[:, j]):
        raise UsageError("input series is not rank-symmetric")
    even = a.coeffs[:, 0::2].copy()
    g = pair_divide_even(even, step)
    out = _zeros(a.coeffs.shape)
    out[:, 0::2] = g
    return MomentSeries(a.order, L, out)
