"""Boltzmann sampling of odd unimodal sequences.

Under the Boltzmann measure with parameter q a sequence of size N has
probability proportional to q^N. Conditioned on the peak 2m+1, the numbers
of parts equal to 2k-1 (k <= m+1) on each side are independent geometric
variables with P(X >= x) = q^((2k-1) x). Rejecting until N = n gives the
uniform law on sequences of size n.

Two drawing modes are provided:

* full records (``sample_free``, ``sample_free_batch``, ``sample_exact``)
  carry every part count;
* ``sample_fast`` draws only the peak, the largest part on each side and
  selected part counts, jointly with their exact law. It is what makes
  n = 10^6 with 10^5 draws cheap.

Geometric variables are drawn by inversion, floor(log U / ((2k-1) log q))
with U in (0, 1], so a given generator stream gives the same records on
every platform.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ResourceError, UsageError
from .special import B_CONST

__all__ = [
    "q_of_n",
    "make_rng",
    "spawn_rngs",
    "BoltzmannParams",
    "SampleRecord",
    "FullBatch",
    "FastBatch",
    "ExactRun",
    "sample_free",
    "sample_free_batch",
    "sample_fast",
    "sample_fast_parallel",
    "sample_exact",
    "sample_exact_batch",
    "predicted_acceptance",
    "exact_acceptance",
    "expected_peak",
    "peak_statistic",
    "rank_statistic",
    "smallpart_statistics",
    "largest_part_statistic",
    "record_dicts",
    "dump_jsonl",
]

_TAIL = 1e-12


def q_of_n(n):
    """e^(-1/(B sqrt n)), B = sqrt(6)/pi."""
    if not n > 0:
        raise UsageError("n must be positive")
    return math.exp(-1.0 / (B_CONST * math.sqrt(n)))


def make_rng(seed):
    """Counter-based Philox generator from an integer seed or SeedSequence."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(ss))


def spawn_rngs(seed, count):
    """Independent streams for ``count`` workers, determined by (seed, count)."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return [np.random.Generator(np.random.Philox(s)) for s in ss.spawn(count)]


def _log_peak_weights(logq, m_count):
    m = np.arange(m_count)
    j = 2.0 * m + 1
    return j * logq - 2.0 * np.cumsum(np.log1p(-np.exp(j * logq)))


@dataclass(frozen=True)
class BoltzmannParams:
    """Target size, Boltzmann parameter and the normalized peak law.

    ``weights[m]`` is the Boltzmann probability of peak 2m+1 for
    m <= m_cutoff; the dropped tail has mass below 1e-12.
    """

    n: int
    q: float
    m_cutoff: int
    weights: np.ndarray = field(repr=False)
    cdf: np.ndarray = field(repr=False)

    @classmethod
    def for_size(cls, n, q=None):
        if n < 1:
            raise UsageError("n must be >= 1")
        q = q_of_n(n) if q is None else float(q)
        if not 0 < q < 1:
            raise UsageError("need 0 < q < 1")
        logq = math.log(q)
        size = 64
        while True:
            lw = _log_peak_weights(logq, size)
            top = lw.max()
            # beyond the last index w_m decays at least like q^(2m)
            tail = lw[-1] - math.log1p(-q * q)
            norm = top + math.log(np.exp(lw - top).sum())
            if tail - norm < math.log(_TAIL) - 2:
                break
            size *= 2
            if size > 1 << 26:
                raise ResourceError("peak law too wide for this q")
        w = np.exp(lw - norm)
        c = np.cumsum(w)
        cut = int(np.searchsorted(c, 1.0 - _TAIL / 4))
        cut = min(cut, size - 1)
        w = w[: cut + 1]
        w.flags.writeable = False
        c = np.cumsum(w)
        c.flags.writeable = False
        return cls(int(n), q, cut, w, c)

    @property
    def scale(self):
        """B sqrt n."""
        return B_CONST * math.sqrt(self.n)

    @property
    def logq(self):
        return math.log(self.q)

    def draw_peaks(self, rng, size):
        u = rng.random(size)
        idx = np.searchsorted(self.cdf, u * self.cdf[-1], side="right")
        return np.minimum(idx, self.m_cutoff)


def _geometric(rng, logq, parts, shape):
    """Counts with P(X >= x) = q^(parts * x), by inversion."""
    u = 1.0 - rng.random(shape)
    return np.floor(np.log(u) / (parts * logq)).astype(np.int64)


# ---------------------------------------------------------------------------
# records

@dataclass(frozen=True)
class SampleRecord:
    """One sequence: peak index m and counts of 1, 3, ..., 2m+1 per side."""

    m: int
    x_left: tuple
    x_right: tuple

    def __post_init__(self):
        if self.m < 0:
            raise UsageError("peak index must be non-negative")
        for side in (self.x_left, self.x_right):
            if len(side) != self.m + 1 or any(c < 0 for c in side):
                raise UsageError("need m+1 non-negative counts per side")

    @property
    def peak(self):
        return 2 * self.m + 1

    @property
    def N(self):
        parts = range(1, 2 * self.m + 2, 2)
        return self.peak + sum(p * (a + b) for p, a, b in zip(parts, self.x_left, self.x_right))

    @property
    def rank(self):
        return sum(self.x_left) - sum(self.x_right)

    def largest(self, side, t):
        """Y_t: the t-th largest part on ``side`` ('L' or 'R'), or None if absent."""
        counts = self.x_left if side == "L" else self.x_right
        seen = 0
        for k in range(self.m, -1, -1):
            seen += counts[k]
            if seen >= t:
                return 2 * k + 1
        return None

    def as_sequence(self):
        """(left parts ascending, peak, right parts descending)."""
        left = []
        for k, c in enumerate(self.x_left):
            left.extend([2 * k + 1] * int(c))
        right = []
        for k in range(self.m, -1, -1):
            right.extend([2 * k + 1] * int(self.x_right[k]))
        return tuple(left), self.peak, tuple(right)


@dataclass
class FullBatch:
    """Full records in array form; columns beyond m+1 are zero."""

    n: int
    q: float
    m: np.ndarray
    left: np.ndarray
    right: np.ndarray

    def __len__(self):
        return len(self.m)

    @property
    def parts(self):
        return np.arange(1, 2 * self.left.shape[1], 2)

    @property
    def N(self):
        return 2 * self.m + 1 + (self.left + self.right) @ self.parts

    @property
    def rank(self):
        return self.left.sum(axis=1) - self.right.sum(axis=1)

    def largest(self, side):
        """Largest part per row, 0 when the side is empty."""
        x = self.left if side == "L" else self.right
        nz = x > 0
        last = x.shape[1] - 1 - np.argmax(nz[:, ::-1], axis=1)
        return np.where(nz.any(axis=1), 2 * last + 1, 0)

    def small_counts(self, side, k_n):
        x = self.left if side == "L" else self.right
        out = np.zeros((len(self), k_n), dtype=np.int64)
        w = min(k_n, x.shape[1])
        out[:, :w] = x[:, :w]
        return out

    def record(self, i):
        m = int(self.m[i])
        return SampleRecord(m, tuple(int(c) for c in self.left[i, : m + 1]),
                            tuple(int(c) for c in self.right[i, : m + 1]))


def _full_counts(params, rng, m):
    size = len(m)
    width = int(m.max()) + 1 if size else 1
    parts = np.arange(1, 2 * width, 2, dtype=float)
    mask = np.arange(width)[None, :] <= m[:, None]
    left = _geometric(rng, params.logq, parts, (size, width)) * mask
    right = _geometric(rng, params.logq, parts, (size, width)) * mask
    return left, right


def sample_free_batch(params: BoltzmannParams, rng, size):
    """``size`` independent full records from the Boltzmann measure."""
    m = params.draw_peaks(rng, size)
    left, right = _full_counts(params, rng, m)
    return FullBatch(params.n, params.q, m, left, right)


def sample_free(params: BoltzmannParams, rng):
    """One full record from the Boltzmann measure."""
    return sample_free_batch(params, rng, 1).record(0)


@dataclass
class FastBatch:
    """Peak, largest part per side and selected counts, drawn jointly.

    ``small_left[:, k-1]`` is the count of 2k-1 for k <= k_small;
    ``probe_left[:, i]`` is the count of ``probes[i]``. A largest part of 0
    means the side is empty.
    """

    n: int
    q: float
    m: np.ndarray
    y_left: np.ndarray
    y_right: np.ndarray
    small_left: np.ndarray
    small_right: np.ndarray
    probes: tuple
    probe_left: np.ndarray
    probe_right: np.ndarray

    def __len__(self):
        return len(self.m)

    def largest(self, side):
        return self.y_left if side == "L" else self.y_right

    def small_counts(self, side, k_n):
        x = self.small_left if side == "L" else self.small_right
        if k_n > x.shape[1]:
            raise UsageError(f"only {x.shape[1]} small parts were drawn")
        return x[:, :k_n]


def _neg_cum_log(logq, top):
    """T[i] = -sum_{odd j <= 2i-1} log(1 - q^j), T[0] = 0, for i <= top."""
    j = np.arange(1, 2 * top, 2, dtype=float)
    return np.concatenate([[0.0], np.cumsum(-np.log1p(-np.exp(j * logq)))])


def _counts_given_largest(rng, logq, part, y):
    """Count of ``part`` given that the largest part on the side is y (0: empty)."""
    size = len(y)
    g = _geometric(rng, logq, float(part), size)
    return np.where(part < y, g, np.where(part == y, g + 1, 0))


def sample_fast(params: BoltzmannParams, rng, size, k_small=10, probes=()):
    """Exact joint draws of the statistics the limit checks need.

    The largest part Y on a side with peak 2m+1 satisfies
    P(Y <= j) = prod_{j < odd i <= 2m+1} (1 - q^i); it is drawn by
    inversion. Given Y, smaller parts keep their geometric laws, the count
    of Y itself is 1 + geometric and larger parts are absent.
    """
    probes = tuple(int(p) for p in probes)
    if any(p < 1 or p % 2 == 0 for p in probes):
        raise UsageError("probe parts must be odd positive integers")
    logq = params.logq
    m = params.draw_peaks(rng, size)
    T = _neg_cum_log(logq, params.m_cutoff + 1)
    out = {}
    for side in ("L", "R"):
        u = 1.0 - rng.random(size)
        target = T[m + 1] + np.log(u)
        idx = np.searchsorted(T, target, side="left")
        idx = np.minimum(idx, m + 1)
        y = np.where(idx > 0, 2 * idx - 1, 0)
        small = np.stack([_counts_given_largest(rng, logq, 2 * k - 1, y)
                          for k in range(1, k_small + 1)], axis=1) if k_small else np.zeros((size, 0), np.int64)
        pr = np.stack([_counts_given_largest(rng, logq, p, y) for p in probes],
                      axis=1) if probes else np.zeros((size, 0), np.int64)
        out[side] = (y, small, pr)
    return FastBatch(params.n, params.q, m, out["L"][0], out["R"][0], out["L"][1],
                     out["R"][1], probes, out["L"][2], out["R"][2])


def sample_fast_parallel(params, seed, size, threads=1, **kw):
    """``sample_fast`` split over ``threads`` spawned streams, concatenated in order."""
    if threads <= 1:
        return sample_fast(params, make_rng(seed), size, **kw)
    rngs = spawn_rngs(seed, threads)
    sizes = [size // threads + (i < size % threads) for i in range(threads)]
    with ThreadPoolExecutor(threads) as ex:
        parts = list(ex.map(lambda a: sample_fast(params, a[0], a[1], **kw), zip(rngs, sizes)))
    cat = lambda name: np.concatenate([getattr(p, name) for p in parts])
    return FastBatch(params.n, params.q, cat("m"), cat("y_left"), cat("y_right"),
                     cat("small_left"), cat("small_right"), parts[0].probes,
                     cat("probe_left"), cat("probe_right"))


# ---------------------------------------------------------------------------
# exact size by rejection

@dataclass
class ExactRun:
    """Accepted records of size n with the attempt count behind them."""

    batch: FullBatch
    attempts: int

    @property
    def accepted(self):
        return len(self.batch)

    @property
    def acceptance_rate(self):
        return self.accepted / self.attempts if self.attempts else math.nan


def sample_exact_batch(params: BoltzmannParams, rng, count, max_attempts=None, chunk=None):
    """Draw ``count`` records of size exactly n by rejection.

    Peaks above n are rejected before any part counts are drawn. Raises
    ResourceError (with the attempt count) if ``max_attempts`` is reached.
    """
    n = params.n
    if max_attempts is None:
        max_attempts = max(10_000, int(200 * count / max(predicted_acceptance(n), 1e-12)))
    if chunk is None:
        chunk = max(1000, min(200_000, 4_000_000 // (params.m_cutoff + 1)))
    attempts = 0
    got_m, got_l, got_r = [], [], []
    have = 0
    width = (n - 1) // 2 + 1
    while have < count:
        if attempts >= max_attempts:
            raise ResourceError(
                f"exact-size sampling gave {have} of {count} records after {attempts} attempts",
                attempts)
        size = min(chunk, max_attempts - attempts)
        m_all = params.draw_peaks(rng, size)
        keep = np.flatnonzero(2 * m_all + 1 <= n)
        if not len(keep):
            attempts += size
            continue
        m = m_all[keep]
        left, right = _full_counts(params, rng, m)
        parts = np.arange(1, 2 * left.shape[1], 2)
        N = 2 * m + 1 + (left + right) @ parts
        ok = np.flatnonzero(N == n)
        take = ok[: count - have]
        # count draws up to the one that completed the request
        attempts += size if len(take) == len(ok) else int(keep[take[-1]]) + 1
        if not len(take):
            continue
        l = np.zeros((len(take), width), np.int64)
        r = np.zeros((len(take), width), np.int64)
        w = min(width, left.shape[1])
        l[:, :w] = left[take, :w]
        r[:, :w] = right[take, :w]
        got_m.append(m[take])
        got_l.append(l)
        got_r.append(r)
        have += len(take)
    batch = FullBatch(n, params.q, np.concatenate(got_m), np.concatenate(got_l), np.concatenate(got_r))
    return ExactRun(batch, attempts)


def sample_exact(params: BoltzmannParams, rng, max_attempts=None):
    """One record of size exactly n, uniform over all such sequences."""
    return sample_exact_batch(params, rng, 1, max_attempts).batch.record(0)


def predicted_acceptance(n):
    """2^(-5/4) 3^(-1/4) n^(-3/4)."""
    return 2 ** -1.25 * 3 ** -0.25 * n ** -0.75


def exact_acceptance(n, q=None):
    """ou(n) q^n / OU(q): the exact probability that a Boltzmann draw has size n."""
    from .exact import ou_counts

    params = BoltzmannParams.for_size(n, q)
    lw = _log_peak_weights(params.logq, params.m_cutoff + 1)
    top = lw.max()
    log_total = top + math.log(np.exp(lw - top).sum())
    ou_n = int(ou_counts(n)[n])
    return math.exp(math.log(ou_n) + n * params.logq - log_total)


# ---------------------------------------------------------------------------
# normalized statistics

def expected_peak(n):
    """B sqrt n log(2 B sqrt n) + B sqrt n (gamma - log 2)."""
    s = B_CONST * math.sqrt(n)
    return s * math.log(2 * s) + s * (np.euler_gamma - math.log(2))


def _centre(n):
    s = B_CONST * math.sqrt(n)
    return s, s * math.log(2 * s)


def peak_statistic(record, n):
    """(PK - B sqrt n log(2 B sqrt n)) / (B sqrt n); ``record`` may be a batch."""
    s, c = _centre(n)
    peak = 2 * np.asarray(record.m) + 1
    out = (peak - c) / s
    return out if np.ndim(out) else float(out)


def rank_statistic(record, n):
    """rank / sqrt(3n/2)."""
    out = np.asarray(record.rank) / math.sqrt(1.5 * n)
    return out if np.ndim(out) else float(out)


def largest_part_statistic(y, n):
    """(Y - B sqrt n log(2 B sqrt n)) / (B sqrt n); an empty side (y = 0) maps to -inf."""
    s, c = _centre(n)
    y = np.asarray(y, dtype=float)
    return np.where(y > 0, (y - c) / s, -np.inf)


def smallpart_statistics(record, n, k_n):
    """Normalized small-part statistics for a record or a batch.

    Returns a dict with, per side 'L' and 'R':
    ``scaled[side]``: (2k-1) X_(2k-1) / (B sqrt n) for k = 1..k_n;
    ``total[side]``: sum_{k <= k_n} X_(2k-1) / (B sqrt n) (uncentered);
    ``largest[side]``: normalized largest part (-inf when absent).
    """
    s = B_CONST * math.sqrt(n)
    parts = np.arange(1, 2 * k_n, 2)
    out = {"scaled": {}, "total": {}, "largest": {}}
    if isinstance(record, SampleRecord):
        for side, x in (("L", record.x_left), ("R", record.x_right)):
            cnt = np.zeros(k_n, dtype=np.int64)
            w = min(k_n, len(x))
            cnt[:w] = x[:w]
            out["scaled"][side] = parts * cnt / s
            out["total"][side] = float(cnt.sum() / s)
            y = record.largest(side, 1)
            out["largest"][side] = float(largest_part_statistic(y or 0, n))
        return out
    for side in ("L", "R"):
        cnt = record.small_counts(side, k_n)
        out["scaled"][side] = parts[None, :] * cnt / s
        out["total"][side] = cnt.sum(axis=1) / s
        out["largest"][side] = largest_part_statistic(record.largest(side), n)
    return out


# ---------------------------------------------------------------------------
# dumps

def _top_parts(counts, m, t=3):
    out = []
    for k in range(m, -1, -1):
        c = int(counts[k])
        out.extend([2 * k + 1] * min(c, t - len(out)))
        if len(out) >= t:
            break
    return out


def record_dicts(batch, k_small=10):
    """Per-draw dicts {m, N, rank, peak, y_left, y_right, x_small}."""
    if isinstance(batch, FullBatch):
        N = batch.N
        rank = batch.rank
        for i in range(len(batch)):
            m = int(batch.m[i])
            yield {"m": m, "N": int(N[i]), "rank": int(rank[i]), "peak": 2 * m + 1,
                   "y_left": _top_parts(batch.left[i], m), "y_right": _top_parts(batch.right[i], m),
                   "x_small": {"L": [int(c) for c in batch.left[i, :k_small]],
                               "R": [int(c) for c in batch.right[i, :k_small]]}}
    else:
        for i in range(len(batch)):
            m = int(batch.m[i])
            yl, yr = int(batch.y_left[i]), int(batch.y_right[i])
            yield {"m": m, "N": None, "rank": None, "peak": 2 * m + 1,
                   "y_left": [yl] if yl else [], "y_right": [yr] if yr else [],
                   "x_small": {"L": [int(c) for c in batch.small_left[i, :k_small]],
                               "R": [int(c) for c in batch.small_right[i, :k_small]]}}


def dump_jsonl(batch, fh, k_small=10, header=None):
    """Write one JSON object per draw; an optional first line carries metadata."""
    if header is not None:
        fh.write(json.dumps({"meta": header}, sort_keys=True) + "\n")
    for rec in record_dicts(batch, k_small):
        fh.write(json.dumps(rec, sort_keys=True) + "\n")
