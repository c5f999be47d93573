"""Real special functions and limit-law CDFs.

Modified Bessel I_nu uses its power series for small x and the
large-argument expansion above a switch point. For half-integer orders (the
only ones the asymptotic formulas use) the expansion terminates, keeps the
exponentially small e^(-x) companion term and is exact up to rounding, so
the switch sits at x = 10. Other orders switch at max(40, nu^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, UsageError

__all__ = [
    "B_CONST",
    "BESSEL_SWITCH",
    "bessel_i",
    "bessel_i_series",
    "bessel_i_asymptotic",
    "bessel_i_over_power",
    "euler_number",
    "euler_poly",
    "kappa_coefficient",
    "cot_deriv",
    "gauss_sech",
    "gauss_sech_coeff",
    "gauss_sech_series",
    "sech_cdf",
    "sech_pdf",
    "gumbel_half_cdf",
    "gumbel_half_pdf",
    "largest_part_cdf",
    "largest_pair_cdf",
    "peak_largest_cdf",
    "half_log_gamma_cdf",
    "odd_tail_product",
    "LimitLaw",
]

B_CONST = math.sqrt(6.0) / math.pi
BESSEL_SWITCH = 10.0
_TINY = 1e-17


def _check_order(nu):
    if not np.isfinite(nu) or nu < -0.5:
        raise DomainError(f"Bessel order {nu} is not supported (need nu >= -1/2)")


def _series_sum(nu, x):
    """sum_m (x/2)^(2m) / (m! (nu+1)_m), vectorized, all terms positive."""
    h2 = (x / 2.0) ** 2
    term = np.ones_like(x)
    total = np.ones_like(x)
    m = 0
    while True:
        m += 1
        term = term * h2 / (m * (m + nu))
        total = total + term
        if np.all(term <= _TINY * total) or m > 5000:
            break
    return total


def bessel_i_series(nu, x):
    """I_nu(x) from the defining power series (any x >= 0)."""
    _check_order(nu)
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        pref = np.exp(nu * np.log(x / 2.0) - math.lgamma(nu + 1.0))
    if nu == 0:
        pref = np.where(x == 0, 1.0, pref)
    out = pref * _series_sum(nu, x)
    return out if out.ndim else float(out)


def _half_integer(nu):
    return float(nu + 0.5).is_integer()


def _switch(nu):
    """Argument above which the large-x expansion is used.

    For half-integer orders the expansion terminates and is exact; otherwise
    it is only asymptotic and needs x well beyond nu^2.
    """
    return BESSEL_SWITCH if _half_integer(nu) else max(40.0, nu * nu)


def _asym_sums(nu, x):
    """(sum (-1)^k a_k x^-k, sum a_k x^-k), truncated at the smallest term.

    For half-integer nu the sums are finite and are taken in full.
    """
    finite = _half_integer(nu)
    mu = 4.0 * nu * nu
    s1 = np.ones_like(x)
    s2 = np.ones_like(x)
    term = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    prev = np.full(x.shape, np.inf)
    for k in range(1, 200):
        factor = (mu - (2 * k - 1) ** 2) / (k * 8.0)
        if factor == 0.0:
            break
        new = term * factor / x
        if not finite:
            active &= ~(np.abs(new) >= np.abs(prev))
        if not active.any():
            break
        term = np.where(active, new, term)
        s1 = s1 + np.where(active, (-1) ** k * new, 0.0)
        s2 = s2 + np.where(active, new, 0.0)
        prev = np.abs(new)
        if not finite and np.all(np.abs(new) <= _TINY * np.abs(s1)):
            break
    return s1, s2


def bessel_i_asymptotic(nu, x, scaled=False):
    """Large-argument expansion of I_nu(x) including the e^(-x) companion.

    I_nu(x) ~ [e^x S1(x) - sin(nu pi) e^(-x) S2(x)] / sqrt(2 pi x).
    """
    _check_order(nu)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("asymptotic branch needs x > 0")
    s1, s2 = _asym_sums(nu, x)
    root = np.sqrt(2.0 * math.pi * x)
    sn = math.sin(nu * math.pi)
    if scaled:
        out = (s1 - sn * np.exp(-2.0 * x) * s2) / root
    else:
        out = (np.exp(x) * s1 - sn * np.exp(-x) * s2) / root
    return out if out.ndim else float(out)


def bessel_i(nu, x, scaled=False):
    """Modified Bessel function I_nu(x) for nu >= -1/2, x >= 0.

    With ``scaled=True`` returns e^(-x) I_nu(x), which stays finite for
    large x.
    """
    _check_order(nu)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("x must be non-negative")
    out = np.empty_like(x)
    small = x < _switch(nu)
    if small.any():
        xs = x[small]
        v = bessel_i_series(nu, xs)
        out[small] = v * np.exp(-xs) if scaled else v
    if (~small).any():
        out[~small] = bessel_i_asymptotic(nu, x[~small], scaled=scaled)
    return out if out.ndim else float(out)


def bessel_i_over_power(nu, x, scaled=False):
    """I_nu(x) / x^nu, an entire function of x; finite at x = 0.

    Useful where I_nu(c t) / t^nu appears and the quotient must not be
    formed numerically near t = 0.
    """
    _check_order(nu)
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < _switch(nu)
    if small.any():
        xs = x[small]
        v = 2.0 ** (-nu) / math.gamma(nu + 1.0) * _series_sum(nu, xs)
        out[small] = v * np.exp(-xs) if scaled else v
    if (~small).any():
        xl = x[~small]
        out[~small] = bessel_i_asymptotic(nu, xl, scaled=scaled) * xl ** (-nu)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Euler numbers and polynomials: 2 e^(xt)/(e^t + 1) = sum E_n(x) t^n / n!

@lru_cache(maxsize=None)
def _euler_numbers(r_max):
    e = [0] * (r_max + 1)
    e[0] = 1
    for n in range(2, r_max + 1, 2):
        e[n] = -sum(math.comb(n, k) * e[k] for k in range(0, n, 2))
    return tuple(e)


def euler_number(r):
    """Euler number E_r (1, 0, -1, 0, 5, ...), an exact integer."""
    if r < 0 or int(r) != r:
        raise UsageError("r must be a non-negative integer")
    return _euler_numbers(max(int(r), 2))[int(r)]


def euler_poly(r, x):
    """Euler polynomial E_r(x). Exact when x is an int or Fraction.

    Uses E_r(x) = sum_k C(r,k) E_k 2^-k (x - 1/2)^(r-k).
    """
    if r < 0 or int(r) != r:
        raise UsageError("r must be a non-negative integer")
    r = int(r)
    e = _euler_numbers(max(r, 2))
    exact = isinstance(x, (int, Fraction))
    h = (Fraction(x) - Fraction(1, 2)) if exact else (np.asarray(x, dtype=float) - 0.5)
    total = 0
    for k in range(0, r + 1, 2):
        c = Fraction(math.comb(r, k) * e[k], 2 ** k)
        total = total + (c if exact else float(c)) * h ** (r - k)
    return total


def kappa_coefficient(a, b):
    """(2 pi)^-a (2(a+b))! / (a! (2b)!) E_2b(1/2)."""
    if a < 0 or b < 0:
        raise UsageError("a and b must be non-negative")
    e = euler_poly(2 * b, Fraction(1, 2))
    return (2 * math.pi) ** (-a) * math.factorial(2 * (a + b)) / (
        math.factorial(a) * math.factorial(2 * b)) * float(e)


# ---------------------------------------------------------------------------
# derivatives of cot

@lru_cache(maxsize=None)
def _cot_poly(j):
    """Integer coefficients Q_j with C_j = (i/2)^j Q_j(cot(pi w)).

    d/dw cot(pi w) = -pi (1 + c^2), hence (1/(2 pi i)) d/dw P(c)
    = (i/2) (1 + c^2) P'(c), i.e. Q_(j+1) = (1 + c^2) Q_j'.
    """
    q = (0, 1)
    for _ in range(j):
        der = [k * q[k] for k in range(1, len(q))] or [0]
        new = [0] * (len(der) + 2)
        for k, c in enumerate(der):
            new[k] += c
            new[k + 2] += c
        q = tuple(new)
    return q


def cot_deriv(j, w):
    """C_j(w) = ((1/(2 pi i)) d/dw)^j cot(pi w), vectorized over real w."""
    if j < 0 or int(j) != j:
        raise UsageError("j must be a non-negative integer")
    w = np.asarray(w, dtype=float)
    if np.any(np.abs(w - np.round(w)) < 1e-14):
        raise DomainError("cot has a pole at integer arguments")
    s = np.sin(math.pi * w)
    c = np.cos(math.pi * w) / s
    q = _cot_poly(int(j))
    val = np.zeros_like(c)
    for coef in reversed(q):
        val = val * c + coef
    out = (0.5j) ** j * np.asarray(val)
    return out if out.ndim else complex(out)


# ---------------------------------------------------------------------------
# Gaussian times sech, and its Taylor coefficients

def gauss_sech(u, z, v):
    """e^(pi v u^2 / 2z) / (2 cosh(pi u / 2z))."""
    z = complex(z)
    if z.real == 0:
        raise DomainError("need Re(z) != 0")
    ch = np.cosh(np.pi * np.asarray(u) / (2 * z))
    if np.any(np.abs(ch) < 1e-14):
        raise DomainError("cosh vanishes")
    return np.exp(np.pi * v * np.asarray(u) ** 2 / (2 * z)) / (2 * ch)


def gauss_sech_coeff(v, z, j):
    """sum_{a+b=j} v^a kappa(a,b) z^(-a-2b)."""
    z = complex(z)
    return sum(v ** a * kappa_coefficient(a, j - a) * z ** (-a - 2 * (j - a))
               for a in range(j + 1))


def gauss_sech_series(u, z, v, J, variable="pi"):
    """Partial Taylor sum 1/2 sum_{j<=J} w^(2j)/(2j)! coeff_j(v, z).

    ``variable="pi"`` uses w = pi u, which reproduces ``gauss_sech``.
    ``variable="2pi_i"`` uses w = 2 pi i u; that series sums to
    e^(-2 pi v u^2/z) / (2 cos(pi u/z)) instead and is kept for comparison.
    """
    if variable == "pi":
        w = math.pi * u
    elif variable == "2pi_i":
        w = 2j * math.pi * u
    else:
        raise UsageError("variable must be 'pi' or '2pi_i'")
    return 0.5 * sum(w ** (2 * j) / math.factorial(2 * j) * gauss_sech_coeff(v, z, j)
                     for j in range(J + 1))


# ---------------------------------------------------------------------------
# limit laws

def sech_cdf(x):
    """(2/pi) arctan(e^(pi x / 2)): hyperbolic secant law, mean 0, scale 1."""
    x = np.asarray(x, dtype=float)
    out = 2.0 / math.pi * np.arctan(np.exp(np.clip(math.pi * x / 2, -700, 700)))
    return out if out.ndim else float(out)


def sech_pdf(x):
    x = np.asarray(x, dtype=float)
    out = 0.5 / np.cosh(np.clip(math.pi * x / 2, -700, 700))
    return out if out.ndim else float(out)


def gumbel_half_cdf(v):
    """e^(-e^(-v)/2)."""
    v = np.asarray(v, dtype=float)
    out = np.exp(-0.5 * np.exp(-np.clip(v, -700, 700)))
    return out if out.ndim else float(out)


def gumbel_half_pdf(v):
    v = np.asarray(v, dtype=float)
    e = np.exp(-np.clip(v, -700, 700))
    out = 0.5 * e * np.exp(-0.5 * e)
    return out if out.ndim else float(out)


def largest_part_cdf(w):
    """Limit CDF of the scaled largest part on one side of the peak.

    1 - (1 - e^(-e^(-w)/4))^2: the peak carries e^(-e^(-v)/2) and each side,
    given the peak, the truncated law exp(-(e^(-w) - e^(-u0))/4).
    """
    w = np.asarray(w, dtype=float)
    a = np.exp(-0.25 * np.exp(-np.clip(w, -700, 700)))
    out = 1.0 - (1.0 - a) ** 2
    return out if out.ndim else float(out)


def largest_pair_cdf(w_left, w_right):
    """Joint limit CDF of the scaled largest parts on both sides.

    Integrates the peak density against the two conditional laws; with
    A = e^(-w) and A_lo <= A_hi the three peak ranges give
    e^(-A_hi/2) + 2 e^(-A_hi/4)(e^(-A_lo/4) - e^(-A_hi/4)) + (A_lo/2) e^(-(A_lo+A_hi)/4).
    """
    a1 = np.exp(-np.clip(np.asarray(w_left, dtype=float), -700, 700))
    a2 = np.exp(-np.clip(np.asarray(w_right, dtype=float), -700, 700))
    lo, hi = np.minimum(a1, a2), np.maximum(a1, a2)
    out = (np.exp(-hi / 2) + 2 * np.exp(-hi / 4) * (np.exp(-lo / 4) - np.exp(-hi / 4))
           + 0.5 * lo * np.exp(-(lo + hi) / 4))
    return out if out.ndim else float(out)


def peak_largest_cdf(v_peak, w):
    """Joint limit CDF of the scaled peak and the scaled largest part on one side."""
    a0 = np.exp(-np.clip(np.asarray(v_peak, dtype=float), -700, 700))
    aw = np.exp(-np.clip(np.asarray(w, dtype=float), -700, 700))
    inner = np.exp(-aw / 2) + 2 * np.exp(-aw / 4) * (np.exp(-a0 / 4) - np.exp(-aw / 4))
    out = np.where(aw <= a0, np.exp(-a0 / 2), inner)
    return out if out.ndim else float(out)


def half_log_gamma_cdf(v):
    """erfc(e^(-v)/sqrt 2): law of -log|Z| for standard normal Z.

    sum_{k<=K} E_k/(2k-1) - log(2K-1)/2 converges to this law when the E_k
    are independent unit exponentials.
    """
    from scipy.special import erfc

    v = np.asarray(v, dtype=float)
    out = erfc(np.exp(-np.clip(v, -700, 700)) / math.sqrt(2.0))
    return out if out.ndim else float(out)


def odd_tail_product(n, v):
    """prod over odd j > B sqrt(n) (v + log(B sqrt n)) of (1 - e^(-j/(B sqrt n))).

    Factors closer to 1 than 1e-16 are dropped. Tends to e^(-e^(-v)/2).
    """
    if n <= 1:
        raise UsageError("n must exceed 1")
    if v < -math.log(n) / 8:
        raise UsageError("v must be at least -log(n)/8")
    s = B_CONST * math.sqrt(n)
    y = s * (v + math.log(s))
    j0 = math.floor(y) + 1
    if j0 % 2 == 0:
        j0 += 1
    # e^(-j/s) < 1e-16 once j > j0 + 37 s
    j1 = int(j0 + 37.0 * s) + 2
    total = 0.0
    chunk = 1_000_000
    for lo in range(j0, j1 + 1, 2 * chunk):
        j = np.arange(lo, min(lo + 2 * chunk, j1 + 1), 2, dtype=float)
        total += float(np.log1p(-np.exp(-j / s)).sum())
    return math.exp(total)


@dataclass(frozen=True)
class LimitLaw:
    """An evaluable CDF.

    kind: ``sech``, ``gumbel_half``, ``exp``, ``geometric`` (parameter c;
    P(X <= v) = 1 - e^(-c(v+1)/B) on v = 0, 1, ...), ``largest_part`` or
    ``half_log_gamma``.
    """

    kind: str
    param: float | None = None

    _KINDS = ("sech", "gumbel_half", "exp", "geometric", "largest_part", "half_log_gamma")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise UsageError(f"unknown law {self.kind!r}")
        if self.kind == "geometric" and (self.param is None or self.param <= 0):
            raise UsageError("geometric law needs c > 0")

    @property
    def discrete(self):
        return self.kind == "geometric"

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "sech":
            out = sech_cdf(x)
        elif self.kind == "gumbel_half":
            out = gumbel_half_cdf(x)
        elif self.kind == "exp":
            out = np.where(x > 0, -np.expm1(-np.maximum(x, 0.0)), 0.0)
        elif self.kind == "largest_part":
            out = largest_part_cdf(x)
        elif self.kind == "half_log_gamma":
            out = half_log_gamma_cdf(x)
        else:
            f = np.floor(x)
            out = np.where(f >= 0, -np.expm1(-self.param * (np.maximum(f, 0) + 1) / B_CONST), 0.0)
        out = np.asarray(out, dtype=float)
        return out if out.ndim else float(out)

    def atoms(self, upto):
        """Support points 0..upto for the discrete law."""
        if not self.discrete:
            return np.empty(0)
        return np.arange(0, max(int(math.floor(upto)), 0) + 1, dtype=float)

    def sample(self, rng, size):
        """Draws from the law (used for self-tests of the KS machinery)."""
        u = rng.random(size)
        if self.kind == "sech":
            return 2.0 / math.pi * np.log(np.tan(math.pi * u / 2))
        if self.kind == "gumbel_half":
            return -np.log(-2.0 * np.log(u))
        if self.kind == "exp":
            return -np.log1p(-u)
        if self.kind == "geometric":
            lq = -self.param / B_CONST
            return np.floor(np.log1p(-u) / lq)
        raise UsageError(f"sampling not provided for {self.kind}")
