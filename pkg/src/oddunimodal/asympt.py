"""Asymptotic formulas: Rademacher's series, the moment series and saddle points.

Everything multiplied by the exponential growth e^(pi sqrt(2n/3)) is
accumulated in log space or against a scaled Bessel function, so the
evaluators are usable well past the float64 overflow point.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .errors import UsageError
from .modular import kloosterman_A_terms, kloosterman_odd
from .special import B_CONST, bessel_i_over_power, cot_deriv, euler_poly, kappa_coefficient

__all__ = [
    "rademacher_p",
    "RademacherResult",
    "ou_main_term",
    "log_ou_main_term",
    "QuadratureSpec",
    "MomentAsymptotic",
    "moment_asymptotic",
    "moment_leading",
    "log_moment_leading",
    "SaddleFunction",
    "saddle_function",
    "saddle_ou_m",
    "log_saddle_ou_m",
    "peak_density",
    "peak_lattice_r",
    "asymptotic_csv",
]

IMAG_TOL = 1e-6


# ---------------------------------------------------------------------------
# partitions

@dataclass(frozen=True)
class RademacherResult:
    n: int
    k_max: int
    value: mpmath.mpf
    rounded: int

    @property
    def residual(self):
        return float(abs(self.value - self.rounded))


def _i32_closed(x):
    """I_(3/2)(x) = sqrt(2/(pi x)) (cosh x - sinh x / x), in mpmath."""
    return mpmath.sqrt(2 / (mpmath.pi * x)) * (mpmath.cosh(x) - mpmath.sinh(x) / x)


def rademacher_p(n, k_max=None):
    """Partial sum of Rademacher's series for p(n), and its nearest integer.

    Runs in mpmath at a precision chosen from the size of p(n); the
    Kloosterman phases are exact integers, exponentiated at that precision.
    """
    n = int(n)
    if n < 1:
        raise UsageError("n must be >= 1")
    if k_max is None:
        k_max = math.isqrt(n - 1) + 1 + 5
    # log10 p(n) ~ pi sqrt(2n/3) / ln 10
    digits = int(math.pi * math.sqrt(2 * n / 3) / math.log(10)) + 25
    with mpmath.workdps(digits):
        m = mpmath.mpf(24 * n - 1)
        root = mpmath.sqrt(m)
        total = mpmath.mpf(0)
        for k in range(1, k_max + 1):
            a = mpmath.mpf(0)
            for sign, t in kloosterman_A_terms(k, n):
                a += sign * mpmath.cospi(mpmath.mpf(t) / (12 * k))
            if a == 0:
                continue
            total += a / k * _i32_closed(mpmath.pi * root / (6 * k))
        value = 2 * mpmath.pi / m ** mpmath.mpf(0.75) * total
        rounded = int(mpmath.nint(value))
    return RademacherResult(n, k_max, value, rounded)


# ---------------------------------------------------------------------------
# leading terms

def log_ou_main_term(n):
    """log of e^(pi sqrt(2n/3)) / (2^(13/4) 3^(1/4) n^(3/4))."""
    if n < 1:
        raise UsageError("n must be >= 1")
    return (math.pi * math.sqrt(2 * n / 3) - 3.25 * math.log(2)
            - 0.25 * math.log(3) - 0.75 * math.log(n))


def ou_main_term(n):
    return math.exp(log_ou_main_term(n))


def log_moment_leading(n, ell):
    """log of the leading term of the 2*ell-th rank moment.

    (-6n)^ell E_(2 ell)(1/2) ou_main_term(n); the product is positive.
    """
    if ell < 0 or int(ell) != ell:
        raise UsageError("ell must be a non-negative integer")
    c = (-6) ** ell * euler_poly(2 * ell, Fraction(1, 2))
    return math.log(float(c)) + ell * math.log(n) + log_ou_main_term(n)


def moment_leading(n, ell):
    return math.exp(log_moment_leading(n, ell))


# ---------------------------------------------------------------------------
# the Kloosterman-Bessel moment series

@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss-Legendre rule on [-1, 1] for the x-integral."""

    rule: str = "gauss_legendre"
    nodes: int = 64
    endpoint_mode: str = "cancellation_aware"

    def __post_init__(self):
        if self.rule != "gauss_legendre":
            raise UsageError("only gauss_legendre is provided")
        if self.endpoint_mode != "cancellation_aware":
            raise UsageError("only cancellation_aware endpoint handling is provided")
        if self.nodes < 8:
            raise UsageError("need at least 8 nodes")

    def points(self):
        return _leggauss(self.nodes)


@lru_cache(maxsize=16)
def _leggauss(nodes):
    x, w = np.polynomial.legendre.leggauss(nodes)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


@dataclass(frozen=True)
class MomentAsymptotic:
    """Value of the moment series with its reality diagnostics.

    ``imag_ratio`` is |Im|/|Re| of the whole sum; ``tail_imag_ratio`` is the
    same ratio for the k >= 3 part alone (nan when k_max = 1), which is not
    swamped by the dominant k = 1 term.
    """

    n: int
    ell: int
    k_max: int
    variant: str
    log_value: float
    value: float
    imag_ratio: float
    tail_imag_ratio: float


@lru_cache(maxsize=4096)
def _kloosterman_odd_cached(k, n_mod_k, v, shift):
    return kloosterman_odd(k, n_mod_k, v, shift)


_VARIANTS = {
    # 4n + 4*shift, Kloosterman shift, extra factor
    "printed": (Fraction(1, 4), 1.0),
    "corrected": (Fraction(1, 3), math.sqrt(2.0)),
}


def default_k_max(n):
    """Largest odd k <= floor(sqrt n)."""
    r = math.isqrt(n)
    return r if r % 2 else r - 1


def moment_asymptotic(n, ell, k_max=None, quad=None, variant="printed"):
    """Kloosterman-Bessel series for the ell-th rank moment of size n.

    Sum over j <= ell/2, a + b = j, odd k <= k_max and 0 <= v < 2k of

        C(ell, 2j) (-1/4)^j kappa(a, b) (6M)^(a/2+b) k^(a-2) K(k, n, v)
        * int_{-1}^{1} C_(ell-2j)((x/(2 sqrt 3) - v - 1/2)/(2k))
              I_nu(Y sqrt(1-x^2)) / (1-x^2)^(nu/2) dx,

    nu = a + 2b - 1/2, Y = pi sqrt(M)/(sqrt(6) k), times
    pi/(2^(15/4) 3^(3/4) M^(1/4)). ``variant="printed"`` uses M = 4n+1 and
    the phase shift n + 1/4. ``variant="corrected"`` uses M = 4n + 4/3,
    the shift n + 1/3 and an extra factor sqrt(2); it matches the exact
    moments, while the printed variant tends to 1/sqrt(2) of them.

    The Bessel quotient is evaluated as Y^nu * (I_nu(t)/t^nu) at t = Y sqrt(1-x^2),
    so the endpoint 0/0 never arises.
    """
    n = int(n)
    if n < 1:
        raise UsageError("n must be >= 1")
    if ell < 0 or int(ell) != ell or ell % 2:
        raise UsageError("ell must be a non-negative even integer (odd moments vanish)")
    if variant not in _VARIANTS:
        raise UsageError(f"variant must be one of {sorted(_VARIANTS)}")
    if k_max is None:
        k_max = default_k_max(n)
    if k_max < 1 or k_max > max(1, math.isqrt(n)):
        raise UsageError("need 1 <= k_max <= floor(sqrt n)")
    quad = quad or QuadratureSpec()
    shift, extra = _VARIANTS[variant]
    M = 4 * n + 4 * float(shift)
    x, w = quad.points()
    root = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    y1 = math.pi * math.sqrt(M) / math.sqrt(6.0)

    head = 0j
    tail = 0j
    for k in range(1, k_max + 1, 2):
        yk = y1 / k
        t = yk * root
        # e^(t - y1) keeps the k = 1 peak at O(1)
        damp = np.exp(t - y1)
        kv = [_kloosterman_odd_cached(k, n % k, v, shift) for v in range(2 * k)]
        cots = {}
        for jj in range(ell // 2 + 1):
            order = ell - 2 * jj
            for v in range(2 * k):
                cots[(order, v)] = cot_deriv(order, (x / (2 * math.sqrt(3)) - v - 0.5) / (2 * k))
        part = 0j
        for jj in range(ell // 2 + 1):
            order = ell - 2 * jj
            for a in range(jj + 1):
                b = jj - a
                nu = a + 2 * b - 0.5
                bes = bessel_i_over_power(nu, t, scaled=True) * damp
                coef = (math.comb(ell, 2 * jj) * (-0.25) ** jj * kappa_coefficient(a, b)
                        * (6 * M) ** (a / 2 + b) * float(k) ** (a - 2) * yk ** nu)
                for v in range(2 * k):
                    integral = complex(np.dot(w, cots[(order, v)] * bes))
                    part += coef * kv[v] * integral
        if k == 1:
            head += part
        else:
            tail += part
    total = head + tail
    log_pref = (math.log(math.pi) - 3.75 * math.log(2) - 0.75 * math.log(3)
                - 0.25 * math.log(M) + math.log(extra) + y1)
    re = total.real
    imag_ratio = abs(total.imag) / abs(re) if re else math.inf
    tail_ratio = abs(tail.imag) / abs(tail) if k_max >= 3 and abs(tail) > 0 else math.nan
    if imag_ratio >= IMAG_TOL:
        warnings.warn(f"imaginary residue {imag_ratio:.3g} of the real part was discarded",
                      RuntimeWarning, stacklevel=2)
    if re <= 0:
        log_value = math.nan
        value = re * math.exp(min(log_pref, 700.0))
    else:
        log_value = math.log(re) + log_pref
        value = math.exp(log_value) if log_value < 709 else math.inf
    return MomentAsymptotic(n, int(ell), k_max, variant, log_value, value, imag_ratio, tail_ratio)


# ---------------------------------------------------------------------------
# saddle point for the number of sequences with a given peak

@dataclass(frozen=True)
class SaddleFunction:
    """f(0), f'(0), f''(0) at q = e^(-1/(B sqrt n)) for peak 2m+1."""

    n: int
    m: int
    f0: float
    f1: float
    f2: float

    def __post_init__(self):
        if not self.f2 > 0:
            raise UsageError("f''(0) must be positive")


def saddle_function(n, m):
    """Direct summation over the odd parts 1, 3, ..., 2m+1."""
    n, m = int(n), int(m)
    if not 1 <= 2 * m + 1 <= n:
        raise UsageError("need 1 <= 2m+1 <= n")
    s = B_CONST * math.sqrt(n)
    j = np.arange(1, 2 * m + 2, 2, dtype=float)
    e = np.exp(-j / s)
    one_minus = -np.expm1(-j / s)
    f0 = (n - (2 * m + 1)) / s - 2.0 * float(np.log1p(-e).sum())
    f1 = (n - (2 * m + 1)) - 2.0 * float((j * e / one_minus).sum())
    f2 = 2.0 * float((j * j * e / one_minus ** 2).sum())
    return SaddleFunction(n, m, f0, f1, f2)


def log_saddle_ou_m(n, m):
    """log of e^(f(0)) / sqrt(2 pi f''(0))."""
    f = saddle_function(n, m)
    return f.f0 - 0.5 * math.log(2 * math.pi * f.f2)


def saddle_ou_m(n, m):
    """Saddle-point estimate of the number of size-n sequences with peak 2m+1."""
    lv = log_saddle_ou_m(n, m)
    return math.exp(lv) if lv < 709 else math.inf


def peak_lattice_r(n, m):
    """Scaled peak r = (2m+1 - s log(2s))/s with s = B sqrt n."""
    s = B_CONST * math.sqrt(n)
    return (2 * np.asarray(m, dtype=float) + 1 - s * math.log(2 * s)) / s


def peak_density(n, m):
    """(1/s) e^(-r - e^(-r)/2): limiting probability of peak 2m+1, vectorized in m."""
    s = B_CONST * math.sqrt(n)
    r = peak_lattice_r(n, m)
    out = np.exp(-r - 0.5 * np.exp(-r)) / s
    return out if np.ndim(out) else float(out)


def asymptotic_csv(n_list, ells, variant="printed", k_max=None):
    """CSV rows n,ell,exact,asymptotic,ratio for the rank moments."""
    from .exact import rank_moments

    n_top = max(n_list)
    ell_top = max(ells)
    mom = rank_moments(n_top, ell_top)
    lines = ["n,ell,exact,asymptotic,ratio"]
    for n in n_list:
        for ell in ells:
            exact = mom[ell][n]
            res = moment_asymptotic(n, ell, k_max=k_max, variant=variant)
            ratio = math.exp(res.log_value - _log_int(exact)) if exact > 0 else math.nan
            lines.append(f"{n},{ell},{exact},{res.value!r},{ratio!r}")
    return "\n".join(lines) + "\n"


def _log_int(x):
    x = int(x)
    b = x.bit_length()
    if b < 1000:
        return math.log(x)
    return math.log(x >> (b - 60)) + (b - 60) * math.log(2)
