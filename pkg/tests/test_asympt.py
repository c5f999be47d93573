import math
import warnings

import mpmath
import numpy as np
import pytest

from oddunimodal import asympt, exact
from oddunimodal.errors import UsageError


def test_rademacher_small():
    assert asympt.rademacher_p(5).rounded == 7
    r = asympt.rademacher_p(100)
    assert r.rounded == 190569292
    assert r.residual < 0.01
    assert asympt.rademacher_p(100, k_max=80).residual < r.residual


def test_rademacher_many():
    p = exact.partition_count(300)
    assert all(asympt.rademacher_p(n).rounded == p[n] for n in range(1, 301, 3))


def test_main_term():
    assert asympt.ou_main_term(1) == pytest.approx(1.038, abs=5e-4)
    direct = math.exp(math.pi * math.sqrt(2 * 50 / 3)) / (2 ** 3.25 * 3 ** 0.25 * 50 ** 0.75)
    assert asympt.ou_main_term(50) == pytest.approx(direct, rel=1e-13)


def test_main_term_ratio_trend():
    ou = exact.ou_counts(2000)
    dev = [abs(float(ou[n]) / asympt.ou_main_term(n) - 1) for n in (250, 500, 1000, 2000)]
    assert all(a > b for a, b in zip(dev, dev[1:]))


def test_moment_leading():
    for n in (10, 100, 1000):
        main = asympt.ou_main_term(n)
        assert asympt.moment_leading(n, 0) == pytest.approx(main, rel=1e-13)
        assert asympt.moment_leading(n, 1) == pytest.approx(1.5 * n * main, rel=1e-13)
        assert asympt.moment_leading(n, 2) == pytest.approx(45 / 4 * n * n * main, rel=1e-13)


def _k1_term(n, ell):
    """The k = 1 part of the moment series, evaluated with mpmath quadrature."""
    mpmath.mp.dps = 30
    M = 4 * n + 1
    Y = mpmath.pi * mpmath.sqrt(M) / mpmath.sqrt(6)
    s3 = 2 * mpmath.sqrt(3)
    kappa = {(0, 0): 1, (1, 0): 1 / mpmath.pi, (0, 1): mpmath.mpf(-1) / 4}

    def cot_deriv(j, w):
        return mpmath.diff(lambda t: mpmath.cot(mpmath.pi * t), w, j) / (2j * mpmath.pi) ** j

    total = mpmath.mpc(0)
    for jj in range(ell // 2 + 1):
        order = ell - 2 * jj
        for a in range(jj + 1):
            b = jj - a
            nu = a + 2 * b - mpmath.mpf(1) / 2
            coef = (math.comb(ell, 2 * jj) * mpmath.mpf(-0.25) ** jj * kappa[(a, b)]
                    * (6 * M) ** (mpmath.mpf(a) / 2 + b))
            for v in (0, 1):
                sign = (-1) ** (v + 1)

                def f(x):
                    r = mpmath.sqrt(1 - x * x)
                    return (cot_deriv(order, (x / s3 - v - mpmath.mpf(1) / 2) / 2)
                            * mpmath.besseli(nu, Y * r) / r ** nu)

                total += sign * coef * mpmath.quad(f, [-1, 0, 1])
    pref = mpmath.pi / (2 ** mpmath.mpf(3.75) * 3 ** mpmath.mpf(0.75) * M ** mpmath.mpf(0.25))
    return pref * total


@pytest.mark.parametrize("n,ell", [(40, 0), (40, 2), (120, 2)])
def test_series_k1_against_mpmath(n, ell):
    res = asympt.moment_asymptotic(n, ell, k_max=1)
    ref = _k1_term(n, ell)
    assert res.value == pytest.approx(float(ref.real), rel=1e-9)
    assert abs(ref.imag) < 1e-12 * abs(ref.real)


def test_series_trend_and_reality():
    mom = exact.rank_moments(1000, 2)
    for ell in (0, 2):
        errs = []
        for n in (200, 500, 1000):
            res = asympt.moment_asymptotic(n, ell)
            assert res.imag_ratio < 1e-6
            errs.append(abs(res.value / float(mom[ell][n]) - 1))
        assert all(a > b for a, b in zip(errs, errs[1:]))


def test_corrected_variant():
    mom = exact.rank_moments(500, 2)
    for ell in (0, 2):
        res = asympt.moment_asymptotic(500, ell, variant="corrected")
        assert res.value / float(mom[ell][500]) == pytest.approx(1, abs=0.02)
        assert res.tail_imag_ratio < 1e-9


def test_quadrature_converged():
    a = asympt.moment_asymptotic(300, 2, quad=asympt.QuadratureSpec(nodes=64))
    b = asympt.moment_asymptotic(300, 2, quad=asympt.QuadratureSpec(nodes=128))
    assert a.value == pytest.approx(b.value, rel=1e-10)


def test_deterministic():
    assert asympt.moment_asymptotic(400, 2) == asympt.moment_asymptotic(400, 2)


def test_errors():
    with pytest.raises(UsageError):
        asympt.moment_asymptotic(100, 1)
    with pytest.raises(UsageError):
        asympt.moment_asymptotic(100, 0, k_max=11)
    with pytest.raises(UsageError):
        asympt.moment_asymptotic(100, 0, variant="other")
    with pytest.raises(UsageError):
        asympt.QuadratureSpec(nodes=4)
    with pytest.raises(UsageError):
        asympt.rademacher_p(0)


def test_default_k_max():
    assert asympt.default_k_max(200) == 13
    assert asympt.default_k_max(1000) == 31
    assert asympt.default_k_max(1) == 1


def test_no_warning_in_normal_use():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        asympt.moment_asymptotic(200, 0)


def test_saddle_derivatives():
    n, m = 5000, 60
    s = math.sqrt(6) / math.pi * math.sqrt(n)
    mpmath.mp.dps = 30

    def f(x):
        return (n - 2 * m - 1) * x - 2 * sum(mpmath.log(1 - mpmath.exp(-j * x)) for j in range(1, 2 * m + 2, 2))

    sf = asympt.saddle_function(n, m)
    x0 = mpmath.mpf(1) / mpmath.mpf(s)
    assert sf.f0 == pytest.approx(float(f(x0)), rel=1e-12)
    assert sf.f1 == pytest.approx(float(mpmath.diff(f, x0, 1)), rel=1e-9, abs=1e-6)
    assert sf.f2 == pytest.approx(float(mpmath.diff(f, x0, 2)), rel=1e-9)


def test_saddle_against_exact():
    n = 1000
    pc = exact.peak_counts(n)
    for m in range((n - 1) // 2 + 1):
        if abs(asympt.peak_lattice_r(n, m)) <= 1:
            assert asympt.saddle_ou_m(n, m) / float(pc[m]) == pytest.approx(1, abs=0.15)


def test_saddle_curvature_trend():
    ratios = []
    for n in (10**3, 10**4, 10**5):
        s = math.sqrt(6) / math.pi * math.sqrt(n)
        m = int(round((s * math.log(2 * s) - 1) / 2))
        ratios.append(asympt.saddle_function(n, m).f2 / (2 * math.sqrt(6) / math.pi * n ** 1.5))
    assert all(abs(a - 1) > abs(b - 1) for a, b in zip(ratios, ratios[1:]))


def test_peak_density_mass():
    n = 10**6
    total = float(np.sum(asympt.peak_density(n, np.arange((n - 1) // 2 + 1))))
    assert total == pytest.approx(1, abs=1e-3)
    assert isinstance(asympt.peak_density(n, 10), float)


def test_saddle_domain():
    with pytest.raises(UsageError):
        asympt.saddle_function(10, 5)


def test_csv():
    text = asympt.asymptotic_csv([100, 200], [0, 2], k_max=1)
    rows = text.strip().split("\n")
    assert rows[0] == "n,ell,exact,asymptotic,ratio"
    assert len(rows) == 5
    assert rows[1].startswith("100,0," + str(exact.ou_counts(100)[100]) + ",")
