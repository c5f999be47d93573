import cmath
import math
import random
from fractions import Fraction
from math import gcd

import numpy as np
import pytest
from sympy.functions.combinatorial.numbers import jacobi_symbol, totient

from oddunimodal import exact, modular
from oddunimodal.errors import BoundaryError, ResourceError, UsageError

PHASE = cmath.exp(1j * math.pi / 4)


# ---------------------------------------------------------------------------
# exact arithmetic

def test_neg_inverse_mod():
    assert modular.neg_inverse_mod(1, 5) == 4
    assert modular.neg_inverse_mod(0, 1) == 0
    for k in range(2, 40):
        for h in range(k):
            if gcd(h, k) == 1:
                assert (-h * modular.neg_inverse_mod(h, k)) % k == 1
    with pytest.raises(UsageError):
        modular.neg_inverse_mod(2, 4)


def test_kronecker_against_jacobi():
    for n in range(1, 80, 2):
        for a in range(-30, 30):
            assert modular.kronecker(a, n) == jacobi_symbol(a % n, n)
    assert modular.kronecker(5, 2) == -1 and modular.kronecker(7, 2) == 1
    assert modular.kronecker(0, 1) == modular.kronecker(0, -1) == 1


def test_frames_validate_determinant():
    with pytest.raises(UsageError):
        modular.FareyFrame(1, 2, 1, (1, 1, 1, 1))
    for k in range(1, 13):
        for h in range(k):
            if gcd(h, k) != 1:
                continue
            a, b, c, d = modular.farey_frame(h, k).matrix
            assert a * d - b * c == 1
            if k % 2:
                a, b, c, d = modular.farey_frame_double(h, k).matrix
            else:
                a, b, c, d = modular.farey_frame_half(h, k).matrix
            assert a * d - b * c == 1
    with pytest.raises(UsageError):
        modular.farey_frame_double(1, 4)
    with pytest.raises(UsageError):
        modular.farey_frame_half(1, 3)


def test_multiplier_generators():
    assert modular.eta_multiplier((0, -1, 1, 0)) == pytest.approx(cmath.exp(-1j * math.pi / 4))
    assert modular.eta_multiplier((1, 1, 0, 1)) == pytest.approx(cmath.exp(1j * math.pi / 12))
    with pytest.raises(UsageError):
        modular.eta_multiplier((1, 1, 1, 1))


def _mat_mul(x, y):
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _eta_law_residual(m):
    # eta(M tau) = chi(M) (c tau + d)^(1/2) eta(tau), at a point where both sides are well inside H
    a, b, c, d = m
    tau = complex(-d / c + 0.03 / c, 1.0 / c)
    mt = (a * tau + b) / (c * tau + d)
    lhs = modular.eval_eta(mt)
    rhs = modular.eta_multiplier(m) * (c * tau + d) ** 0.5 * modular.eval_eta(tau)
    return abs(lhs - rhs) / abs(lhs)


def test_multiplier_random_words():
    rng = random.Random(3)
    gens = [(0, -1, 1, 0), (1, 1, 0, 1), (1, -1, 0, 1)]
    checked = 0
    for _ in range(500):
        m = (1, 0, 0, 1)
        for _ in range(rng.randint(1, 12)):
            m = _mat_mul(m, rng.choice(gens))
        assert abs(abs(modular.eta_multiplier(m)) - 1) < 1e-14
        if 0 < m[2] <= 12:
            assert _eta_law_residual(m) < 1e-10
            checked += 1
    assert checked > 50


def test_multiplier_transformation_law():
    for c in range(1, 13):
        for d in range(-15, 16):
            if gcd(c, d) != 1:
                continue
            b = -pow(c, -1, abs(d)) if abs(d) > 1 else 0
            a = (1 + b * c) // d if d else 1
            if d == 0:
                a, b = 0, -1
            m = (a, b, c, d)
            assert a * d - b * c == 1
            assert _eta_law_residual(m) < 1e-10


def _direct_A(k, n):
    total = 0j
    for h in range(k):
        if gcd(h, k) != 1:
            continue
        f = modular.farey_frame(h, k)
        total += modular.eta_multiplier(f.matrix) * cmath.exp(
            -1j * math.pi * ((24 * n - 1) * h + f.h_inv_neg) / (12 * k))
    return PHASE * total


def _direct_odd(k, n, v):
    total = 0j
    for h in range(k):
        if gcd(h, k) != 1:
            continue
        f1, f2 = modular.farey_frame(h, k), modular.farey_frame_double(h, k)
        chi = modular.eta_multiplier(f1.matrix) ** 2 / modular.eta_multiplier(f2.matrix) ** 5
        a1, a2 = f1.h_inv_neg, f2.h_inv_neg
        total += chi * cmath.exp(-2j * math.pi * (n + 0.25) * h / k) * cmath.exp(
            1j * math.pi * (12 * v * (v + 1) * a2 + 5 * a2 - 2 * a1) / (12 * k))
    return PHASE * (-1) ** v * total


def _direct_even(k, n, v):
    total = 0j
    for h in range(k):
        if gcd(h, k) != 1:
            continue
        f1, f3 = modular.farey_frame(h, k), modular.farey_frame_half(h, k)
        chi = modular.eta_multiplier(f1.matrix) ** 2 / modular.eta_multiplier(f3.matrix) ** 5
        a1, a3 = f1.h_inv_neg, f3.h_inv_neg
        total += chi * cmath.exp(-2j * math.pi * (n + 0.25) * h / k) * cmath.exp(
            1j * math.pi * (12 * v * (v + 1) * a3 + 5 * a3 - a1) / (6 * k))
    return PHASE * (-1) ** v * total


def test_kloosterman_A():
    for n in range(10):
        assert modular.kloosterman_A(1, n) == pytest.approx(1)
    for k in range(1, 25):
        for n in (0, 1, 7, 100):
            val = modular.kloosterman_A(k, n)
            assert abs(val - _direct_A(k, n)) < 1e-11
            assert abs(val) <= totient(k) + 1e-9
            # A_k(n) is real
            assert abs(val.imag) < 1e-10


def test_kloosterman_odd_and_even():
    for n in range(5):
        for v in (0, 1):
            assert modular.kloosterman_odd(1, n, v) == pytest.approx((-1) ** (v + 1))
    for k in range(1, 16, 2):
        for v in range(2 * k):
            for n in (0, 3, 11):
                val = modular.kloosterman_odd(k, n, v)
                assert abs(val - _direct_odd(k, n, v)) < 1e-10
                assert abs(val) <= totient(k) + 1e-9
    for k in range(2, 17, 2):
        for v in range(k):
            for n in (0, 3, 11):
                val = modular.kloosterman_even(k, n, v)
                assert abs(val - _direct_even(k, n, v)) < 1e-10
                assert abs(val) <= totient(k) + 1e-9


def test_kloosterman_period_in_n():
    rng = random.Random(7)
    for _ in range(100):
        k = rng.randint(1, 30)
        n = rng.randint(0, 500)
        if k % 2:
            v = rng.randint(0, 2 * k - 1)
            assert abs(modular.kloosterman_odd(k, n, v) - modular.kloosterman_odd(k, n + k, v)) < 1e-10
        else:
            v = rng.randint(0, k - 1)
            assert abs(modular.kloosterman_even(k, n, v) - modular.kloosterman_even(k, n + k, v)) < 1e-10


def test_kloosterman_parity_errors():
    with pytest.raises(UsageError):
        modular.kloosterman_odd(4, 0, 0)
    with pytest.raises(UsageError):
        modular.kloosterman_even(3, 0, 0)
    with pytest.raises(UsageError):
        modular.kloosterman_odd(3, 0, 6)


# ---------------------------------------------------------------------------
# evaluation

def test_eta_translation():
    for tau in (0.1 + 0.5j, -0.3 + 0.9j, 0.45 + 0.06j):
        assert abs(modular.eval_eta(tau + 1) - cmath.exp(1j * math.pi / 12) * modular.eval_eta(tau)) < 1e-12


def test_theta_series_and_product():
    for u in np.linspace(-0.4, 0.4, 5):
        for tau in (0.1 + 0.2j, -0.3 + 0.5j, 0.0 + 1.0j, 0.4 + 0.08j, 0.25 + 2.0j):
            s = modular.eval_theta(u + 0.05j, tau)
            p = modular.eval_theta_product(u + 0.05j, tau)
            assert abs(s - p) < 1e-10
    for tau in (0.2 + 0.3j, 1j, -0.1 + 0.07j):
        assert abs(modular.eval_theta(0.0, tau)) < 1e-14
        assert abs(modular.eval_theta(0.3, tau) + modular.eval_theta(-0.3, tau)) < 1e-12


def test_crank_coefficients_by_dft():
    r, nq, nz = 0.3, 64, 64
    t = -math.log(r) / (2 * math.pi)
    vals = np.array([[modular.eval_crank_gf(j / nz, a / nq + 1j * t) for a in range(nq)]
                     for j in range(nz)])
    coef = np.fft.fft2(vals) / (nq * nz)
    for n in range(0, 9):
        _, crank = exact.rank_crank_tables(n)
        for m in range(-n - 1, n + 2):
            # coefficient of zeta^m q^n sits at fft index (m, n) modulo the grid
            got = coef[m % nz, n % nq] / r ** n
            assert abs(got - crank.get(m, 0)) < 1e-6


def test_psi_boundary_and_resources():
    with pytest.raises(BoundaryError):
        modular.eval_psi(-0.5, 1j)
    with pytest.raises(ResourceError):
        modular.eval_eta(0.3 + 0.01j)
    with pytest.raises(UsageError):
        modular.ModPoint(0.1, 0.3 - 0.1j)
    pt = modular.ModPoint(0.25, 1j)
    assert pt.zeta == pytest.approx(1j)


def test_psi_real_u_sign():
    # for real u with |Im(u/tau)| < 1/2, sgn(m + Im(u/tau)) = sgn(m)
    tau = 0.2 + 0.6j
    u = 0.1
    m = np.arange(-40, 40) + 0.5
    direct = np.sum(np.sign(m) * np.exp(1j * math.pi * m * m * tau + 2j * math.pi * m * (u + 0.5)))
    assert abs(modular.eval_psi(u, tau) - direct) < 1e-12


def test_theta_tail_constant_term():
    for u in (0.1, 0.37):
        z = cmath.exp(2j * math.pi * u)
        assert abs(modular.eval_ou_theta_tail(u, 0.2 + 4j) + z) < 1e-9


def test_series_side_matches_counts():
    tau = 0.13 + 0.3j
    q = cmath.exp(2j * math.pi * tau)
    counts = exact.ou_counts(40)
    direct = sum(int(counts[n]) * q ** n for n in range(41))
    assert abs(modular.eval_ou_series(0.0, tau, 40) - direct) < 1e-12


def test_decomposition_coefficients_at_zero():
    # q^(-1/3) times the modular part plus the theta tail, read off by DFT, gives ou(n)
    nq, t = 64, 0.1
    r = math.exp(-2 * math.pi * t)
    vals = []
    for a in range(nq):
        tau = a / nq + 1j * t
        vals.append(cmath.exp(-2j * math.pi * tau / 3) * modular.eval_ou_modular_part(0.0, tau)
                    + modular.eval_ou_theta_tail(0.0, tau))
    coef = np.fft.fft(vals) / nq
    counts = exact.ou_counts(40)
    for n in range(41):
        assert abs(coef[n] / r ** n - int(counts[n])) < 1e-3


def test_decomposition_residuals():
    for u, tau in modular.DEFAULT_OU_POINTS:
        fixed = modular.verify_ou_decomposition(u, tau, 40, Fraction(-1, 3))
        assert fixed["pass"] and fixed["residual"] < 1e-10
        printed = modular.verify_ou_decomposition(u, tau, 40)
        assert printed["identity"] == "ou_decomposition[q^-1/4]"
        assert not printed["pass"]


@pytest.mark.parametrize("h,k", [(0, 1), (1, 3), (1, 2), (2, 5), (5, 6)])
def test_transformation_laws(h, k):
    entries = modular.verify_jacobi_transforms(modular.farey_frame(h, k), 1.0, 0.1)
    by_name = {e["identity"]: e for e in entries}
    for name, e in by_name.items():
        holds = not (name.startswith("cstar") and "[" not in name) and name != "theta_quasi_period"
        assert e["pass"] == holds, (name, e["residual"])
    parity = "odd" if k % 2 else "even"
    assert f"theta_double_{parity}" in by_name and f"eta_double_{parity}" in by_name


def test_transformation_input_checks():
    fr = modular.farey_frame(1, 3)
    with pytest.raises(UsageError):
        modular.verify_jacobi_transforms(fr, -1.0, 0.1)
    with pytest.raises(ResourceError):
        modular.verify_jacobi_transforms(fr, 50.0, 0.1)


def test_grid_report_shape():
    entries = modular.jacobi_grid_report(k_max=2, z_grid=(1.0,), u_grid=(0.1,), ou_points=((0.1, 0.05 + 0.35j),))
    assert all({"identity", "parameters", "residual", "pass", "mandatory"} <= set(e) for e in entries)
    assert all(e["pass"] for e in entries if not e["mandatory"])
