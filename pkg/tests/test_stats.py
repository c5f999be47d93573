import math

import numpy as np
import pytest
from scipy.stats import kstest

from oddunimodal import special, stats
from oddunimodal.errors import UsageError


def test_ks_self_sample():
    law = special.LimitLaw("sech")
    x = law.sample(np.random.default_rng(0), 100_000)
    assert stats.ks_distance(x, law) < 0.01
    assert stats.ks_distance(x, law) == pytest.approx(kstest(x, special.sech_cdf).statistic, abs=1e-12)


def test_ks_degenerate_samples():
    law = special.LimitLaw("gumbel_half")
    med = -math.log(2 * math.log(2))
    assert stats.ks_distance(np.full(100, med), law) == pytest.approx(0.5)
    assert stats.ks_distance([-1e300], law) == pytest.approx(1.0)
    assert stats.ks_distance([-np.inf, -np.inf], law) == 1.0
    with pytest.raises(UsageError):
        stats.ks_distance([], law)


def test_ks_discrete_law():
    law = special.LimitLaw("geometric", 0.7)
    rng = np.random.default_rng(1)
    x = law.sample(rng, 50_000)
    d = stats.ks_distance(x, law)
    assert d < 0.01
    # brute force: compare the two step functions on a fine grid covering every jump
    grid = np.concatenate([np.arange(0, x.max() + 2), np.arange(0, x.max() + 2) - 1e-9])
    xs = np.sort(x)
    emp = np.searchsorted(xs, grid, side="right") / xs.size
    assert d == pytest.approx(np.abs(emp - law.cdf(grid)).max(), abs=1e-12)


def test_ks_weighted_matches_expanded():
    vals = np.array([0.3, -1.0, 2.0, 0.3])
    w = np.array([2, 1, 3, 1])
    expanded = np.repeat(vals, w)
    law = special.LimitLaw("sech")
    assert stats.ks_distance_weighted(vals, w, law) == pytest.approx(stats.ks_distance(expanded, law))
    with pytest.raises(UsageError):
        stats.ks_distance_weighted(vals, -w, law)


def test_tv_distance():
    assert stats.tv_distance_discrete({0: 0.5, 1: 0.5}, {0: 0.5, 1: 0.5}) == 0
    assert stats.tv_distance_discrete({0: 1.0}, {1: 1.0}) == 1
    assert stats.tv_distance_discrete([0.5, 0.5], [1.0, 0.0]) == 0.5
    with pytest.raises(UsageError):
        stats.tv_distance_discrete([0.5, 0.5], [1.0])


def test_chi_square_uniform():
    stat, p = stats.chi_square_uniform([10, 10, 10, 10])
    assert stat == 0 and p == pytest.approx(1)
    stat, p = stats.chi_square_uniform([30, 10], categories=3)
    assert stat == pytest.approx(((30 - 40 / 3) ** 2 + (10 - 40 / 3) ** 2 + (40 / 3) ** 2) / (40 / 3))
    assert p < 1e-3


def test_factorization_gap():
    rng = np.random.default_rng(2)
    x, y = rng.random(100_000), rng.random(100_000)
    assert stats.factorization_gap(x, y, (0.3, 0.7), (0.3, 0.7)) < 0.01
    assert stats.factorization_gap(x, x, (0.5,), (0.5,)) == pytest.approx(0.25, abs=0.01)


def test_report_validation():
    r = stats.EcdfReport("peak", 10, 100, 0.01, 0.02, True)
    assert r.as_dict()["pass"] is True
    with pytest.raises(UsageError):
        stats.EcdfReport("peak", 10, 100, 1.5, 0.02, False)


def test_exact_rank_ks_trend():
    ks = [stats.exact_rank_ks(n) for n in (16, 32, 64)]
    assert all(a > b for a, b in zip(ks, ks[1:]))


def test_limit_suite_small():
    cfg = stats.SuiteConfig(rank_n=(16, 32, 64), rank_ks_max=0.1, mean_n=2000)
    a = stats.limit_suite((10**5,), draws=20_000, seed=5, config=cfg)
    b = stats.limit_suite((10**5,), draws=20_000, seed=5, config=cfg)
    a.pop("elapsed_seconds")
    b.pop("elapsed_seconds")
    assert a == b
    assert not a["errors"]
    names = {c["statistic"] for c in a["checks"]}
    assert {"peak", "rank_exact_trend", "peak_mean", "largest_parts_joint"} <= names
    assert all(0 <= c["ks_distance"] <= 1 for c in a["checks"] if "ks_distance" in c)
    for c in a["checks"]:
        if c["statistic"].startswith("scaled_count_factorization"):
            assert c["pass"]
