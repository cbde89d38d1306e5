"""Reference distributions and ECDF distance machinery."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from sinai_idla.stats import (
    SamplePool,
    arcsine_cdf,
    arcsine_density,
    half_normal_cdf,
    ks_statistic,
    pool_report,
    tv_distance_discrete,
    two_sample_ks,
)


def test_arcsine_cdf_closed_form_points():
    assert arcsine_cdf(0.0) == 0.0
    assert arcsine_cdf(1.0) == pytest.approx(1.0, abs=1e-14)
    assert arcsine_cdf(0.5) == pytest.approx(0.5, abs=1e-14)
    # (2/pi) arcsin(1/2) = 1/3
    assert arcsine_cdf(0.25) == pytest.approx(1.0 / 3.0, abs=1e-12)
    with pytest.raises(ValueError):
        arcsine_cdf(-0.1)
    with pytest.raises(ValueError):
        arcsine_cdf(1.1)


def test_arcsine_cdf_strictly_increasing_and_integral_consistent():
    xs = np.linspace(1e-6, 1 - 1e-6, 1000)
    cdf = arcsine_cdf(xs)
    assert np.all(np.diff(cdf) > 0)
    # numeric integral of the density matches the CDF
    for x in np.linspace(0.05, 0.95, 10):
        val, _ = quad(arcsine_density, 0.0, x)
        assert val == pytest.approx(arcsine_cdf(x), abs=1e-8)


def test_half_normal_cdf_points():
    assert half_normal_cdf(0.0) == 0.0
    assert half_normal_cdf(1.0) == pytest.approx(0.6826894921, abs=1e-9)
    assert half_normal_cdf(10.0) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        half_normal_cdf(-1.0)


def test_ks_self_consistency():
    # samples drawn from the analytic law itself: KS ~ O(M^-1/2)
    rng = np.random.default_rng(7)
    u = rng.random(10**4)
    arcsine_samples = np.sin(u * math.pi / 2.0) ** 2  # inverse-CDF transform
    assert ks_statistic(arcsine_samples, arcsine_cdf) < 0.03


def test_ks_uniform_vs_arcsine_analytic_gap():
    # sup |x - (2/pi) arcsin sqrt(x)|, numerically maximized
    xs = np.linspace(1e-9, 1 - 1e-9, 10**6)
    analytic_gap = np.abs(xs - arcsine_cdf(xs)).max()
    assert analytic_gap == pytest.approx(0.10526, abs=1e-4)
    rng = np.random.default_rng(11)
    ks = ks_statistic(rng.random(10**4), arcsine_cdf)
    assert ks == pytest.approx(analytic_gap, abs=0.03)


def test_two_sample_ks_properties():
    rng = np.random.default_rng(3)
    a = rng.random(500)
    b = rng.random(700)
    assert two_sample_ks(a, a) == 0.0
    assert two_sample_ks(a, b) == pytest.approx(two_sample_ks(b, a), abs=1e-15)
    assert 0.0 <= two_sample_ks(a, b) <= 1.0
    with pytest.raises(ValueError):
        two_sample_ks(a, np.array([]))


def test_tv_distance_properties():
    rng = np.random.default_rng(4)
    a = rng.integers(0, 10, 1000)
    b = rng.integers(0, 10, 1000)
    assert tv_distance_discrete(a, a) == 0.0
    assert 0.0 <= tv_distance_discrete(a, b) <= 1.0
    # disjoint supports: TV = 1
    assert tv_distance_discrete(np.zeros(5, int), np.ones(5, int)) == 1.0


def test_sample_pool_validation():
    with pytest.raises(ValueError):
        SamplePool("empty", np.array([]))
    with pytest.raises(ValueError):
        SamplePool("out", np.array([0.5, 1.5]))
    pool = SamplePool("ybar", np.array([0.1, 2.0]), support=(0.0, math.inf))
    assert pool.count == 2


def test_pool_report_schema():
    rng = np.random.default_rng(5)
    vals = rng.random(200)
    pool = SamplePool("demo", vals)
    rep = pool_report(
        pool,
        references={"arcsine": arcsine_cdf},
        pairwise={"other": rng.random(100)},
    )
    assert rep["pool_label"] == "demo"
    assert rep["n"] == 200
    assert {"mean", "var", "ks_vs_arcsine", "pairwise_ks"} <= set(rep)
