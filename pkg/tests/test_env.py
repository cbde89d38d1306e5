"""Environment generation, potential values, reproducibility."""

import math

import numpy as np
import pytest

from sinai_idla.env import (
    LOGISTIC_VARIANCE,
    Environment,
    EnvironmentLaw,
    make_environment,
)


def test_law_validation():
    with pytest.raises(ValueError):
        EnvironmentLaw("uniform", delta=0.5)
    with pytest.raises(ValueError):
        EnvironmentLaw("uniform", delta=-0.1)
    with pytest.raises(ValueError):
        EnvironmentLaw("two_point", p=0.0)
    with pytest.raises(ValueError):
        EnvironmentLaw("two_point", p=1.0)
    with pytest.raises(ValueError):
        EnvironmentLaw("beta")


def test_two_point_half_is_flat():
    env = make_environment(EnvironmentLaw("two_point", p=0.5), 7)
    for i in range(-20, 21):
        assert env.omega(i) == 0.5
        assert env.log_rho(i) == 0.0
        assert env.potential(i) == 0.0


def test_uniform_log_rho_mean_logistic_variance():
    # mean of log rho over 1e6 sites within 3 sigma of 0; Var = pi^2/3
    env = make_environment(EnvironmentLaw("uniform", delta=0.0), 12345)
    n = 10**6
    env.ensure_right(n)
    logrho = np.diff(env.potential_right(n))
    assert logrho.size == n
    sigma = math.sqrt(LOGISTIC_VARIANCE / n)
    assert abs(logrho.mean()) < 3 * sigma
    assert abs(logrho.var() - LOGISTIC_VARIANCE) < 0.05


def test_two_point_levels_and_frequency():
    env = make_environment(EnvironmentLaw("two_point", p=0.3), 99)
    n = 10**5
    logrho = np.diff(env.potential_right(n))
    lvl = math.log(7.0 / 3.0)
    assert np.allclose(np.abs(logrho), lvl)
    frac = np.mean(logrho > 0)
    assert abs(frac - 0.5) < 3 * math.sqrt(0.25 / n)


def test_omega_strictly_inside_unit_interval():
    for law in (EnvironmentLaw("uniform"), EnvironmentLaw("two_point", p=0.3)):
        env = make_environment(law, 5)
        w = env.omega_window(-500, 500)
        assert np.all(w > 0) and np.all(w < 1)


def test_potential_definition():
    env = make_environment(EnvironmentLaw("uniform"), 31)
    assert env.potential(0) == 0.0
    # single-term left sum: V(-1) = -log rho(0)
    assert env.potential(-1) == pytest.approx(-env.log_rho(0), rel=1e-12)
    # right telescoping: V(i) - V(i-1) = log rho(i)
    for i in range(1, 30):
        assert env.potential(i) - env.potential(i - 1) == pytest.approx(
            env.log_rho(i), rel=1e-9, abs=1e-12
        )
    # left telescoping: V(i) - V(i+1) = -log rho(i+1)
    for i in range(-30, -1):
        assert env.potential(i) - env.potential(i + 1) == pytest.approx(
            -env.log_rho(i + 1), rel=1e-9, abs=1e-12
        )


def test_potential_increment_sum_exact():
    env = make_environment(EnvironmentLaw("uniform"), 404)
    rng = np.random.default_rng(0)
    for _ in range(50):
        i, j = sorted(rng.integers(1, 400, size=2))
        if i == j:
            continue
        total = sum(env.log_rho(k) for k in range(i + 1, j + 1))
        assert env.potential(j) - env.potential(i) == pytest.approx(total, abs=1e-9)


def test_renormalized_potential_floor_semantics():
    env = make_environment(EnvironmentLaw("uniform"), 8)
    assert env.renormalized_potential(17, 0.0) == 0.0
    assert env.renormalized_potential(4, 0.5) == pytest.approx(env.potential(2) / 2.0)
    # floor(100 * -0.013) = floor(-1.3) = -2
    assert env.renormalized_potential(100, -0.013) == pytest.approx(
        env.potential(-2) / 10.0
    )


def test_extension_order_never_changes_values():
    seed = 2718
    law = EnvironmentLaw("uniform")
    a = make_environment(law, seed)
    b = make_environment(law, seed)
    # a: grow right deep first, then left; b: interleave the other way
    a.ensure_right(2000)
    a.ensure_left(5)
    b.ensure_left(1000)
    b.ensure_right(3)
    for i in list(range(-1000, -990)) + list(range(1, 10)) + [500, 1999]:
        assert a.omega(i) == b.omega(i)
    # previously generated values survive further growth
    before = a.omega_window(-10, 10)
    a.ensure_right(10**5)
    a.ensure_left(10**5)
    assert np.array_equal(before, a.omega_window(-10, 10))


def test_potential_arrays_match_point_queries():
    env = make_environment(EnvironmentLaw("two_point", p=0.3), 55)
    right = env.potential_right(40)
    left = env.potential_left(40)
    for i in range(41):
        assert right[i] == pytest.approx(env.potential(i), abs=1e-12)
        assert left[i] == pytest.approx(env.potential(-i), abs=1e-12)
