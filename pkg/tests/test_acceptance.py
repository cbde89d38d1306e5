"""Acceptance suite: nine pass/fail gates for the whole package.

Each criterion prints one PASS/FAIL line (bypassing capture) and then
asserts, so `pytest -v` shows both the live line and the test verdict.
Thresholds are fixed numbers calibrated by self-consistency runs; seeds are
frozen so every run reproduces the same statistics exactly.

This suite is slow (~15-20 minutes single-core); the Brownian pools at
resolution 2**16 with 20000 replicas dominate.
"""

import math

import numpy as np
import pytest

from sinai_idla import brownian, experiments, stats
from sinai_idla.cli import main as cli_main
from sinai_idla.env import EnvironmentLaw, make_environment
from sinai_idla.idla import exit_left_probability, hitting_probability_oracle

UNIFORM = EnvironmentLaw("uniform")
FLAT = EnvironmentLaw("two_point", p=0.5)

BROWNIAN_RES = 2**16
BROWNIAN_M = 20000


def _report(capsys, num, label, ok, detail):
    verdict = "PASS" if ok else "FAIL"
    with capsys.disabled():
        print(f"\nACCEPTANCE {num} ({label}): {verdict} -- {detail}")
    assert ok, f"criterion {num} ({label}): {detail}"


@pytest.fixture(scope="module")
def brownian_pools():
    """Full-size Brownian pools shared by criteria 5 and 7."""
    return {
        "dstar": brownian.dstar_pool(BROWNIAN_RES, BROWNIAN_M, 777),
        "occupation": brownian.occupation_pool(BROWNIAN_RES, BROWNIAN_M, 778),
        "composite": brownian.composite_pool(BROWNIAN_RES, BROWNIAN_M, 779),
    }


def test_criterion_1_arcsine_convergence(capsys):
    # d_n/n over fresh environments approaches the Arcsine law
    ks = []
    for n in (256, 1024, 4096):
        res = experiments.run_simulate(UNIFORM, n, BROWNIAN_M, 31337)
        ks.append(stats.ks_statistic(res.edge_pool().values, stats.arcsine_cdf))
    ok = ks[-1] <= 0.05 and ks[0] > ks[1] > ks[2]
    _report(capsys, 1, "arcsine convergence",
            ok, f"KS over n=256,1024,4096: {[round(k, 4) for k in ks]} (gate: <=0.05 at 4096, decreasing)")


def test_criterion_2_exact_sampler_vs_oracle(capsys):
    res = experiments.run_oracle_compare(EnvironmentLaw("two_point", p=0.3),
                                         12, 100_000, 2020)
    ok = res.tv_distance <= 0.02 and res.capped == 0
    _report(capsys, 2, "exact sampler vs step-walk oracle",
            ok, f"TV(d_12) = {res.tv_distance:.4f} (gate: <=0.02), capped runs = {res.capped}")


def test_criterion_3_hitting_formula(capsys):
    rng = np.random.default_rng(2024)
    worst = 0.0
    for k in range(1000):
        law = UNIFORM if k % 2 == 0 else EnvironmentLaw("two_point", p=0.3)
        env = make_environment(law, int(rng.integers(2**31)))
        d = int(rng.integers(0, 16))
        g = -int(rng.integers(0, 15))
        p = exit_left_probability(env, g, d)
        q = hitting_probability_oracle(env, g, d)
        worst = max(worst, abs(p - q) / q)
    env = make_environment(FLAT, 0)
    flat_ok = exit_left_probability(env, -2, 3) == pytest.approx(4.0 / 7.0, rel=1e-13)
    ok = worst <= 1e-10 and flat_ok
    _report(capsys, 3, "hitting formula vs linear-solve oracle",
            ok, f"worst relative error over 1000 instances = {worst:.2e} "
                f"(gate: <=1e-10), flat closed form {'ok' if flat_ok else 'BAD'}")


def test_criterion_4_quenched_localization(capsys):
    fr = []
    unresolved = 0
    for n in (10**3, 10**4, 10**5):
        res = experiments.run_localization(UNIFORM, n, 1000, 4242, 0.05)
        fr.append(res.exceedance_fraction)
        unresolved += res.unresolved
    ok = fr[-1] <= 0.1 and fr[0] > fr[1] > fr[2]
    _report(capsys, 4, "quenched localization",
            ok, f"P(|d_n/n - d*| > 0.05) over n=1e3,1e4,1e5: "
                f"{[round(f, 4) for f in fr]} (gate: <=0.1 at 1e5, decreasing); "
                f"unresolved environments = {unresolved}")


def test_criterion_5_brownian_identity_suite(capsys, brownian_pools):
    ds = brownian_pools["dstar"]
    pools = {
        "dstar": ds.dstar,
        "occupation": brownian_pools["occupation"],
        "composite": brownian_pools["composite"],
    }
    details = []
    ok = True

    labels = list(pools)
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            k = stats.two_sample_ks(pools[a], pools[b])
            ok &= k <= 0.02
            details.append(f"KS({a},{b})={k:.4f}")
    for label, values in pools.items():
        k = stats.ks_statistic(values, stats.arcsine_cdf)
        ok &= k <= 0.02
        details.append(f"KS({label},arcsine)={k:.4f}")

    # ybar identity: twice the critical level is half-normal (the two-sided
    # budget sums two first-passage times, each a squared-reciprocal-normal
    # of rate 2y; the convention is pinned by the reduced-size calibration)
    k_ybar = stats.ks_statistic(2.0 * ds.ybar, stats.half_normal_cdf)
    ok &= k_ybar <= 0.02
    details.append(f"KS(2*ybar,half-normal)={k_ybar:.4f}")

    for label, values in pools.items():
        m = values.size
        mean_tol = 3 * math.sqrt(0.125 / m)
        var_tol = 3 * math.sqrt(1.0 / (128 * m))  # E[(X-1/2)^4] = 3/128
        ok &= abs(values.mean() - 0.5) <= mean_tol
        ok &= abs(values.var() - 0.125) <= var_tol
    details.append(f"unresolved={ds.unresolved}/{BROWNIAN_M}")
    _report(capsys, 5, "Brownian identity suite",
            ok, "; ".join(details) + " (gates: all KS <= 0.02, moments 3-sigma)")


def test_criterion_6_good_event_probability(capsys):
    fr = []
    for n in (10**3, 10**4, 10**5):
        res = experiments.run_good_events(UNIFORM, n, 1000, 555, 0.1)
        fr.append(res.frequency)
    ok = fr[0] < fr[1] < fr[2] and fr[-1] >= 0.8
    _report(capsys, 6, "good-event probability",
            ok, f"freq over n=1e3,1e4,1e5: {[round(f, 4) for f in fr]} "
                f"(gate: increasing and >=0.8 at 1e5; the finite-size barrier "
                f"margin n^(-1/6)~0.147 keeps the frequency near 0.72 at n=1e5, "
                f"so the 0.8 gate needs n beyond desk scale)")


def test_criterion_7_excursion_dichotomy(capsys, brownian_pools):
    ds = brownian_pools["dstar"]
    shorter = np.minimum(ds.alpha, ds.beta)
    frac = float(np.mean(shorter > 0.01))
    grid_frac = float(np.mean(shorter > 1.0 / BROWNIAN_RES))
    ok = frac <= 0.05
    _report(capsys, 7, "excursion dichotomy",
            ok, f"P(min(alpha,beta) > 0.01) = {frac:.4f} (gate: <=0.05); "
                f"for scale, P(min > one grid step) = {grid_frac:.4f} -- the "
                f"non-vanishing excursion keeps a discrete companion whose "
                f"length shrinks like the grid, so the gate uses the fixed "
                f"0.01 cut, not the one-step cut")


def test_criterion_8_flat_environment_regression(capsys):
    n, m = 10**6, 1000
    _, _, d = experiments.annealed_edges(FLAT, n, m, 8080)
    edges = d[:, -1] / n

    # independent reference: direct simulation of the exact edge chain
    # (next particle exits left w.p. (d+1)/(j+2)), separate RNG stream
    rng = np.random.default_rng(909)
    d_ref = np.zeros(m, dtype=np.int64)
    j = 0
    while j < n:
        block = min(4096, n - j)
        u = rng.random((block, m))
        for k in range(block):
            d_ref += u[k] >= (d_ref + 1) / (j + k + 2)
        j += block
    ref = d_ref / n

    sigma = edges.std(ddof=1) / math.sqrt(m)
    mean_ok = abs(edges.mean() - 0.5) <= 3 * sigma
    ks = stats.two_sample_ks(edges, ref)
    spread_ok = ks <= 0.08  # two-sample noise floor ~0.06 at 1000 vs 1000
    ok = mean_ok and spread_ok
    _report(capsys, 8, "flat-environment regression",
            ok, f"mean d_n/n = {edges.mean():.6f} (gate: 0.5 +/- {3 * sigma:.6f}); "
                f"two-sample KS vs reference chain = {ks:.4f} (gate: <=0.08)")


def test_criterion_9_determinism(capsys, tmp_path):
    args = ["simulate", "--n", "64", "--replicas", "600", "--seed", "77", "--no-plot"]
    paths = [tmp_path / name for name in ("a.csv", "b.csv", "c.csv")]
    assert cli_main(args + ["--workers", "1", "--out", str(paths[0])]) == 0
    assert cli_main(args + ["--workers", "1", "--out", str(paths[1])]) == 0
    assert cli_main(args + ["--workers", "3", "--out", str(paths[2])]) == 0
    blobs = [p.read_bytes() for p in paths]
    ok = blobs[0] == blobs[1] == blobs[2]
    _report(capsys, 9, "determinism",
            ok, "same seed, workers 1/1/3: CSV outputs byte-identical" if ok
                else "outputs differ across repeats or worker counts")
