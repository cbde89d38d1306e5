"""End-to-end experiment runners behind the CLI subcommands.

Every runner is a pure function of its arguments.  Replica r of a run with
master seed s draws all of its randomness from seeds derived by
counter-based splitting (SeedSequence([s, r, label])), so adding replicas
never perturbs existing ones and results are independent of how work is
split across workers.  Parallel runs split the replica range into chunks of
fixed size and merge chunk results in index order, which makes outputs
byte-identical at any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, brownian, functionals, stats
from .env import Environment, EnvironmentLaw
from .idla import _log_weight_prefixes, _normalize_checkpoints, run_uniforms

CHUNK = 256

# Stream labels for counter-based replica seed derivation.
ENV_STREAM = 0
RUN_STREAM = 1


def derived_seed(seed: int, replica: int, label: int) -> int:
    ss = np.random.SeedSequence([int(seed), int(replica), int(label)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _is_flat(law: EnvironmentLaw) -> bool:
    return law.kind == "two_point" and law.p == 0.5


def _flat_prefixes(n: int) -> tuple[np.ndarray, np.ndarray]:
    # V == 0: log-weight prefixes are log(k+1) and log(m).
    wr = np.log(np.arange(1, n + 2, dtype=float))
    wl = np.empty(n + 2)
    wl[0] = -np.inf
    wl[1:] = np.log(np.arange(1, n + 2, dtype=float))
    return wr, wl


def _run_chunks(worker, chunk_args: list, workers: int) -> list:
    if workers <= 1:
        return [worker(*args) for args in chunk_args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(worker, *args) for args in chunk_args]
        return [f.result() for f in futures]


def _chunk_ranges(replicas: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + CHUNK, replicas)) for lo in range(0, replicas, CHUNK)]


# -- annealed cluster growth ----------------------------------------------


def _edges_chunk(law: EnvironmentLaw, n: int, seed: int, lo: int, hi: int, cps: np.ndarray):
    flat = _is_flat(law)
    if flat:
        wr, wl = _flat_prefixes(n)
    rows_g = np.empty((hi - lo, cps.size), dtype=np.int64)
    rows_d = np.empty((hi - lo, cps.size), dtype=np.int64)
    for k, r in enumerate(range(lo, hi)):
        if not flat:
            env = Environment(law, derived_seed(seed, r, ENV_STREAM))
            wr, wl = _log_weight_prefixes(env, n)
        u = run_uniforms(derived_seed(seed, r, RUN_STREAM), n)
        _kernels.grow_cluster_kernel(wr, wl, u, cps, rows_g[k], rows_d[k])
    return rows_g, rows_d


def annealed_edges(
    law: EnvironmentLaw,
    n: int,
    replicas: int,
    seed: int,
    checkpoints=None,
    workers: int = 1,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Cluster edges over fresh-environment replicas (the annealed law:
    each replica keeps one environment throughout its construction).

    Returns (checkpoints, g, d) with g, d of shape (replicas, n_checkpoints).
    """
    cps = _normalize_checkpoints(n, checkpoints)
    parts = _run_chunks(
        _edges_chunk,
        [(law, n, seed, lo, hi, cps) for lo, hi in _chunk_ranges(replicas)],
        workers,
    )
    g = np.concatenate([p[0] for p in parts])
    d = np.concatenate([p[1] for p in parts])
    return cps, g, d


@dataclass
class SimulateResult:
    law: EnvironmentLaw
    n: int
    seed: int
    checkpoints: np.ndarray
    g: np.ndarray
    d: np.ndarray

    def rows(self):
        """CSV rows: replica, n, g_n, d_n, d_over_n."""
        for r in range(self.g.shape[0]):
            for c, cp in enumerate(self.checkpoints):
                yield (r, int(cp), int(self.g[r, c]), int(self.d[r, c]),
                       self.d[r, c] / cp if cp else 0.5)

    def edge_pool(self) -> stats.SamplePool:
        return stats.SamplePool("d_over_n", self.d[:, -1] / self.checkpoints[-1])

    def report(self) -> dict:
        pool = self.edge_pool()
        rep = stats.pool_report(pool, references={"arcsine": stats.arcsine_cdf})
        rep["law"] = self.law.description
        rep["n"] = int(self.checkpoints[-1])
        rep["replicas"] = int(self.g.shape[0])
        rep["seed"] = int(self.seed)
        return rep


def run_simulate(law, n, replicas, seed, checkpoints=None, workers=1) -> SimulateResult:
    cps, g, d = annealed_edges(law, n, replicas, seed, checkpoints, workers)
    return SimulateResult(law, n, seed, cps, g, d)


# -- quenched localization -------------------------------------------------


def _localization_chunk(law: EnvironmentLaw, n: int, seed: int, lo: int, hi: int):
    rows = []
    cps = np.array([n], dtype=np.int64)
    for r in range(lo, hi):
        env = Environment(law, derived_seed(seed, r, ENV_STREAM))
        wr, wl = _log_weight_prefixes(env, n)
        u = run_uniforms(derived_seed(seed, r, RUN_STREAM), n)
        out_g = np.zeros(1, dtype=np.int64)
        out_d = np.zeros(1, dtype=np.int64)
        _kernels.grow_cluster_kernel(wr, wl, u, cps, out_g, out_d)
        rep = functionals.theoretical_position(functionals.PotentialProfile(env, n))
        rows.append((r, out_d[0] / n, rep.dstar, rep.resolved))
    return rows


@dataclass
class LocalizationResult:
    n: int
    eps: float
    rows: list  # (replica, d_over_n, dstar, resolved)

    @property
    def resolved_rows(self):
        return [row for row in self.rows if row[3]]

    @property
    def unresolved(self) -> int:
        return len(self.rows) - len(self.resolved_rows)

    @property
    def exceedance_fraction(self) -> float:
        res = self.resolved_rows
        if not res:
            return math.nan
        bad = sum(1 for _, dn, ds, _ in res if abs(dn - ds) > self.eps)
        return bad / len(res)

    def report(self) -> dict:
        return {
            "n": self.n,
            "eps": self.eps,
            "replicas": len(self.rows),
            "unresolved": self.unresolved,
            "exceedance_fraction": self.exceedance_fraction,
        }


def run_localization(law, n, replicas, seed, eps, workers=1) -> LocalizationResult:
    parts = _run_chunks(
        _localization_chunk,
        [(law, n, seed, lo, hi) for lo, hi in _chunk_ranges(replicas)],
        workers,
    )
    rows = [row for part in parts for row in part]
    return LocalizationResult(n, eps, rows)


# -- good-environment event frequency -------------------------------------


def _good_events_chunk(law: EnvironmentLaw, n: int, eps: float, seed: int, lo: int, hi: int):
    rows = []
    for r in range(lo, hi):
        env = Environment(law, derived_seed(seed, r, ENV_STREAM))
        rep = functionals.full_report(functionals.PotentialProfile(env, n), eps)
        rows.append((r, rep.ybar, rep.alpha, rep.beta,
                     rep.b_plus, rep.b_minus, rep.c_plus, rep.c_minus, rep.resolved))
    return rows


@dataclass
class GoodEventsResult:
    n: int
    eps: float
    rows: list

    @property
    def frequency(self) -> float:
        """Empirical frequency of (B+ and C+) or (B- and C-)."""
        res = [row for row in self.rows if row[8]]
        if not res:
            return math.nan
        hits = sum(1 for row in res if (row[4] and row[6]) or (row[5] and row[7]))
        return hits / len(res)

    def report(self) -> dict:
        return {
            "n": self.n,
            "eps": self.eps,
            "environments": len(self.rows),
            "unresolved": sum(1 for row in self.rows if not row[8]),
            "good_event_frequency": self.frequency,
        }


def run_good_events(law, n, replicas, seed, eps, workers=1) -> GoodEventsResult:
    parts = _run_chunks(
        _good_events_chunk,
        [(law, n, eps, seed, lo, hi) for lo, hi in _chunk_ranges(replicas)],
        workers,
    )
    return GoodEventsResult(n, eps, [row for part in parts for row in part])


# -- per-path functionals table -------------------------------------------


def run_functionals(law, n, replicas, seed, eps, workers=1) -> GoodEventsResult:
    """Same sweep as run_good_events; kept as its own entry point for the
    CSV-oriented `functionals` subcommand."""
    return run_good_events(law, n, replicas, seed, eps, workers)


# -- quenched exploration --------------------------------------------------


@dataclass
class QuenchedExploreResult:
    n_max: int
    rows: list  # (env_index, n, g, d, d_over_n)

    def extremes(self) -> dict:
        """Per environment: min and max of d_n/n over the checkpoint grid."""
        out = {}
        for env_i, n, _, d, ratio in self.rows:
            lo, hi = out.get(env_i, (1.0, 0.0))
            out[env_i] = (min(lo, ratio), max(hi, ratio))
        return out


def run_quenched_explore(law, n, environments, seed, workers=1) -> QuenchedExploreResult:
    """One long growth per environment with checkpoints at powers of two."""
    cps = [2**k for k in range(0, n.bit_length()) if 2**k <= n]
    if cps[-1] != n:
        cps.append(n)
    cps = np.array(cps, dtype=np.int64)
    parts = _run_chunks(
        _explore_chunk,
        [(law, n, seed, lo, hi, cps) for lo, hi in _chunk_ranges(environments)],
        workers,
    )
    rows = [row for part in parts for row in part]
    return QuenchedExploreResult(n, rows)


def _explore_chunk(law, n, seed, lo, hi, cps):
    rows = []
    for r in range(lo, hi):
        env = Environment(law, derived_seed(seed, r, ENV_STREAM))
        wr, wl = _log_weight_prefixes(env, n)
        u = run_uniforms(derived_seed(seed, r, RUN_STREAM), n)
        out_g = np.zeros(cps.size, dtype=np.int64)
        out_d = np.zeros(cps.size, dtype=np.int64)
        _kernels.grow_cluster_kernel(wr, wl, u, cps, out_g, out_d)
        for c, cp in enumerate(cps):
            rows.append((r, int(cp), int(out_g[c]), int(out_d[c]), out_d[c] / cp))
    return rows


# -- exact sampler vs step-walk oracle ------------------------------------


@dataclass
class OracleCompareResult:
    n: int
    runs: int
    d_exact: np.ndarray
    d_oracle: np.ndarray
    capped: int

    @property
    def tv_distance(self) -> float:
        return stats.tv_distance_discrete(self.d_exact, self.d_oracle)

    def report(self) -> dict:
        return {
            "n": self.n,
            "runs": self.runs,
            "capped_oracle_runs": self.capped,
            "tv_distance": self.tv_distance,
        }


def run_oracle_compare(law, n, runs, seed, step_cap=10**7, workers=1) -> OracleCompareResult:
    """Distribution of d_n under the exact sampler vs step-by-step IDLA, in
    one fixed environment.  Capped oracle runs are excluded and counted."""
    env = Environment(law, derived_seed(seed, 0, ENV_STREAM))
    wr, wl = _log_weight_prefixes(env, n)
    omega = env.omega_window(-n, n)
    parts = _run_chunks(
        _oracle_chunk,
        [(wr, wl, omega, n, seed, step_cap, lo, hi) for lo, hi in _chunk_ranges(runs)],
        workers,
    )
    d_exact = np.concatenate([p[0] for p in parts])
    d_oracle = np.concatenate([p[1] for p in parts])
    capped = sum(p[2] for p in parts)
    d_oracle = d_oracle[d_oracle >= 0]
    return OracleCompareResult(n, runs, d_exact, d_oracle, capped)


def _oracle_chunk(wr, wl, omega, n, seed, step_cap, lo, hi):
    cps = np.array([n], dtype=np.int64)
    d_exact = np.empty(hi - lo, dtype=np.int64)
    d_oracle = np.empty(hi - lo, dtype=np.int64)
    out_g = np.zeros(1, dtype=np.int64)
    out_d = np.zeros(1, dtype=np.int64)
    capped = 0
    for k, r in enumerate(range(lo, hi)):
        u = run_uniforms(derived_seed(seed, r, RUN_STREAM), n)
        _kernels.grow_cluster_kernel(wr, wl, u, cps, out_g, out_d)
        d_exact[k] = out_d[0]
        _kernels.seed_walk_rng(derived_seed(seed, r, 2) % 2**32)
        bad = _kernels.idla_oracle_kernel(omega, n, n, step_cap, cps, out_g, out_d)
        if bad:
            capped += 1
            d_oracle[k] = -1
        else:
            d_oracle[k] = out_d[0]
    return d_exact, d_oracle, capped


# -- Brownian identity suite ----------------------------------------------


@dataclass
class BrownianIdentitiesResult:
    resolution: int
    replicas: int
    dstar: brownian.DstarPool
    occupation: np.ndarray
    composite: np.ndarray
    g1: np.ndarray

    def pools(self) -> dict[str, np.ndarray]:
        return {
            "dstar": self.dstar.dstar,
            "occupation_A1": self.occupation,
            "composite": self.composite,
            "last_zero_g1": self.g1,
        }

    def report(self) -> dict:
        pools = self.pools()
        labels = list(pools)
        pairwise = {}
        for i, a in enumerate(labels):
            for b in labels[i + 1 :]:
                pairwise[f"{a}|{b}"] = stats.two_sample_ks(pools[a], pools[b])
        h = 1.0 / self.resolution
        both_excursions = np.mean((self.dstar.alpha > h) & (self.dstar.beta > h))
        rep = {
            "resolution": self.resolution,
            "replicas": self.replicas,
            "unresolved_dstar": self.dstar.unresolved,
            "pairwise_ks": pairwise,
            "ks_2ybar_vs_halfnormal": stats.ks_statistic(
                2.0 * self.dstar.ybar, stats.half_normal_cdf
            ),
            "both_excursions_fraction": float(both_excursions),
            "pools": {},
        }
        for label, values in pools.items():
            pool = stats.SamplePool(label, values)
            rep["pools"][label] = stats.pool_report(pool, references={"arcsine": stats.arcsine_cdf})
        return rep


def run_brownian_identities(resolution, replicas, seed) -> BrownianIdentitiesResult:
    return BrownianIdentitiesResult(
        resolution=resolution,
        replicas=replicas,
        dstar=brownian.dstar_pool(resolution, replicas, seed),
        occupation=brownian.occupation_pool(resolution, replicas, seed),
        composite=brownian.composite_pool(resolution, replicas, seed),
        g1=brownian.last_zero_pool(resolution, replicas, seed),
    )
