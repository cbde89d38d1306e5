"""Internal DLA cluster growth in a fixed environment.

The cluster after n particles is an interval [g, d] containing 0 with
d - g = n.  Each new particle's exit side, given the current cluster, is
Bernoulli with the quenched hitting probability

    P(exit left) = sum_{i=0}^{d} exp(V(i)) / sum_{i=g-1}^{d} exp(V(i)),

so the exact sampler draws one uniform variate per particle instead of
simulating the walk step by step (trap escape times grow exponentially in
sqrt(n), which makes path simulation infeasible at scale).  The boundary
convention of the formula is frozen by matching the linear-solve oracle;
the one-step case g = d = 0 gives P(exit left) = 1 - omega(0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded
from scipy.special import logsumexp

from . import _kernels
from .env import Environment

# Incremental log-space sums are refreshed from scratch this often to bound
# floating-point drift.
RECOMPUTE_EVERY = 2**20

DEFAULT_STEP_CAP = 10**7

LEFT = "left"
RIGHT = "right"
CAPPED = "capped"


@dataclass
class ClusterTrajectory:
    """(n, g_n, d_n) at requested checkpoints for one growth run."""

    checkpoints: list[tuple[int, int, int]]
    env_master_seed: int
    run_seed: int

    @property
    def final(self) -> tuple[int, int, int]:
        return self.checkpoints[-1]


def _log_weight_prefixes(env: Environment, n: int) -> tuple[np.ndarray, np.ndarray]:
    """wr[k] = log sum_{0..k} e^V, wl[m] = log sum_{-m..-1} e^V (wl[0] = -inf)."""
    vr = env.potential_right(n)
    vl = env.potential_left(n + 1)
    wr = np.logaddexp.accumulate(vr)
    wl = np.empty(n + 2)
    wl[0] = -np.inf
    wl[1:] = np.logaddexp.accumulate(vl[1:])
    return wr, wl


def exit_left_probability(env: Environment, g: int, d: int) -> float:
    """P(walk from 0 first leaves [g, d] at g-1), per the hitting formula."""
    if not (g <= 0 <= d):
        raise ValueError(f"cluster must contain 0, got [{g}, {d}]")
    vr = env.potential_right(d)
    vl = env.potential_left(1 - g)
    s_num = logsumexp(vr)
    s_in = np.logaddexp(s_num, logsumexp(vl[1:]))
    return float(math.exp(s_num - s_in))


def hitting_probability_oracle(env: Environment, g: int, d: int) -> float:
    """Exit-left probability from the first-step recurrence, by linear solve.

    Solves h(x) = (1 - omega(x)) h(x-1) + omega(x) h(x+1) on [g, d] with
    h(g-1) = 1, h(d+1) = 0 and returns h(0).  Independent of the potential
    formula; used to validate exit_left_probability.
    """
    if not (g <= 0 <= d):
        raise ValueError(f"cluster must contain 0, got [{g}, {d}]")
    width = d - g + 1
    if width > 10**4:
        raise ValueError(f"interval too large for the oracle: width {width}")
    omega = env.omega_window(g, d)
    # Banded system rows x = g..d:  -(1-w) h(x-1) + h(x) - w h(x+1) = rhs
    ab = np.zeros((3, width))
    ab[0, 1:] = -omega[:-1]          # superdiagonal: -omega(x) on h(x+1)
    ab[1, :] = 1.0                   # diagonal
    ab[2, :-1] = -(1.0 - omega[1:])  # subdiagonal: -(1-omega(x)) on h(x-1)
    rhs = np.zeros(width)
    rhs[0] = 1.0 - omega[0]          # h(g-1) = 1
    h = solve_banded((1, 1), ab, rhs)
    return float(h[-g])


@dataclass
class Cluster:
    """Growing cluster with incrementally maintained log-space sums.

    s_num = log sum_{i=0}^{d} exp(V(i))
    s_in  = log sum_{i=g-1}^{d} exp(V(i))

    New terms enter through the stable pairwise rule
    log(e^a + e^b) = max(a, b) + log1p(e^-|a-b|); every RECOMPUTE_EVERY
    updates both sums are refreshed from scratch to bound drift.
    """

    env: Environment
    g: int = 0
    d: int = 0
    n_particles: int = 0
    s_num: float = 0.0
    s_in: float = field(init=False)
    _updates: int = 0

    def __post_init__(self):
        self.s_in = float(np.logaddexp(self.env.potential(-1), 0.0))

    def exit_left_probability(self) -> float:
        return math.exp(self.s_num - self.s_in)

    def add_particle(self, u: float) -> str:
        """Settle one particle with the uniform variate u; returns the side."""
        if u < self.exit_left_probability():
            self.g -= 1
            self.s_in = float(np.logaddexp(self.s_in, self.env.potential(self.g - 1)))
            side = LEFT
        else:
            self.d += 1
            v = self.env.potential(self.d)
            self.s_num = float(np.logaddexp(self.s_num, v))
            self.s_in = float(np.logaddexp(self.s_in, v))
            side = RIGHT
        self.n_particles += 1
        self._updates += 1
        if self._updates >= RECOMPUTE_EVERY:
            self.recompute_sums()
        return side

    def recompute_sums(self) -> None:
        vr = self.env.potential_right(self.d)
        vl = self.env.potential_left(1 - self.g)
        self.s_num = float(logsumexp(vr))
        self.s_in = float(np.logaddexp(self.s_num, logsumexp(vl[1:])))
        self._updates = 0


def _normalize_checkpoints(n: int, checkpoints) -> np.ndarray:
    if checkpoints is None:
        cps = np.array([n], dtype=np.int64)
    else:
        cps = np.unique(np.asarray(list(checkpoints), dtype=np.int64))
        if cps.size == 0 or cps[0] < 0 or cps[-1] > n:
            raise ValueError("checkpoints must lie in [0, n]")
    return cps


def run_uniforms(run_seed: int, n: int) -> np.ndarray:
    """The particle-order uniform stream for one run."""
    return np.random.default_rng(np.random.SeedSequence([int(run_seed), 3])).random(n)


def grow_cluster(
    env: Environment,
    n: int,
    run_seed: int,
    checkpoints=None,
) -> ClusterTrajectory:
    """Grow A(n) with the exact exit-side sampler.

    One uniform variate per particle, drawn from the run stream in particle
    order, so trajectories are reproducible given (env seed, run seed).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    cps = _normalize_checkpoints(n, checkpoints)
    wr, wl = _log_weight_prefixes(env, n)
    u = run_uniforms(run_seed, n)
    out_g = np.zeros(cps.size, dtype=np.int64)
    out_d = np.zeros(cps.size, dtype=np.int64)
    _kernels.grow_cluster_kernel(wr, wl, u, cps, out_g, out_d)
    points = [(int(c), int(a), int(b)) for c, a, b in zip(cps, out_g, out_d)]
    return ClusterTrajectory(points, env.master_seed, run_seed)


def grow_cluster_incremental(
    env: Environment,
    n: int,
    run_seed: int,
    checkpoints=None,
) -> ClusterTrajectory:
    """Reference growth through the incremental Cluster object.

    Identical in law to grow_cluster; kept as the plain restatement of the
    construction for cross-checking the kernel.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    cps = _normalize_checkpoints(n, checkpoints)
    cluster = Cluster(env)
    u = run_uniforms(run_seed, n)
    wanted = set(int(c) for c in cps)
    points = []
    if 0 in wanted:
        points.append((0, 0, 0))
    for j in range(n):
        cluster.add_particle(u[j])
        if j + 1 in wanted:
            points.append((j + 1, cluster.g, cluster.d))
    return ClusterTrajectory(points, env.master_seed, run_seed)


def step_walk_exit(
    env: Environment,
    g: int,
    d: int,
    run_seed: int,
    step_cap: int = DEFAULT_STEP_CAP,
) -> tuple[str, int]:
    """Simulate the walk from 0 step by step until it leaves [g, d].

    Returns (side, steps) with side in {"left", "right", "capped"}.  Capped
    runs signal an unresolved walk and must be excluded from statistics
    (and reported), never silently dropped.
    """
    if not (g <= 0 <= d):
        raise ValueError(f"cluster must contain 0, got [{g}, {d}]")
    omega = env.omega_window(g, d)
    _kernels.seed_walk_rng(int(run_seed) % 2**32)
    side, steps = _kernels.walk_exit_kernel(omega, -g, g, d, step_cap)
    name = {-1: LEFT, 1: RIGHT, 0: CAPPED}[side]
    return name, int(steps)


def grow_cluster_oracle(
    env: Environment,
    n: int,
    run_seed: int,
    step_cap: int = DEFAULT_STEP_CAP,
    checkpoints=None,
) -> ClusterTrajectory:
    """Full IDLA by step-by-step particle walks (validation oracle).

    Law-identical to grow_cluster when no particle is capped.  Raises
    CappedRunError if any particle's walk exceeds step_cap; intended for
    small n (<= 64 recommended).
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    cps = _normalize_checkpoints(max(n, 0), checkpoints)
    if n == 0:
        return ClusterTrajectory([(0, 0, 0)], env.master_seed, run_seed)
    omega = env.omega_window(-n, n)
    _kernels.seed_walk_rng(int(run_seed) % 2**32)
    out_g = np.zeros(cps.size, dtype=np.int64)
    out_d = np.zeros(cps.size, dtype=np.int64)
    capped_at = _kernels.idla_oracle_kernel(omega, n, n, step_cap, cps, out_g, out_d)
    if capped_at:
        raise CappedRunError(f"particle {capped_at} exceeded step cap {step_cap}")
    points = [(int(c), int(a), int(b)) for c, a, b in zip(cps, out_g, out_d)]
    return ClusterTrajectory(points, env.master_seed, run_seed)


class CappedRunError(RuntimeError):
    """A step-by-step particle failed to exit within the step cap."""
