"""Numba kernels for the hot loops: exact cluster growth and step walks.

All kernels are pure functions of their array arguments plus (for the
step-walk kernels) the numba-global RNG, which callers must seed through
`seed_walk_rng` before each reproducible run.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _logaddexp(a: float, b: float) -> float:
    if a == -np.inf:
        return b
    if b == -np.inf:
        return a
    if a >= b:
        return a + math.log1p(math.exp(b - a))
    return b + math.log1p(math.exp(a - b))


@njit(cache=True)
def grow_cluster_kernel(wr, wl, u, checkpoints, out_g, out_d):
    """Grow an IDLA cluster with one exact Bernoulli draw per particle.

    wr[k] = log sum_{i=0}^{k} exp(V(i)), k = 0..n
    wl[m] = log sum_{i=-m}^{-1} exp(V(i)), m = 0..n+1 (wl[0] = -inf)
    u     = one uniform variate per particle, in particle order
    checkpoints = sorted particle counts at which (g, d) is recorded
    """
    g = 0
    d = 0
    ci = 0
    n_cp = checkpoints.size
    if ci < n_cp and checkpoints[ci] == 0:
        out_g[ci] = 0
        out_d[ci] = 0
        ci += 1
    for j in range(u.size):
        s_num = wr[d]
        s_in = _logaddexp(s_num, wl[1 - g])
        p_left = math.exp(s_num - s_in)
        if u[j] < p_left:
            g -= 1
        else:
            d += 1
        if ci < n_cp and checkpoints[ci] == j + 1:
            out_g[ci] = g
            out_d[ci] = d
            ci += 1
    return g, d


@njit(cache=True)
def seed_walk_rng(seed: int) -> None:
    np.random.seed(seed)


@njit(cache=True)
def walk_exit_kernel(omega, offset, g, d, step_cap):
    """Run one nearest-neighbor walk from 0 until it leaves [g, d].

    Returns (side, steps): side is -1 for a left exit at g-1, +1 for a
    right exit at d+1, 0 if step_cap was reached first.
    """
    x = 0
    for s in range(step_cap):
        if np.random.random() < omega[x + offset]:
            x += 1
        else:
            x -= 1
        if x < g:
            return -1, s + 1
        if x > d:
            return 1, s + 1
    return 0, step_cap


@njit(cache=True)
def idla_oracle_kernel(omega, offset, n, step_cap, checkpoints, out_g, out_d):
    """Full step-by-step IDLA: each particle walks until it exits.

    Returns 0 on success, or the 1-based index of the first particle whose
    walk hit step_cap (the trajectory is then invalid past that point).
    """
    g = 0
    d = 0
    ci = 0
    n_cp = checkpoints.size
    if ci < n_cp and checkpoints[ci] == 0:
        out_g[ci] = 0
        out_d[ci] = 0
        ci += 1
    for j in range(1, n + 1):
        x = 0
        steps = 0
        capped = True
        while steps < step_cap:
            if np.random.random() < omega[x + offset]:
                x += 1
            else:
                x -= 1
            steps += 1
            if x < g or x > d:
                capped = False
                break
        if capped:
            return j
        if x < g:
            g = x
        else:
            d = x
        if ci < n_cp and checkpoints[ci] == j:
            out_g[ci] = g
            out_d[ci] = d
            ci += 1
    return 0
