"""Discretized two-sided Brownian paths and their Arcsine-law functionals.

Paths live on a regular grid with `resolution` points per unit of time and
Gaussian increments of variance h = 1/resolution (Gaussian rather than +-1
steps: same limit, better small-h behavior for zero detection).  Sign
convention: a value exactly 0 at a grid point counts as non-positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import functionals
from .functionals import WINDOW_CAP_UNITS, DiscretePath, FunctionalReport

# Local-time proxy: L_t is estimated by COEFF * sqrt(h) * (number of sign
# changes up to t).  For Brownian motion observed on a grid of step h the
# sign-change count scales like sqrt(2/(pi h)) * L_t, so COEFF = sqrt(pi/2);
# the calibration test pins this against the half-normal law of L_1.
SIGN_CHANGE_LOCAL_TIME_COEFF = math.sqrt(math.pi / 2.0)


class BrownianPath(DiscretePath):
    """Two-sided Brownian path on a grid, extendable by doubling.

    Extension never changes previously generated values: each side draws
    from its own persistent generator and appends increments.
    """

    def __init__(self, resolution: int, seed: int, extent: float = 2.0):
        if resolution < 2:
            raise ValueError(f"resolution must be >= 2, got {resolution}")
        if extent < 1:
            raise ValueError(f"extent must be >= 1, got {extent}")
        self.resolution = int(resolution)
        self.seed = int(seed)
        self.h = 1.0 / self.resolution
        self.steps_per_unit = self.resolution
        self.max_window = WINDOW_CAP_UNITS * self.resolution
        self._rng_right = np.random.default_rng(np.random.SeedSequence([self.seed, 10]))
        self._rng_left = np.random.default_rng(np.random.SeedSequence([self.seed, 11]))
        self._right = np.zeros(1)
        self._left = np.zeros(1)
        m = int(math.ceil(extent * self.resolution))
        self._grow("right", m)
        self._grow("left", m)

    def _grow(self, side: str, m: int) -> None:
        arr = self._right if side == "right" else self._left
        if m < arr.size:
            return
        new_size = arr.size
        while new_size <= m:
            new_size *= 2
        rng = self._rng_right if side == "right" else self._rng_left
        inc = rng.standard_normal(new_size - arr.size) * math.sqrt(self.h)
        ext = arr[-1] + np.cumsum(inc)
        arr = np.concatenate([arr, ext])
        if side == "right":
            self._right = arr
        else:
            self._left = arr

    def right_values(self, m: int) -> np.ndarray:
        self._grow("right", m)
        return self._right[: m + 1]

    def left_values(self, m: int) -> np.ndarray:
        self._grow("left", m)
        return self._left[: m + 1]


def sample_brownian(resolution: int, extent: float, seed: int) -> BrownianPath:
    """Two-sided path covering [-extent, extent] at the given resolution."""
    return BrownianPath(resolution, seed, extent)


# -- classical Arcsine functionals ----------------------------------------


def occupation_time_positive(path: BrownianPath, t: float = 1.0) -> float:
    """Grid version of the time spent above 0 before t (left endpoints)."""
    m = int(round(t * path.resolution))
    v = path.right_values(m)
    return path.h * int(np.count_nonzero(v[:m] > 0))


def _zero_marks(v: np.ndarray, m: int) -> np.ndarray:
    """Left endpoints k < m where the path is 0 or changes sign over [k, k+1]."""
    pos = v > 0
    return (v[:m] == 0) | (pos[:m] != pos[1 : m + 1])


def last_zero(path: BrownianPath, t: float = 1.0) -> float:
    """Largest grid time < t at which the path is 0 or changes sign."""
    m = int(round(t * path.resolution))
    v = path.right_values(m)
    marks = np.flatnonzero(_zero_marks(v, m))
    if marks.size == 0:
        return 0.0
    return float(marks[-1]) * path.h


def occupation_before(path: BrownianPath, t: float) -> float:
    """Time spent above 0 on [0, t) for a grid time t."""
    j = int(round(t * path.resolution))
    v = path.right_values(max(j, 1))
    return path.h * int(np.count_nonzero(v[:j] > 0))


def composite_sample(path: BrownianPath, eps_coin: int) -> float:
    """Occupation time up to the last zero, plus the stub on a fair coin."""
    g1 = last_zero(path)
    return occupation_before(path, g1) + eps_coin * (1.0 - g1)


def dstar_of_brownian(path: BrownianPath) -> FunctionalReport:
    """Record/valley functionals of the Brownian path (t-units = grid time)."""
    return functionals.theoretical_position(path)


# -- local time proxy and the subordinator identity -----------------------


def local_time_estimate(path: BrownianPath, t: float = 1.0) -> float:
    """Local time at 0 up to t, proxied by the scaled sign-change count."""
    m = int(round(t * path.resolution))
    v = path.right_values(m)
    pos = v > 0
    changes = int(np.count_nonzero(pos[:m] != pos[1 : m + 1]))
    return SIGN_CHANGE_LOCAL_TIME_COEFF * math.sqrt(path.h) * changes


def inverse_local_time_proxy(path: BrownianPath, level: float) -> float | None:
    """Last zero before the local-time proxy reaches `level`.

    Returns None when the local-time proxy does not reach the level within
    the window cap (a capped sample, to be excluded and counted).
    """
    coeff = SIGN_CHANGE_LOCAL_TIME_COEFF * math.sqrt(path.h)
    needed = int(math.ceil(level / coeff))
    m = 2 * path.resolution
    while True:
        v = path.right_values(m)
        pos = v > 0
        change = pos[:m] != pos[1 : m + 1]
        count = np.cumsum(change)
        hit = np.flatnonzero(count >= needed)
        if hit.size:
            k = int(hit[0])  # change over [k, k+1] pushes the proxy to level
            return (k + 1) * path.h
        if m >= path.max_window:
            return None
        m = min(2 * m, path.max_window)


def occupation_pair(path: BrownianPath, t: float) -> tuple[float, float]:
    """(time above 0, time at-or-below 0) on [0, t); the pair sums to t."""
    j = int(round(t * path.resolution))
    v = path.right_values(max(j, 1))
    up = int(np.count_nonzero(v[:j] > 0))
    return path.h * up, path.h * (j - up)


def first_passage_time(path: BrownianPath, level: float, side: str) -> float | None:
    """First grid time the path reaches `level` on the given side, or None
    if the window cap is exhausted first."""
    m = 2 * path.resolution
    while True:
        v = path.side_values(side, m)
        hits = np.flatnonzero(v >= level)
        if hits.size:
            return int(hits[0]) * path.h
        if m >= path.max_window:
            return None
        m = min(2 * m, path.max_window)


@dataclass
class KeyIdentityReport:
    """Two-sample comparison of (A+_tau, A-_tau) against (T+, T-)/4."""

    replicas: int
    level: float
    resolution: int
    capped_occupation: int
    capped_passage: int
    ks_plus: float
    ks_minus: float
    ks_sum: float


def keyidentity_check(
    seed: int,
    replicas: int,
    resolution: int = 2**16,
    level: float = 1.0,
) -> KeyIdentityReport:
    """Empirical check of the occupation/first-passage identity in law.

    Samples A+-occupation times at an inverse-local-time proxy from one
    family of paths, and first-passage times (divided by 4) from an
    independent family, then reports marginal and summed two-sample KS
    distances.  Capped paths are excluded and counted.

    Both pools are censored by the same event in law: the occupation side
    drops paths whose proxy tau exceeds the window cap, so the passage side
    gets a 4x wider window and drops pairs with (T+ + T-)/4 beyond the same
    cap.  Mismatched censoring would otherwise bias the comparison no
    matter the resolution.
    """
    from .stats import two_sample_ks

    if replicas < 10**3:
        raise ValueError(f"need at least 1000 replicas, got {replicas}")
    a_plus, a_minus = [], []
    t_plus, t_minus = [], []
    capped_occ = capped_pass = 0
    for r in range(replicas):
        p1 = BrownianPath(resolution, _derived_seed(seed, r, 0), extent=2.0)
        tau = inverse_local_time_proxy(p1, level)
        if tau is None:
            capped_occ += 1
        else:
            up, down = occupation_pair(p1, tau)
            a_plus.append(up)
            a_minus.append(down)
        p2 = BrownianPath(resolution, _derived_seed(seed, r, 1), extent=2.0)
        p2.max_window = 4 * WINDOW_CAP_UNITS * resolution
        tp = first_passage_time(p2, level, "right")
        tm = first_passage_time(p2, level, "left")
        if tp is None or tm is None or (tp + tm) / 4.0 > WINDOW_CAP_UNITS:
            capped_pass += 1
        else:
            t_plus.append(tp)
            t_minus.append(tm)
    a_plus = np.array(a_plus)
    a_minus = np.array(a_minus)
    t_plus = np.array(t_plus) / 4.0
    t_minus = np.array(t_minus) / 4.0
    return KeyIdentityReport(
        replicas=replicas,
        level=level,
        resolution=resolution,
        capped_occupation=capped_occ,
        capped_passage=capped_pass,
        ks_plus=two_sample_ks(a_plus, t_plus),
        ks_minus=two_sample_ks(a_minus, t_minus),
        ks_sum=two_sample_ks(a_plus + a_minus, t_plus + t_minus),
    )


def _derived_seed(seed: int, replica: int, label: int) -> int:
    ss = np.random.SeedSequence([int(seed), int(replica), int(label)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


# -- batch pool samplers ---------------------------------------------------


def occupation_pool(resolution: int, replicas: int, seed: int) -> np.ndarray:
    """Pool of A+_1 samples, generated in chunks."""
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 20]))
    h = 1.0 / resolution
    out = np.empty(replicas)
    done = 0
    chunk = max(1, min(replicas, 2**24 // resolution))
    while done < replicas:
        c = min(chunk, replicas - done)
        inc = rng.standard_normal((c, resolution)) * math.sqrt(h)
        v = np.cumsum(inc, axis=1)
        # left endpoints: B(0)=0 counts non-positive, so count v[:, :-1] > 0
        counts = 0 + (v[:, :-1] > 0).sum(axis=1)
        out[done : done + c] = counts * h
        done += c
    return out


def last_zero_pool(resolution: int, replicas: int, seed: int) -> np.ndarray:
    """Pool of g_1 samples."""
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 21]))
    h = 1.0 / resolution
    out = np.empty(replicas)
    done = 0
    chunk = max(1, min(replicas, 2**24 // resolution))
    while done < replicas:
        c = min(chunk, replicas - done)
        inc = rng.standard_normal((c, resolution)) * math.sqrt(h)
        v = np.zeros((c, resolution + 1))
        np.cumsum(inc, axis=1, out=v[:, 1:])
        pos = v > 0
        marks = (v[:, :-1] == 0) | (pos[:, :-1] != pos[:, 1:])
        rev = marks[:, ::-1]
        last = resolution - 1 - np.argmax(rev, axis=1)
        last[~marks.any(axis=1)] = 0
        out[done : done + c] = last * h
        done += c
    return out


def composite_pool(resolution: int, replicas: int, seed: int) -> np.ndarray:
    """Pool of A+_{g_1} + coin * (1 - g_1) samples."""
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 22]))
    coin_rng = np.random.default_rng(np.random.SeedSequence([int(seed), 23]))
    h = 1.0 / resolution
    out = np.empty(replicas)
    done = 0
    chunk = max(1, min(replicas, 2**24 // resolution))
    while done < replicas:
        c = min(chunk, replicas - done)
        inc = rng.standard_normal((c, resolution)) * math.sqrt(h)
        v = np.zeros((c, resolution + 1))
        np.cumsum(inc, axis=1, out=v[:, 1:])
        pos = v > 0
        marks = (v[:, :-1] == 0) | (pos[:, :-1] != pos[:, 1:])
        rev = marks[:, ::-1]
        last = resolution - 1 - np.argmax(rev, axis=1)
        last[~marks.any(axis=1)] = 0
        cum_up = np.cumsum(pos[:, :-1], axis=1)
        rows = np.arange(c)
        a_g1 = np.where(last > 0, cum_up[rows, np.maximum(last - 1, 0)], 0) * h
        coin = coin_rng.integers(0, 2, size=c)
        out[done : done + c] = a_g1 + coin * (1.0 - last * h)
        done += c
    return out


@dataclass
class DstarPool:
    """d*-related samples over many independent Brownian paths."""

    dstar: np.ndarray
    ybar: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    unresolved: int

    @property
    def replicas(self) -> int:
        return self.dstar.size + self.unresolved


def dstar_pool(resolution: int, replicas: int, seed: int) -> DstarPool:
    """Pool of d*, ybar, alpha, beta over independent paths.

    Unresolved paths (window cap hit before alpha/beta returned) are
    excluded from the arrays and counted.
    """
    ds, ys, al, be = [], [], [], []
    unresolved = 0
    for r in range(replicas):
        path = BrownianPath(resolution, _derived_seed(seed, r, 2), extent=2.0)
        rep = dstar_of_brownian(path)
        if not rep.resolved:
            unresolved += 1
            continue
        ds.append(rep.dstar)
        ys.append(rep.ybar)
        al.append(rep.alpha)
        be.append(rep.beta)
    return DstarPool(np.array(ds), np.array(ys), np.array(al), np.array(be), unresolved)
