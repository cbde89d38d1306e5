"""Random environments for one-dimensional walks in random environment.

An environment is a two-sided i.i.d. collection of transition probabilities
omega(i), i in Z, together with the associated potential

    V(0) = 0,
    V(i) = sum_{k=1}^{i} log rho(k)        for i >= 1,
    V(i) = -sum_{k=i+1}^{0} log rho(k)     for i <= -1,

where rho(i) = (1 - omega(i)) / omega(i).  Sites are generated lazily on
both sides from two independent deterministic streams derived from a single
master seed, so that extending the windows in any interleaved order always
produces the same values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Labels for the per-side substreams of the master seed.
_RIGHT_STREAM = 1
_LEFT_STREAM = 2

# log rho(0) has the logistic distribution when omega is uniform on (0,1);
# its variance is pi^2 / 3.
LOGISTIC_VARIANCE = math.pi**2 / 3.0


@dataclass(frozen=True)
class EnvironmentLaw:
    """Marginal law of a single omega(i).

    kind "uniform": omega uniform on (delta, 1 - delta), 0 <= delta < 0.5.
    kind "two_point": omega in {p, 1 - p} equiprobable, 0 < p < 1.

    Both choices satisfy E[log rho] = 0 (by the rho <-> 1/rho symmetry for
    the uniform case, by the +/- log((1-p)/p) symmetry for the two-point
    case) and have finite second log-rho moment.
    """

    kind: str
    delta: float = 0.0
    p: float = 0.5

    def __post_init__(self):
        if self.kind not in ("uniform", "two_point"):
            raise ValueError(f"unknown environment law kind: {self.kind!r}")
        if self.kind == "uniform":
            if not (0.0 <= self.delta < 0.5):
                raise ValueError(f"uniform law needs 0 <= delta < 0.5, got {self.delta}")
        else:
            if not (0.0 < self.p < 1.0):
                raise ValueError(f"two_point law needs 0 < p < 1, got {self.p}")

    @property
    def description(self) -> str:
        if self.kind == "uniform":
            return f"omega ~ Uniform({self.delta}, {1 - self.delta})"
        return f"omega in {{{self.p}, {1 - self.p}}} equiprobable"

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw `size` i.i.d. omega values."""
        if self.kind == "uniform":
            return rng.uniform(self.delta, 1.0 - self.delta, size)
        vals = np.where(rng.random(size) < 0.5, self.p, 1.0 - self.p)
        return vals


def _side_rng(master_seed: int, label: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), label]))


@dataclass
class Environment:
    """Lazily extended two-sided random environment.

    Right window holds omega(i) for i >= 1, left window holds omega(i) for
    i <= 0.  Each side grows geometrically from its own substream of the
    master seed; previously generated values never change.
    """

    law: EnvironmentLaw
    master_seed: int
    _rng_right: np.random.Generator = field(init=False, repr=False)
    _rng_left: np.random.Generator = field(init=False, repr=False)
    # omega(1), omega(2), ... and omega(0), omega(-1), omega(-2), ...
    _omega_right: np.ndarray = field(init=False, repr=False)
    _omega_left: np.ndarray = field(init=False, repr=False)
    # prefix sums: _v_right[i-1] = V(i) for i >= 1; _v_left[m-1] = V(-m) for m >= 1
    _v_right: np.ndarray = field(init=False, repr=False)
    _v_left: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self._rng_right = _side_rng(self.master_seed, _RIGHT_STREAM)
        self._rng_left = _side_rng(self.master_seed, _LEFT_STREAM)
        self._omega_right = np.empty(0)
        self._omega_left = np.empty(0)
        self._v_right = np.empty(0)
        self._v_left = np.empty(0)

    # -- window management -------------------------------------------------

    def _extend(self, side: str, need: int) -> None:
        omega = self._omega_right if side == "right" else self._omega_left
        if need <= omega.size:
            return
        new_size = max(16, omega.size)
        while new_size < need:
            new_size *= 2
        rng = self._rng_right if side == "right" else self._rng_left
        fresh = self.law.draw(rng, new_size - omega.size)
        omega = np.concatenate([omega, fresh])
        logrho = np.log1p(-omega) - np.log(omega)
        if side == "right":
            self._omega_right = omega
            # V(i) = sum_{k=1}^{i} log rho(k)
            self._v_right = np.cumsum(logrho)
        else:
            self._omega_left = omega
            # V(-m) = -(log rho(0) + ... + log rho(-m+1))
            self._v_left = -np.cumsum(logrho)

    def ensure_right(self, i: int) -> None:
        """Make omega and V available for all indices up to i >= 1."""
        self._extend("right", i)

    def ensure_left(self, i: int) -> None:
        """Make omega and V available for all indices down to -i (i >= 0)."""
        self._extend("left", i + 1)

    # -- point queries -----------------------------------------------------

    def omega(self, i: int) -> float:
        if i >= 1:
            self._extend("right", i)
            return float(self._omega_right[i - 1])
        self._extend("left", 1 - i)
        return float(self._omega_left[-i])

    def log_rho(self, i: int) -> float:
        w = self.omega(i)
        return math.log1p(-w) - math.log(w)

    def potential(self, i: int) -> float:
        """V(i) in log-units; V(0) = 0 exactly."""
        if i == 0:
            return 0.0
        if i >= 1:
            self._extend("right", i)
            return float(self._v_right[i - 1])
        self._extend("left", -i)
        return float(self._v_left[-i - 1])

    def renormalized_potential(self, n: int, t: float) -> float:
        """V(floor(n t)) / sqrt(n)."""
        if n < 1:
            raise ValueError(f"scale n must be >= 1, got {n}")
        return self.potential(math.floor(n * t)) / math.sqrt(n)

    # -- array queries -----------------------------------------------------

    def potential_right(self, m: int) -> np.ndarray:
        """Array [V(0), V(1), ..., V(m)]."""
        self._extend("right", max(m, 1))
        out = np.empty(m + 1)
        out[0] = 0.0
        out[1:] = self._v_right[:m]
        return out

    def potential_left(self, m: int) -> np.ndarray:
        """Array [V(0), V(-1), ..., V(-m)]."""
        self._extend("left", max(m, 1))
        out = np.empty(m + 1)
        out[0] = 0.0
        out[1:] = self._v_left[:m]
        return out

    def omega_window(self, lo: int, hi: int) -> np.ndarray:
        """Array of omega(i) for lo <= i <= hi."""
        return np.array([self.omega(i) for i in range(lo, hi + 1)])


def make_environment(law: EnvironmentLaw, master_seed: int) -> Environment:
    """Fresh environment with empty windows, extendable both ways."""
    return Environment(law, master_seed)
