"""Path functionals shared by renormalized potentials and Brownian paths.

Everything here operates on a two-sided discrete path through a small
adapter protocol (values at integer indices, a number of steps per unit of
time, and a maximum window).  Positions are kept in exact integer index
units internally and converted to time units (index / steps_per_unit) only
at the end.

Discrete conventions, frozen here and in the unit tests:
  - T_y is the first index attaining v >= y, on each side separately.
  - The critical level ybar is the largest record level y (of either side)
    with T_y^+ + T_y^- within the one-unit budget; a level one side never
    attains inside the budget is infeasible.  Both sides start with the
    record (0, v(0)), so the budget condition always has a solution.
  - alpha and beta scan t over positive grid steps only (t = 0 would
    trivially qualify and force alpha identically 0).
  - An alpha = beta tie makes the indicator in d* evaluate false.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .env import Environment

# Window growth stops at this many indices per side, in units of
# steps_per_unit (i.e. 64 time units).
WINDOW_CAP_UNITS = 64

RIGHT = "right"
LEFT = "left"


class DiscretePath:
    """Adapter protocol for a two-sided discrete path with v(0) known.

    Subclasses provide right_values / left_values returning inclusive value
    arrays (left_values(m)[k] is v(-k)), plus steps_per_unit and max_window.
    """

    steps_per_unit: int
    max_window: int

    def right_values(self, m: int) -> np.ndarray:
        raise NotImplementedError

    def left_values(self, m: int) -> np.ndarray:
        raise NotImplementedError

    def side_values(self, side: str, m: int) -> np.ndarray:
        return self.right_values(m) if side == RIGHT else self.left_values(m)

    def values(self, ilo: int, ihi: int) -> np.ndarray:
        """v(i) for ilo <= i <= ihi (both sides allowed)."""
        if ilo > ihi:
            return np.empty(0)
        parts = []
        if ilo < 0:
            left = self.left_values(-ilo)
            hi_neg = min(ihi, -1)
            # v(ilo..hi_neg) in increasing i order
            parts.append(left[-hi_neg : -ilo + 1][::-1])
        if ihi >= 0:
            right = self.right_values(ihi)
            parts.append(right[max(ilo, 0) :])
        return np.concatenate(parts) if len(parts) > 1 else parts[0]


class PotentialProfile(DiscretePath):
    """The renormalized potential V(i)/sqrt(n) of an environment at scale n."""

    def __init__(self, environment: Environment, n: int):
        if n < 1:
            raise ValueError(f"scale n must be >= 1, got {n}")
        self.environment = environment
        self.n = n
        self.steps_per_unit = n
        self.max_window = WINDOW_CAP_UNITS * n
        self._scale = 1.0 / math.sqrt(n)

    def right_values(self, m: int) -> np.ndarray:
        return self.environment.potential_right(m) * self._scale

    def left_values(self, m: int) -> np.ndarray:
        return self.environment.potential_left(m) * self._scale


class ArrayPath(DiscretePath):
    """Fixed-array path, mostly for tests and synthetic witnesses."""

    def __init__(self, right: np.ndarray, left: np.ndarray, steps_per_unit: int):
        right = np.asarray(right, dtype=float)
        left = np.asarray(left, dtype=float)
        if right[0] != left[0]:
            raise ValueError("right[0] and left[0] must both equal v(0)")
        self._right = right
        self._left = left
        self.steps_per_unit = steps_per_unit
        self.max_window = min(right.size, left.size) - 1

    def right_values(self, m: int) -> np.ndarray:
        if m >= self._right.size:
            raise WindowExhausted(f"right window has {self._right.size} values, need {m + 1}")
        return self._right[: m + 1]

    def left_values(self, m: int) -> np.ndarray:
        if m >= self._left.size:
            raise WindowExhausted(f"left window has {self._left.size} values, need {m + 1}")
        return self._left[: m + 1]


class WindowExhausted(RuntimeError):
    """A fixed-size path was asked for values beyond its window."""


@dataclass
class RecordSequence:
    """Strictly increasing record levels with their first-attainment indices."""

    levels: np.ndarray
    indices: np.ndarray
    steps_per_unit: int

    @property
    def times(self) -> np.ndarray:
        return self.indices / self.steps_per_unit

    def first_passage_index(self, y: float) -> int | None:
        """T_y in index units: first index with v >= y, None if beyond records."""
        k = int(np.searchsorted(self.levels, y, side="left"))
        if k == self.levels.size:
            return None
        return int(self.indices[k])


def _records_of(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    rmax = np.maximum.accumulate(values)
    jumps = np.flatnonzero(np.diff(rmax) > 0) + 1
    idx = np.concatenate([[0], jumps])
    return rmax[idx], idx


def ascending_records(path: DiscretePath, side: str, window: int | None = None) -> RecordSequence:
    """Running-maximum records of one side, scanning outward from 0."""
    if window is None:
        window = min(path.steps_per_unit + 1, path.max_window)
    levels, idx = _records_of(path.side_values(side, window))
    return RecordSequence(levels, idx, path.steps_per_unit)


@dataclass
class CriticalLevel:
    ybar: float
    i_plus: int
    i_minus: int
    level_plus: float
    level_minus: float
    steps_per_unit: int
    resolved: bool

    @property
    def t_plus(self) -> float:
        return self.i_plus / self.steps_per_unit

    @property
    def t_minus(self) -> float:
        return self.i_minus / self.steps_per_unit


def _first_passage_or_beyond(recs: RecordSequence, levels: np.ndarray, beyond: int) -> np.ndarray:
    """Vectorized T_y for each candidate level; `beyond` where never attained."""
    k = np.searchsorted(recs.levels, levels, side="left")
    inside = k < recs.levels.size
    return np.where(inside, recs.indices[np.minimum(k, recs.levels.size - 1)], beyond)


def critical_level(path: DiscretePath) -> CriticalLevel:
    """Largest level whose two-sided first-passage indices fit the budget.

    The budget condition T_y^+ + T_y^- <= 1 is evaluated in index units as
    i+ + i- <= steps_per_unit.  Every feasible level has both first-passage
    indices inside the budget, so a window of `budget` indices per side
    already determines ybar exactly; resolved is False only when the path
    cannot supply that window.
    """
    budget = path.steps_per_unit
    window = min(budget, path.max_window)
    recs_r = ascending_records(path, RIGHT, window)
    recs_l = ascending_records(path, LEFT, window)
    candidates = np.union1d(recs_r.levels, recs_l.levels)
    idx_p = _first_passage_or_beyond(recs_r, candidates, budget + 1)
    idx_m = _first_passage_or_beyond(recs_l, candidates, budget + 1)
    feasible = np.flatnonzero(idx_p + idx_m <= budget)
    top = feasible[-1]
    ybar = float(candidates[top])
    i_plus = int(idx_p[top])
    i_minus = int(idx_m[top])
    # v at the first-passage points: the record level reached there (>= ybar,
    # with equality on at least the side whose record set ybar).
    kp = int(np.searchsorted(recs_r.levels, ybar, side="left"))
    km = int(np.searchsorted(recs_l.levels, ybar, side="left"))
    return CriticalLevel(
        ybar,
        i_plus,
        i_minus,
        float(recs_r.levels[kp]),
        float(recs_l.levels[km]),
        path.steps_per_unit,
        window >= budget,
    )


def excursion_lengths(path: DiscretePath, crit: CriticalLevel) -> tuple[float, float, bool]:
    """(alpha, beta, resolved): return times of the excursions below the
    running maximum just beyond T+ and T-, in time units.

    A scan that exhausts the window cap still bounds its excursion from
    below by the scanned span; when the other side returned within that
    span, the comparison alpha vs beta (and their minimum) is already
    determined, so the capped length is reported as +inf instead of
    discarding the path.
    """
    alpha, ok_a = _return_time(path, RIGHT, crit.i_plus, crit.level_plus)
    beta, ok_b = _return_time(path, LEFT, crit.i_minus, crit.level_minus)
    if ok_a != ok_b:
        capped_base = crit.i_minus if ok_a else crit.i_plus
        span = (path.max_window - capped_base) / path.steps_per_unit
        finite = alpha if ok_a else beta
        if finite < span:
            if ok_a:
                beta = math.inf
            else:
                alpha = math.inf
            return alpha, beta, True
    return alpha, beta, ok_a and ok_b


def _return_time(path, side, base_idx, level) -> tuple[float, bool]:
    window = min(max(2 * path.steps_per_unit, 2 * base_idx + 2), path.max_window)
    while True:
        vals = path.side_values(side, window)
        seg = vals[base_idx + 1 :]
        hits = np.flatnonzero(seg >= level)
        if hits.size:
            return (int(hits[0]) + 1) / path.steps_per_unit, True
        if window >= path.max_window:
            return math.nan, False
        window = min(2 * window, path.max_window)


@dataclass
class FunctionalReport:
    """All §-free path functionals of one path at one scale."""

    ybar: float
    t_plus: float
    t_minus: float
    alpha: float
    beta: float
    dstar: float
    gstar: float
    resolved: bool
    b_plus: bool | None = None
    b_minus: bool | None = None
    c_plus: bool | None = None
    c_minus: bool | None = None


def theoretical_position(path: DiscretePath) -> FunctionalReport:
    """Compose records -> ybar -> excursions -> d*.

    d* = T+ + 1_{alpha > beta} (1 - (T+ + T-)); g* = d* - 1.
    """
    crit = critical_level(path)
    alpha, beta, exc_ok = excursion_lengths(path, crit)
    tp, tm = crit.t_plus, crit.t_minus
    indicator = bool(alpha > beta) if exc_ok else False
    dstar = tp + (1.0 - (tp + tm) if indicator else 0.0)
    return FunctionalReport(
        ybar=crit.ybar,
        t_plus=tp,
        t_minus=tm,
        alpha=alpha,
        beta=beta,
        dstar=dstar,
        gstar=dstar - 1.0,
        resolved=crit.resolved and exc_ok,
    )


def _sup_over(path: DiscretePath, lo: float, hi: float) -> float:
    """sup of the step path over the time interval [lo, hi] (-inf if empty)."""
    n = path.steps_per_unit
    ilo = math.floor(n * lo)
    ihi = math.floor(n * hi)
    if ilo > ihi:
        return -math.inf
    ilo = max(ilo, -path.max_window)
    ihi = min(ihi, path.max_window)
    vals = path.values(ilo, ihi)
    return float(vals.max())


def good_event_flags(
    path: DiscretePath,
    eps: float,
    report: FunctionalReport | None = None,
) -> tuple[bool, bool, bool, bool]:
    """Literal evaluation of the barrier events (B+, B-, C+, C-).

    B+ : a barrier of height ybar + n^(1/3)/sqrt(n) just left of the beta
         excursion, and beta < eps.
    B- : the symmetric barrier beyond the alpha excursion, and alpha < eps.
    C+ : no comparable obstacle strictly inside (-T- + eps, 0].
    C- : no comparable obstacle inside [0, T+ - eps).
    """
    if report is None:
        report = theoretical_position(path)
    if not report.resolved:
        return False, False, False, False
    n = path.steps_per_unit
    margin = n ** (1.0 / 3.0) / math.sqrt(n)
    up = report.ybar + margin
    down = report.ybar - margin
    tp, tm, a, b = report.t_plus, report.t_minus, report.alpha, report.beta
    b_plus = (b < eps) and (_sup_over(path, -tm - b - eps, -tm - b) >= up)
    b_minus = (a < eps) and (_sup_over(path, tp + a, tp + a + eps) >= up)
    c_plus = _sup_over(path, -tm + eps, 0.0) <= down
    c_minus = _sup_over(path, 0.0, tp - eps) <= down
    return b_plus, b_minus, c_plus, c_minus


def full_report(path: DiscretePath, eps: float) -> FunctionalReport:
    """theoretical_position plus the four good-event flags."""
    report = theoretical_position(path)
    bp, bm, cp, cm = good_event_flags(path, eps, report)
    report.b_plus, report.b_minus, report.c_plus, report.c_minus = bp, bm, cp, cm
    return report
