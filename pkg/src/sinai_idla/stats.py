"""Reference distributions, ECDF distances and moment summaries.

No p-values anywhere: acceptance thresholds are fixed statistic values
calibrated by self-consistency runs, so no asymptotic-distribution table is
embedded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Arcsine moments on [0, 1].
ARCSINE_MEAN = 0.5
ARCSINE_VARIANCE = 0.125


@dataclass
class SamplePool:
    """Tagged collection of scalar samples with a declared support."""

    label: str
    values: np.ndarray
    support: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.size == 0:
            raise ValueError(f"pool {self.label!r} is empty")
        lo, hi = self.support
        if self.values.min() < lo or self.values.max() > hi:
            raise ValueError(f"pool {self.label!r} has values outside {self.support}")

    @property
    def count(self) -> int:
        return self.values.size

    @property
    def mean(self) -> float:
        return float(self.values.mean())

    @property
    def var(self) -> float:
        return float(self.values.var())


def arcsine_cdf(x):
    """(2/pi) arcsin(sqrt(x)) on [0, 1]."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x > 1):
        raise ValueError("arcsine_cdf domain is [0, 1]")
    out = (2.0 / math.pi) * np.arcsin(np.sqrt(x))
    return float(out) if out.ndim == 0 else out


def arcsine_density(x):
    """1 / (pi sqrt(x (1 - x))) on (0, 1)."""
    x = np.asarray(x, dtype=float)
    out = 1.0 / (math.pi * np.sqrt(x * (1.0 - x)))
    return float(out) if out.ndim == 0 else out


def half_normal_cdf(y):
    """CDF of |Z| for Z standard normal: 2 Phi(y) - 1, y >= 0."""
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise ValueError("half_normal_cdf domain is [0, inf)")
    from scipy.special import erf

    out = erf(y / math.sqrt(2.0))
    return float(out) if out.ndim == 0 else out


def ks_statistic(values: np.ndarray, cdf) -> float:
    """One-sample KS: sup-norm between the ECDF and an analytic CDF.

    Evaluated at the sample points with both one-sided gaps (the standard
    exact algorithm for the sup of the difference).
    """
    x = np.sort(np.asarray(values, dtype=float))
    if x.size == 0:
        raise ValueError("empty sample")
    n = x.size
    f = cdf(x)
    upper = np.arange(1, n + 1) / n - f
    lower = f - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))


def two_sample_ks(a: np.ndarray, b: np.ndarray) -> float:
    """Two-sample KS: sup-norm between the two right-continuous ECDFs."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ValueError("empty sample")
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.abs(fa - fb).max())


def tv_distance_discrete(a: np.ndarray, b: np.ndarray) -> float:
    """Total variation distance between empirical laws on integer support."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.size == 0 or b.size == 0:
        raise ValueError("empty sample")
    lo = min(a.min(), b.min())
    hi = max(a.max(), b.max())
    pa = np.bincount(a - lo, minlength=hi - lo + 1) / a.size
    pb = np.bincount(b - lo, minlength=hi - lo + 1) / b.size
    return float(0.5 * np.abs(pa - pb).sum())


def pool_report(pool: SamplePool, references: dict | None = None, pairwise: dict | None = None) -> dict:
    """JSON-ready summary of one pool.

    references maps a name like "arcsine" to an analytic CDF; pairwise maps
    labels of other pools to their value arrays.
    """
    report = {
        "pool_label": pool.label,
        "n": pool.count,
        "mean": pool.mean,
        "var": pool.var,
    }
    for name, cdf in (references or {}).items():
        report[f"ks_vs_{name}"] = ks_statistic(pool.values, cdf)
    if pairwise:
        report["pairwise_ks"] = {
            label: two_sample_ks(pool.values, other) for label, other in pairwise.items()
        }
    return report
