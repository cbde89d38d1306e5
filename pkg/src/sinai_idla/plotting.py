"""Figure rendering for the CLI report paths.

Each report figure goes to a PNG file next to the delimited output; nothing
here is interactive.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import stats


def pool_figure(values: np.ndarray, label: str, out_path, reference: str | None = "arcsine"):
    """Histogram plus ECDF of a sample pool, with the analytic reference."""
    fig, (ax_h, ax_c) = plt.subplots(1, 2, figsize=(9, 3.6))
    ax_h.hist(values, bins=50, density=True, color="steelblue", alpha=0.75)
    x = np.sort(np.asarray(values, dtype=float))
    ax_c.step(x, np.arange(1, x.size + 1) / x.size, where="post", label="empirical")
    if reference == "arcsine":
        grid = np.linspace(1e-4, 1 - 1e-4, 400)
        ax_h.plot(grid, stats.arcsine_density(grid), "k--", lw=1, label="arcsine density")
        ax_c.plot(grid, stats.arcsine_cdf(grid), "k--", lw=1, label="arcsine CDF")
    elif reference == "half_normal":
        grid = np.linspace(0, max(x.max(), 1e-6), 400)
        ax_c.plot(grid, stats.half_normal_cdf(grid), "k--", lw=1, label="half-normal CDF")
    ax_h.set_xlabel(label)
    ax_h.set_ylabel("density")
    ax_c.set_xlabel(label)
    ax_c.set_ylabel("CDF")
    ax_c.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=130)
    plt.close(fig)


def trajectory_figure(rows, out_path):
    """d_n/n against n (log scale) for each explored environment."""
    by_env = {}
    for env_i, n, _g, _d, ratio in rows:
        by_env.setdefault(env_i, []).append((n, ratio))
    fig, ax = plt.subplots(figsize=(7, 4))
    for env_i, pts in sorted(by_env.items()):
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], lw=0.9, alpha=0.8)
    ax.set_xscale("log", base=2)
    ax.set_ylim(-0.02, 1.02)
    ax.set_xlabel("n")
    ax.set_ylabel("d_n / n")
    fig.tight_layout()
    fig.savefig(out_path, dpi=130)
    plt.close(fig)
