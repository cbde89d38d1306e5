"""Command line interface.

Subcommands: simulate, localization, quenched-explore, oracle-compare,
brownian-identities, good-events, functionals.  Sample-level data goes to
CSV, summary reports to JSON, and (unless --no-plot) a rendered figure is
written alongside the delimited output.  The seed is mandatory: there is no
wall-clock default, so identical configs give byte-identical outputs.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import experiments, plotting
from .env import EnvironmentLaw


@dataclass
class RunConfig:
    subcommand: str
    law: EnvironmentLaw | None
    n: int
    replicas: int
    seed: int
    eps: float
    resolution: int
    checkpoints: list[int] | None
    workers: int
    out: Path
    step_cap: int
    plot: bool


def _law_from_args(args) -> EnvironmentLaw:
    if args.law == "uniform":
        return EnvironmentLaw("uniform", delta=args.delta)
    return EnvironmentLaw("two_point", p=args.p)


def _add_common(p, law=True, n=True, eps=False, resolution=False):
    if law:
        p.add_argument("--law", choices=["uniform", "two_point"], default="uniform")
        p.add_argument("--delta", type=float, default=0.0,
                       help="uniform law: omega ~ U(delta, 1-delta)")
        p.add_argument("--p", type=float, default=0.3,
                       help="two-point law: omega in {p, 1-p}")
    if n:
        p.add_argument("--n", type=int, required=True, help="number of particles / scale")
    p.add_argument("--replicas", type=int, default=1000)
    p.add_argument("--seed", type=int, required=True)
    if eps:
        p.add_argument("--eps", type=float, default=0.1)
    if resolution:
        p.add_argument("--resolution", type=int, default=2**16,
                       help="grid points per unit time")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, required=True, help="CSV output path")
    p.add_argument("--no-plot", dest="plot", action="store_false",
                   help="skip the rendered figure next to the CSV")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sinai-idla",
                                 description="IDLA clusters grown by walks in random environment")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("simulate", help="annealed cluster growth, d_n/n pool vs Arcsine")
    _add_common(p)
    p.add_argument("--checkpoints", type=str, default=None,
                   help="comma-separated particle counts to record")

    p = sub.add_parser("localization", help="d_n/n against the theoretical position d*")
    _add_common(p, eps=True)

    p = sub.add_parser("quenched-explore",
                       help="one long growth per environment, checkpoints at powers of 2")
    _add_common(p)

    p = sub.add_parser("oracle-compare",
                       help="exact sampler vs step-by-step IDLA in one environment")
    _add_common(p)
    p.add_argument("--step-cap", type=int, default=10**7)

    p = sub.add_parser("brownian-identities",
                       help="Arcsine identities of the Brownian functionals")
    _add_common(p, law=False, n=False, resolution=True)

    p = sub.add_parser("good-events", help="frequency of the good-environment events")
    _add_common(p, eps=True)

    p = sub.add_parser("functionals", help="per-environment path functional table")
    _add_common(p, eps=True)
    return ap


def _write_csv(path: Path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(x)) if isinstance(x, float) else x for x in row])


def _write_json(path: Path, report: dict):
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _sidecar(out: Path, suffix: str) -> Path:
    return out.with_suffix(suffix)


def _cmd_simulate(args) -> int:
    cps = None
    if args.checkpoints:
        cps = [int(tok) for tok in args.checkpoints.split(",")]
    law = _law_from_args(args)
    res = experiments.run_simulate(law, args.n, args.replicas, args.seed,
                                   checkpoints=cps, workers=args.workers)
    _write_csv(args.out, ["replica", "n", "g_n", "d_n", "d_over_n"], res.rows())
    _write_json(_sidecar(args.out, ".json"), res.report())
    if args.plot:
        plotting.pool_figure(res.edge_pool().values, "d_n / n", _sidecar(args.out, ".png"))
    return 0


def _cmd_localization(args) -> int:
    law = _law_from_args(args)
    res = experiments.run_localization(law, args.n, args.replicas, args.seed,
                                       args.eps, workers=args.workers)
    _write_csv(args.out, ["replica", "d_over_n", "dstar", "resolved"],
               [(r, dn, ds, int(ok)) for r, dn, ds, ok in res.rows])
    _write_json(_sidecar(args.out, ".json"), res.report())
    if args.plot:
        import numpy as np
        gaps = np.array([abs(dn - ds) for _, dn, ds, ok in res.rows if ok])
        plotting.pool_figure(gaps, "|d_n/n - d*|", _sidecar(args.out, ".png"), reference=None)
    return 0


def _cmd_quenched_explore(args) -> int:
    law = _law_from_args(args)
    res = experiments.run_quenched_explore(law, args.n, args.replicas, args.seed,
                                           workers=args.workers)
    _write_csv(args.out, ["environment", "n", "g_n", "d_n", "d_over_n"], res.rows)
    if args.plot:
        plotting.trajectory_figure(res.rows, _sidecar(args.out, ".png"))
    return 0


def _cmd_oracle_compare(args) -> int:
    law = _law_from_args(args)
    res = experiments.run_oracle_compare(law, args.n, args.replicas, args.seed,
                                         step_cap=args.step_cap, workers=args.workers)
    rows = [("exact", int(v)) for v in res.d_exact] + [("oracle", int(v)) for v in res.d_oracle]
    _write_csv(args.out, ["sampler", "d_n"], rows)
    _write_json(_sidecar(args.out, ".json"), res.report())
    return 0


def _cmd_brownian(args) -> int:
    res = experiments.run_brownian_identities(args.resolution, args.replicas, args.seed)
    rows = []
    for label, values in res.pools().items():
        rows.extend((label, float(v)) for v in values)
    rows.extend(("ybar", float(v)) for v in res.dstar.ybar)
    _write_csv(args.out, ["pool", "value"], rows)
    _write_json(_sidecar(args.out, ".json"), res.report())
    if args.plot:
        plotting.pool_figure(res.dstar.dstar, "d*", _sidecar(args.out, ".png"))
    return 0


def _cmd_good_events(args) -> int:
    law = _law_from_args(args)
    res = experiments.run_good_events(law, args.n, args.replicas, args.seed,
                                      args.eps, workers=args.workers)
    _write_csv(args.out,
               ["replica", "ybar", "alpha", "beta", "B+", "B-", "C+", "C-", "resolved"],
               [(r, y, a, b, int(bp), int(bm), int(cp), int(cm), int(ok))
                for r, y, a, b, bp, bm, cp, cm, ok in res.rows])
    _write_json(_sidecar(args.out, ".json"), res.report())
    return 0


def _cmd_functionals(args) -> int:
    law = _law_from_args(args)
    rows = []
    from . import functionals as fns
    from .env import Environment

    for r in range(args.replicas):
        env = Environment(law, experiments.derived_seed(args.seed, r, experiments.ENV_STREAM))
        rep = fns.full_report(fns.PotentialProfile(env, args.n), args.eps)
        rows.append((r, rep.ybar, rep.t_plus, rep.t_minus, rep.alpha, rep.beta, rep.dstar,
                     int(rep.b_plus), int(rep.b_minus), int(rep.c_plus), int(rep.c_minus),
                     int(rep.resolved)))
    _write_csv(args.out,
               ["replica", "ybar", "Tplus", "Tminus", "alpha", "beta", "dstar",
                "B+", "B-", "C+", "C-", "resolved"],
               rows)
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "localization": _cmd_localization,
    "quenched-explore": _cmd_quenched_explore,
    "oracle-compare": _cmd_oracle_compare,
    "brownian-identities": _cmd_brownian,
    "good-events": _cmd_good_events,
    "functionals": _cmd_functionals,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.subcommand](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
