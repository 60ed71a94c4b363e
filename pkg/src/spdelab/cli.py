"""Command line entry point ``spde-lab``.

Subcommands: eig, check, bound, simulate, mc, compare.  Exit codes: 0 on
success (blow-up is a result, not a failure), 1 on I/O errors, 2 on
configuration errors, 3 on numerical failures.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import comparison
from .config import ConfigError, RunConfig, load_config
from .dynamics import OBSERVABLES, simulate_path
from .montecarlo import default_workers, moment_domination_report, run_ensemble
from .noise import assemble
from .spectral import ConvergenceError, analytic_eigenpair, discrete_eigenpair, discrete_lambda1

EXIT_OK, EXIT_IO, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _emit(payload, out_dir):
    text = json.dumps(_jsonable(payload), indent=2, sort_keys=False)
    print(text)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "summary.json"), "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _write_csv(path, header, rows):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) if not isinstance(v, (int, np.integer)) else str(v) for v in row])


def _q_bounds(cfg: RunConfig):
    cov = assemble(cfg.problem.kernel, cfg.problem.domain)
    return cov.q_sup, cov.q_inf


def _growth(cfg: RunConfig):
    _, q1 = _q_bounds(cfg)
    eig = analytic_eigenpair(cfg.problem.domain)
    try:
        return comparison.growth_for_problem(cfg.problem, eig, q1)
    except ValueError as exc:
        raise ConfigError("drift.family", str(exc)) from None


def cmd_eig(cfg: RunConfig, args):
    domain = cfg.problem.domain
    ana = analytic_eigenpair(domain)
    dis = discrete_eigenpair(domain)
    h = domain.h
    return {
        "length": domain.length,
        "n": domain.n,
        "lambda1_analytic": ana.lambda1,
        "lambda1_discrete": dis.lambda1,
        "lambda1_discrete_closed_form": discrete_lambda1(domain),
        "difference": dis.lambda1 - ana.lambda1,
        "phi_normalization_residual_analytic": h * ana.phi.values.sum() - 1.0,
        "phi_normalization_residual_discrete": h * dis.phi.values.sum() - 1.0,
        "iterations": dis.iterations,
    }


def cmd_check(cfg: RunConfig, args):
    q0, q1 = _q_bounds(cfg)
    eig = analytic_eigenpair(cfg.problem.domain)
    reports = comparison.applicable_criteria(cfg.problem, eig, q0, q1)
    return [r.to_dict() for r in reports]


def cmd_bound(cfg: RunConfig, args):
    g, observable, x0 = _growth(cfg)
    out = {"growth": g.describe(), "observable": observable, "x0": x0}
    try:
        res = comparison.blowup_time_bound(g, x0)
    except (comparison.NoFiniteBoundError, comparison.DivergentIntegralError) as exc:
        out.update(t_star=None, reason=str(exc))
    else:
        out.update(t_star=res.t_star, abs_error_estimate=res.abs_error_estimate,
                   method=res.method)
    return out


def cmd_simulate(cfg: RunConfig, args):
    res = simulate_path(cfg.problem, cfg.solver, cfg.ensemble.base_seed)
    rows = [[t] + [res.observables[k][i] for k in OBSERVABLES] for i, t in enumerate(res.times)]
    _write_csv(os.path.join(args.out, "series.csv"), ["t", *OBSERVABLES], rows)
    return {"blow_up_time": res.blow_up_time, "exploded": res.exploded,
            "config_echo": cfg.echo()}


def _mc(cfg: RunConfig, args):
    stats = run_ensemble(cfg.problem, cfg.solver, cfg.ensemble, workers=args.workers)
    header = ["t"]
    for k in OBSERVABLES:
        header += [f"{k}_mean", f"{k}_var", f"{k}_ci"]
    header.append("n_alive")
    rows = []
    for i, t in enumerate(stats.times):
        row = [t]
        for k in OBSERVABLES:
            row += [stats.mean[k][i], stats.var[k][i], stats.ci[k][i]]
        row.append(int(stats.n_alive[i]))
        rows.append(row)
    _write_csv(os.path.join(args.out, "series.csv"), header, rows)
    return stats


def cmd_mc(cfg: RunConfig, args):
    stats = _mc(cfg, args)
    return {**stats.summary(), "config_echo": cfg.echo()}


def cmd_compare(cfg: RunConfig, args):
    g, observable, x0 = _growth(cfg)
    stats = _mc(cfg, args)
    report = moment_domination_report(stats, g, x0, observable)
    return {**stats.summary(), "domination": report.to_dict(), "config_echo": cfg.echo()}


COMMANDS = {
    "eig": cmd_eig,
    "check": cmd_check,
    "bound": cmd_bound,
    "simulate": cmd_simulate,
    "mc": cmd_mc,
    "compare": cmd_compare,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spde-lab",
        description="Positivity, blow-up and global-existence experiments for "
                    "stochastic reaction-diffusion equations on an interval.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="SECTION.KEY=VALUE", help="override one key (repeatable)")
    common.add_argument("--out", default=None,
                        help="output directory (default: spde_out for simulate, mc and compare; "
                             "other commands only print unless given)")
    common.add_argument("--workers", type=int, default=None,
                        help="worker processes for ensembles (default: $SPDE_LAB_WORKERS or 1)")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "eig": "principal Dirichlet eigenpair, analytic and discrete",
        "check": "evaluate every applicable criterion for the configured problem",
        "bound": "integral upper bound on the blow-up time of the comparison ODE",
        "simulate": "simulate one path (series.csv + summary.json)",
        "mc": "Monte Carlo ensemble statistics (series.csv + summary.json)",
        "compare": "ensemble moments against the comparison ODE",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.workers is None:
        args.workers = default_workers()
    writes_files = args.command in ("simulate", "mc", "compare")
    if args.out is None and writes_files:
        args.out = "spde_out"
    try:
        cfg = load_config(args.config, args.overrides)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read configuration: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        payload = COMMANDS[args.command](cfg, args)
        _emit(payload, args.out)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConvergenceError, np.linalg.LinAlgError, FloatingPointError, RuntimeError,
            ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
