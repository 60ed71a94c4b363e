"""Path ensembles, censored moment estimates and the moment-domination check.

Paths are split into fixed blocks of consecutive indices; each block is
simulated as one batch (possibly in a worker process) and reduced to
per-time (count, mean, M2) accumulators.  Blocks are merged in index order
with the pairwise update of Chan et al., so the statistics do not depend on
the number of workers.

A path that has blown up is censored: it drops out of the moments from its
blow-up time on, and is counted in ``blow_up_fraction`` instead.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .comparison import GrowthFunction, comparison_solution, integrate_comparison_ode
from .dynamics import OBSERVABLES, ProblemSpec, SolverConfig, simulate_block

__all__ = [
    "EnsembleConfig",
    "EnsembleStats",
    "MomentAccumulator",
    "DominationReport",
    "run_ensemble",
    "moment_domination_report",
]

BLOCK_SIZE = 50
CI_SIGMAS = 3.0


@dataclass(frozen=True)
class EnsembleConfig:
    n_paths: int = 100
    base_seed: int = 0

    def __post_init__(self):
        if int(self.n_paths) != self.n_paths or self.n_paths < 1:
            raise ValueError("n_paths must be a positive integer")


class MomentAccumulator:
    """Running count/mean/M2 per (time, observable), NaN entries ignored."""

    def __init__(self, count, mean, m2):
        self.count = count
        self.mean = mean
        self.m2 = m2

    @classmethod
    def from_samples(cls, x: np.ndarray) -> "MomentAccumulator":
        """``x`` has shape ``(paths, ...)``; NaN marks a censored sample."""
        ok = ~np.isnan(x)
        count = ok.sum(axis=0).astype(float)
        xs = np.where(ok, x, 0.0)
        with np.errstate(invalid="ignore", divide="ignore"):
            mean = np.where(count > 0, xs.sum(axis=0) / count, 0.0)
        dev = np.where(ok, x - mean, 0.0)
        return cls(count, mean, (dev * dev).sum(axis=0))

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        n = self.count + other.count
        delta = other.mean - self.mean
        with np.errstate(invalid="ignore", divide="ignore"):
            w = np.where(n > 0, other.count / n, 0.0)
            mean = self.mean + delta * w
            m2 = self.m2 + other.m2 + delta * delta * self.count * w
        return MomentAccumulator(n, mean, m2)

    def variance(self) -> np.ndarray:
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(self.count >= 2, self.m2 / (self.count - 1), np.nan)


@dataclass(eq=False)
class EnsembleStats:
    times: np.ndarray
    mean: dict
    var: dict
    ci: dict
    n_alive: np.ndarray
    n_paths: int
    blow_up_times: np.ndarray = field(repr=False)

    @property
    def n_exploded(self) -> int:
        return int(np.isfinite(self.blow_up_times).sum())

    @property
    def blow_up_fraction(self) -> float:
        return self.n_exploded / self.n_paths

    @property
    def blow_up_time_quantiles(self) -> dict | None:
        bt = self.blow_up_times[np.isfinite(self.blow_up_times)]
        if bt.size == 0:
            return None
        q = np.quantile(bt, [0.1, 0.5, 0.9])
        return {"q10": float(q[0]), "q50": float(q[1]), "q90": float(q[2])}

    def blow_up_fraction_by(self, t: float) -> float:
        return float((self.blow_up_times <= t).sum()) / self.n_paths

    def summary(self) -> dict:
        return {
            "n_paths": self.n_paths,
            "n_exploded": self.n_exploded,
            "blow_up_fraction": self.blow_up_fraction,
            "blow_up_time_quantiles": self.blow_up_time_quantiles,
        }


def _run_block(args):
    problem, config, base_seed, start, stop = args
    res = simulate_block(problem, config, [(base_seed, i) for i in range(start, stop)])
    return res.times, MomentAccumulator.from_samples(res.obs), res.blow_up_times


def default_workers() -> int:
    env = os.environ.get("SPDE_LAB_WORKERS")
    if env:
        return max(1, int(env))
    return 1


def run_ensemble(problem: ProblemSpec, solver_config: SolverConfig,
                 ensemble_config: EnsembleConfig, workers: int | None = None) -> EnsembleStats:
    """Simulate ``n_paths`` paths and aggregate censored moments of every observable.

    ``workers`` (default: ``$SPDE_LAB_WORKERS`` or 1) sets the number of
    worker processes; the result is bitwise the same for any value.
    """
    workers = default_workers() if workers is None else max(1, int(workers))
    n = ensemble_config.n_paths
    jobs = [(problem, solver_config, ensemble_config.base_seed, s, min(s + BLOCK_SIZE, n))
            for s in range(0, n, BLOCK_SIZE)]
    if workers == 1 or len(jobs) == 1:
        results = [_run_block(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            results = list(pool.map(_run_block, jobs))

    times = results[0][0]
    acc = results[0][1]
    for _, other, _ in results[1:]:
        acc = acc.merge(other)
    blow = np.concatenate([r[2] for r in results])

    var = acc.variance()
    n_alive = acc.count[:, 0].astype(int)
    with np.errstate(invalid="ignore", divide="ignore"):
        ci = CI_SIGMAS * np.sqrt(var / acc.count)
    mean_d, var_d, ci_d = {}, {}, {}
    for i, name in enumerate(OBSERVABLES):
        mean_d[name] = np.where(n_alive > 0, acc.mean[:, i], np.nan)
        var_d[name] = var[:, i]
        ci_d[name] = ci[:, i]
    return EnsembleStats(times, mean_d, var_d, ci_d, n_alive, n, blow)


@dataclass
class DominationReport:
    observable: str
    growth: str
    x0: float
    disc_tol: float
    rows: list  # dicts: t, mean, ci, zeta, slack, passed
    zeta_blow_up_time: float | None

    @property
    def passed(self) -> bool:
        return all(r["passed"] for r in self.rows)

    @property
    def first_failure(self) -> float | None:
        for r in self.rows:
            if not r["passed"]:
                return r["t"]
        return None

    def to_dict(self) -> dict:
        return {
            "observable": self.observable,
            "growth": self.growth,
            "x0": self.x0,
            "disc_tol": self.disc_tol,
            "zeta_blow_up_time": self.zeta_blow_up_time,
            "passed": self.passed,
            "first_failure": self.first_failure,
            "rows": self.rows,
        }


def moment_domination_report(stats: EnsembleStats, g: GrowthFunction, x0: float,
                             observable: str = "phi_pairing_sq", times=None,
                             disc_tol: float = 0.05, ode_dt: float = 1e-4) -> DominationReport:
    """Check ``mean(t) + CI(t) + disc_tol * zeta(t) >= zeta(t)`` at sample times.

    ``zeta`` solves ``zeta' = g(zeta)``, ``zeta(0) = x0``.  Only sample
    times strictly before ``zeta`` blows up are judged.  ``times`` selects a
    subset of the recorded instants (nearest match); default is all.
    """
    if observable not in stats.mean:
        raise KeyError(f"observable {observable!r} not in ensemble statistics")
    m0 = stats.mean[observable][0]
    if not abs(m0 - x0) <= 1e-9 * max(1.0, abs(x0)):
        raise ValueError(f"x0 = {x0} does not match the observable's initial mean {m0}")
    if times is None:
        idx = np.arange(len(stats.times))
    else:
        idx = np.array([int(np.argmin(np.abs(stats.times - t))) for t in times])
    ts = stats.times[idx]
    zeta = comparison_solution(g, x0, ts, dt=ode_dt)
    horizon = max(float(ts.max()), 1e-12) if len(ts) else 1.0
    blow = integrate_comparison_ode(g, x0, ode_dt, horizon * 10).blow_up_time
    rows = []
    for i, t, z in zip(idx, ts, zeta):
        if np.isnan(z):
            continue
        mean = float(stats.mean[observable][i])
        ci = float(stats.ci[observable][i]) if np.isfinite(stats.ci[observable][i]) else 0.0
        slack = mean + ci + disc_tol * z - z
        rows.append({"t": float(t), "mean": mean, "ci": ci, "zeta": float(z),
                     "slack": float(slack), "passed": bool(slack >= 0)})
    return DominationReport(observable, g.describe(), float(x0), disc_tol, rows, blow)
