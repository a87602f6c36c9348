"""Scaling sweeps over N, d or the planted outlier count.

Each run generates a planted instance, solves it and records consensus,
nodes_visited, lp_solves and elapsed seconds.  The report also carries a
fitted slope of log(mean runtime): against log(N) for the N sweep
(polynomial degree), against the raw value for d and o (exponential base).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import InputError
from .generate import DEFAULT_EPSILON, generate_random
from .solvers import ALGORITHMS, SolverConfig, solve

SWEEPS = ("n", "d", "o")
DEFAULT_VALUES = {"n": (10, 20, 30, 40), "d": (1, 2, 3), "o": (0, 1, 2, 3, 4)}
DEFAULT_N = 20
DEFAULT_D = 2
DEFAULT_INLIER_FRAC = Fraction(4, 5)


@dataclass
class BenchRun:
    algo: str
    value: int
    rep: int
    seed: int
    consensus: int
    planted_inliers: int
    nodes_visited: int
    lp_solves: int
    elapsed: float


@dataclass
class BenchReport:
    sweep: str
    values: list
    algos: list
    reps: int
    base: dict
    runs: list = field(default_factory=list)
    slopes: dict = field(default_factory=dict)
    slope_kind: str = ""

    def as_dict(self) -> dict:
        out = asdict(self)
        out["runs"] = [asdict(r) if isinstance(r, BenchRun) else r for r in self.runs]
        return out

    def series(self, algo: str, key: str) -> list[float]:
        """Mean of ``key`` per sweep value for one algorithm."""
        out = []
        for v in self.values:
            xs = [getattr(r, key) for r in self.runs if r.algo == algo and r.value == v]
            out.append(sum(xs) / len(xs))
        return out


def _config(algo: str, sweep: str, value: int, seed: int) -> SolverConfig:
    if algo == "fpt" and sweep == "o":
        # Unpruned search capped at the planted outlier count: the tree size
        # then reflects the outlier budget alone.
        return SolverConfig(algo="fpt", max_outliers=value, prune=False, rng_seed=seed)
    return SolverConfig(algo=algo, rng_seed=seed)


def log_slope(values: Sequence[float], times: Sequence[float], loglog: bool) -> float | None:
    pairs = [(v, t) for v, t in zip(values, times) if v > 0 or not loglog]
    xs = [math.log(v) if loglog else float(v) for v, _ in pairs]
    ys = [math.log(max(t, 1e-9)) for _, t in pairs]
    if len(set(xs)) < 2:
        return None
    return float(np.polyfit(xs, ys, 1)[0])


def run_sweep(
    sweep: str,
    algos: Sequence[str],
    values: Sequence[int] | None = None,
    reps: int = 1,
    seed: int = 0,
    n: int = DEFAULT_N,
    d: int = DEFAULT_D,
    inlier_frac=DEFAULT_INLIER_FRAC,
    epsilon=DEFAULT_EPSILON,
    exact: bool = False,
) -> BenchReport:
    if sweep not in SWEEPS:
        raise InputError(f"unknown sweep {sweep!r}")
    for a in algos:
        if a not in ALGORITHMS:
            raise InputError(f"unknown algorithm {a!r}")
    if reps < 1:
        raise InputError("reps must be >= 1")
    values = list(values if values is not None else DEFAULT_VALUES[sweep])
    base = {"n": n, "d": d, "inlier_frac": str(inlier_frac), "epsilon": str(epsilon), "exact": exact}
    report = BenchReport(sweep, values, list(algos), reps, base)
    for v in values:
        for rep in range(reps):
            rn, rd, p = n, d, inlier_frac
            if sweep == "n":
                rn = v
            elif sweep == "d":
                rd = v
            else:
                if not 0 <= v < n:
                    raise InputError(f"outlier count {v} outside 0..{n - 1}")
                p = Fraction(n - v, n)
            run_seed = seed + 1000 * rep + v
            inst = generate_random(rn, rd, p, run_seed, epsilon, exact)
            for algo in algos:
                res = solve(inst, _config(algo, sweep, v, run_seed))
                report.runs.append(
                    BenchRun(
                        algo,
                        v,
                        rep,
                        run_seed,
                        res.consensus,
                        inst.metadata["planted_inliers"],
                        res.stats.nodes_visited,
                        res.stats.lp_solves,
                        res.stats.elapsed,
                    )
                )
    loglog = sweep == "n"
    report.slope_kind = "log-log" if loglog else "semi-log"
    for algo in algos:
        report.slopes[algo] = log_slope(values, report.series(algo, "elapsed"), loglog)
    return report
