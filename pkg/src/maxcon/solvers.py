"""Globally optimal MAXCON solvers, the brute-force oracle and a RANSAC baseline.

* :func:`enumerate_exact` -- Chebyshev fits of every subset of size ``<= d+1``.
* :func:`fpt_solve` -- depth-first removal of basis points (tree search whose
  size is exponential only in the number of outliers and the dimension).
* :func:`grouped_search` -- exact branch and bound over the inlier windows of
  parallel measurement classes; scales to the structured instances produced
  by the hardness reductions.
* :func:`brute_force_oracle` -- largest feasible subset, by exhaustion.
* :func:`ransac_baseline` -- minimal-sample hypothesise-and-verify.
"""

from __future__ import annotations

import itertools
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from ._linalg import pivot_columns, solve_square
from .core import (
    FitResult,
    InputError,
    Instance,
    SolveStats,
    Stopwatch,
    consensus,
    fit_result,
    within,
)
from .minimax import refit, solve_minimax

ORACLE_MAX_N = 22
ALGORITHMS = ("enum", "fpt", "oracle", "ransac", "grouped")


class SolverRefusal(InputError):
    """The instance is too large for an exhaustive method."""


@dataclass(frozen=True)
class SolverConfig:
    algo: str = "fpt"
    max_outliers: Optional[int] = None
    ransac_iters: int = 500
    rng_seed: int = 0
    parallel: bool = False
    prune: bool = True

    def __post_init__(self) -> None:
        if self.algo not in ALGORITHMS:
            raise InputError(f"unknown algorithm {self.algo!r}")
        if self.max_outliers is not None and self.max_outliers < 0:
            raise InputError("max_outliers must be >= 0")
        if self.algo == "ransac" and self.ransac_iters < 1:
            raise InputError("ransac_iters must be >= 1")
        if not 0 <= self.rng_seed < 2**64:
            raise InputError("rng_seed must be a 64-bit unsigned integer")


def worker_count() -> int:
    env = os.environ.get("MAXCON_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _initial_incumbent(inst: Instance) -> FitResult:
    zero = fit_result(inst, inst.zero_model())
    if zero.consensus == 0:
        return zero
    return refit(inst, zero.model)


# --------------------------------------------------------------------------
# XP enumeration


def _vertex_candidate(inst: Instance, T: tuple[int, ...], signs: tuple[int, ...]):
    """Point where ``a_i . x = b_i + s_i * eps`` for ``i`` in ``T`` (pivot coordinates only)."""
    rows = [inst.points[i].a for i in T]
    piv = pivot_columns(rows, inst.exact)
    if len(piv) != len(T):
        return None
    eps = inst.epsilon
    rhs = [inst.points[i].b + s * eps for i, s in zip(T, signs)]
    z = solve_square([[a[j] for j in piv] for a in rows], rhs, inst.exact)
    if z is None:
        return None
    x = list(inst.zero_model())
    for j, v in zip(piv, z):
        x[j] = v
    return tuple(x)


def _enum_chunk(args) -> tuple[tuple, int]:
    inst, tasks = args
    best = None
    solves = 0
    for subset, signs in tasks:
        if signs is None:
            model = solve_minimax(inst, subset).model
            solves += 1
        else:
            model = _vertex_candidate(inst, subset, signs)
            if model is None:
                continue
        count, _ = consensus(inst, model)
        key = (-count, subset, signs is not None, signs or ())
        if best is None or key < best[0]:
            best = (key, model)
    return best, solves


def _enum_tasks(inst: Instance) -> list:
    top = min(inst.d + 1, inst.n)
    tasks: list = [((), ())]
    for size in range(1, top + 1):
        for s in itertools.combinations(range(inst.n), size):
            tasks.append((s, None))
            if size <= inst.d:
                pats = [(1,) * size] if inst.epsilon == 0 else itertools.product((1, -1), repeat=size)
                tasks.extend((s, p) for p in pats)
    return tasks


def enumerate_exact(inst: Instance, cfg: SolverConfig | None = None) -> FitResult:
    """Best model among the Chebyshev fits of all subsets of size 1..d+1.

    Chebyshev fits alone can miss the optimum on degenerate data: when the
    minimiser of a small basis is not unique, the returned vertex may violate
    other members of the optimal consensus set.  The sweep therefore also
    scores, for every subset of at most ``d`` points with independent
    a-vectors, the points where those residuals equal ``+-eps``.  Every
    non-empty feasible region has such a vertex (after fixing the coordinates
    outside its span to zero), so the search is complete.

    Ties go to the lexicographically smallest generating subset, so the result
    does not depend on whether the sweep runs in parallel.
    """
    cfg = cfg or SolverConfig(algo="enum")
    stats = SolveStats()
    with Stopwatch(stats):
        tasks = _enum_tasks(inst)
        workers = worker_count() if cfg.parallel else 1
        if workers > 1 and len(tasks) > 512:
            step = math.ceil(len(tasks) / (workers * 4))
            chunks = [(inst, tasks[i : i + step]) for i in range(0, len(tasks), step)]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_enum_chunk, chunks))
        else:
            parts = [_enum_chunk((inst, tasks))]
        key, model = min((p[0] for p in parts if p[0] is not None), key=lambda t: t[0])
        stats.lp_solves = sum(p[1] for p in parts)
        stats.nodes_visited = len(tasks)
    return fit_result(inst, model, stats)


# --------------------------------------------------------------------------
# FPT tree search


def fpt_solve(inst: Instance, cfg: SolverConfig | None = None) -> FitResult:
    """Recursive basis-point removal.

    Starting from all points, solve the Chebyshev problem; a subset whose
    minimax value is within epsilon is a candidate consensus set, otherwise
    branch on removing each of its (at most d+1) basis points, in ascending
    index order.  One of the basis points is always a true outlier, so the
    optimum lies within depth ``o`` of the root.

    ``cfg.prune`` cuts subsets no larger than the incumbent; ``cfg.max_outliers``
    caps the removal depth (the answer is then optimal only among models with
    at most that many outliers, and ``stats.flags['depth_capped']`` says
    whether the cap was hit).  Identical subsets reached by different removal
    orders are solved once.
    """
    cfg = cfg or SolverConfig(algo="fpt")
    stats = SolveStats()
    eps, mode = inst.epsilon, inst.mode
    cap = cfg.max_outliers
    with Stopwatch(stats):
        if cfg.prune:
            best = _initial_incumbent(inst)
            stats.lp_solves += best.stats.lp_solves
        else:
            best = fit_result(inst, inst.zero_model())
        best_model, best_val = best.model, best.consensus
        seen: set[tuple[int, ...]] = set()
        capped = False
        stack = [(tuple(range(inst.n)), 0)]
        while stack:
            C, depth = stack.pop()
            if C in seen:
                continue
            seen.add(C)
            stats.nodes_visited += 1
            stats.outliers_removed = max(stats.outliers_removed, depth)
            sol = solve_minimax(inst, C)
            stats.lp_solves += 1
            if within(sol.gamma, eps, mode):
                count, _ = consensus(inst, sol.model)
                if count > best_val:
                    best_model, best_val = sol.model, count
                continue
            if cap is not None and depth >= cap:
                capped = True
                continue
            children = []
            for i in sol.basis:
                child = tuple(j for j in C if j != i)
                if not child or child in seen:
                    continue
                if cfg.prune and len(child) <= best_val:
                    continue
                children.append((child, depth + 1))
            stack.extend(reversed(children))
        stats.flags["depth_capped"] = capped
    return fit_result(inst, best_model, stats)


# --------------------------------------------------------------------------
# Exhaustive oracle


def brute_force_oracle(inst: Instance, cfg: SolverConfig | None = None) -> FitResult:
    """Largest subset with minimax value <= epsilon, by decreasing cardinality.

    Independent ground truth for the other solvers; refuses ``N > 22``.
    """
    if inst.n > ORACLE_MAX_N:
        raise SolverRefusal(f"oracle refuses N={inst.n} > {ORACLE_MAX_N}")
    stats = SolveStats()
    with Stopwatch(stats):
        for size in range(inst.n, 0, -1):
            for s in itertools.combinations(range(inst.n), size):
                sol = solve_minimax(inst, s)
                stats.lp_solves += 1
                if within(sol.gamma, inst.epsilon, inst.mode):
                    res = refit(inst, sol.model)
                    stats.lp_solves += 1
                    stats.nodes_visited = stats.lp_solves
                    return FitResult(res.model, res.consensus, res.inliers, stats)
        stats.nodes_visited = stats.lp_solves
    return fit_result(inst, inst.zero_model(), stats)


# --------------------------------------------------------------------------
# RANSAC


def ransac_baseline(inst: Instance, cfg: SolverConfig | None = None) -> FitResult:
    """Hypothesise from ``d`` random points, keep the best, refit it once.

    Randomness comes only from ``random.Random(cfg.rng_seed)``.
    """
    cfg = cfg or SolverConfig(algo="ransac")
    if inst.n < inst.d:
        raise InputError(f"RANSAC needs N >= d ({inst.n} < {inst.d})")
    rng = random.Random(cfg.rng_seed)
    stats = SolveStats()
    with Stopwatch(stats):
        best_model, best_val = None, -1
        for _ in range(cfg.ransac_iters):
            sample = sorted(rng.sample(range(inst.n), inst.d))
            M = [inst.points[i].a for i in sample]
            x = solve_square(M, [inst.points[i].b for i in sample], inst.exact)
            stats.nodes_visited += 1
            if x is None:
                continue
            count, _ = consensus(inst, x)
            if count > best_val:
                best_model, best_val = tuple(x), count
        if best_model is None:
            stats.flags["all_samples_singular"] = True
            return fit_result(inst, inst.zero_model(), stats)
        if best_val == 0:
            return fit_result(inst, best_model, stats)
        res = refit(inst, best_model)
        stats.lp_solves += 1
    return FitResult(res.model, res.consensus, res.inliers, stats)


# --------------------------------------------------------------------------
# Grouped branch and bound


@dataclass
class _Group:
    key: tuple
    # options: (count, lo, hi, point indices); lo/hi bound key . x
    options: list


def _normalize(a):
    lead = next(v for v in a if v != 0)
    return lead, tuple(v / lead for v in a)


def _build_groups(inst: Instance):
    eps = inst.epsilon
    const: list[int] = []
    raw: dict[tuple, list] = {}
    for i, p in enumerate(inst.points):
        if all(v == 0 for v in p.a):
            if within(abs(p.b), eps, inst.mode):
                const.append(i)
            continue
        lead, key = _normalize(p.a)
        t = p.b / lead
        w = eps / abs(lead)
        raw.setdefault(key, []).append((t - w, t + w, i))
    groups = []
    for key, ivs in raw.items():
        ends = sorted({v for lo, hi, _ in ivs for v in (lo, hi)})
        probes = list(ends) + [(u + v) / 2 for u, v in zip(ends, ends[1:])]
        seen = {}
        for tau in probes:
            S = tuple(sorted(i for lo, hi, i in ivs if lo <= tau <= hi))
            if S and S not in seen:
                lo = max(lo for lo, hi, i in ivs if i in S)
                hi = min(hi for lo, hi, i in ivs if i in S)
                seen[S] = (len(S), lo, hi, S)
        opts = sorted(seen.values(), key=lambda o: (-o[0], o[1], o[3]))
        opts.append((0, None, None, ()))
        groups.append(_Group(key, opts))
    groups.sort(key=lambda g: (sum(1 for v in g.key if v != 0), -g.options[0][0], g.key))
    return const, groups


def _range(key, lo, hi):
    """Interval of ``key . x`` over the box ``lo <= x <= hi`` (None = infinite)."""
    rmin = rmax = 0
    fin_min = fin_max = True
    for k, l, h in zip(key, lo, hi):
        if k == 0:
            continue
        a, b = (l, h) if k > 0 else (h, l)
        if a is None:
            fin_min = False
        elif fin_min:
            rmin += k * a
        if b is None:
            fin_max = False
        elif fin_max:
            rmax += k * b
    return (rmin if fin_min else None), (rmax if fin_max else None)


def _compatible(opt, rng_lo, rng_hi, slack) -> bool:
    if opt[1] is None:
        return True
    if rng_hi is not None and opt[1] > rng_hi + slack:
        return False
    if rng_lo is not None and opt[2] < rng_lo - slack:
        return False
    return True


def _propagate(cons, lo, hi, slack, rounds=8) -> bool:
    """Interval bound tightening; False proves infeasibility."""
    d = len(lo)
    for _ in range(rounds):
        changed = False
        for key, L, U in cons:
            for j in range(d):
                kj = key[j]
                if kj == 0:
                    continue
                rest_key = tuple(0 if t == j else v for t, v in enumerate(key))
                rmin, rmax = _range(rest_key, lo, hi)
                # L - rmax <= kj * x_j <= U - rmin
                new_a = None if rmax is None else (L - rmax) / kj
                new_b = None if rmin is None else (U - rmin) / kj
                if kj < 0:
                    new_a, new_b = new_b, new_a
                if new_a is not None and (lo[j] is None or new_a > lo[j] + slack):
                    lo[j] = new_a
                    changed = True
                if new_b is not None and (hi[j] is None or new_b < hi[j] - slack):
                    hi[j] = new_b
                    changed = True
                if lo[j] is not None and hi[j] is not None and lo[j] > hi[j] + slack:
                    return False
        if not changed:
            break
    return True


def grouped_search(inst: Instance, cfg: SolverConfig | None = None) -> FitResult:
    """Exact MAXCON by branch and bound over parallel measurement classes.

    Points whose a-vectors are parallel share a scalar ``t = key . x``; as
    ``t`` moves along the line the set of inliers in that class takes finitely
    many values, each valid on a closed interval.  Choosing one such option
    (or none) per class and requiring all chosen intervals simultaneously is
    an exact relaxation: the optimum's own inlier pattern is one of the
    choices.  Subtrees are cut with interval propagation (sound infeasibility)
    and with a forward-checked count bound; a complete choice is confirmed by
    a Chebyshev solve of the union of its inliers.
    """
    cfg = cfg or SolverConfig(algo="grouped")
    stats = SolveStats()
    exact = inst.exact
    slack = 0 if exact else 1e-9 * max(1.0, float(inst.epsilon))
    with Stopwatch(stats):
        const, groups = _build_groups(inst)
        best = _initial_incumbent(inst)
        stats.lp_solves += best.stats.lp_solves
        best_model, best_val = best.model, best.consensus
        base = len(const)
        maxes = [g.options[0][0] for g in groups]
        d = inst.d

        def confirm(chosen_pts: list[int], total: int) -> None:
            nonlocal best_model, best_val
            if chosen_pts:
                sol = solve_minimax(inst, chosen_pts)
                stats.lp_solves += 1
                if not within(sol.gamma, inst.epsilon, inst.mode):
                    return
                model = sol.model
            else:
                model = inst.zero_model()
            count, _ = consensus(inst, model)
            if count > best_val:
                best_model, best_val = model, count

        def bound(g_index: int, lo, hi) -> int:
            total = 0
            for g in groups[g_index:]:
                rlo, rhi = _range(g.key, lo, hi)
                total += next(o[0] for o in g.options if _compatible(o, rlo, rhi, slack))
            return total

        def search(g_index, count, cons, lo, hi, chosen) -> None:
            stats.nodes_visited += 1
            if g_index == len(groups):
                if count > best_val:
                    confirm(chosen, count)
                return
            g = groups[g_index]
            rlo, rhi = _range(g.key, lo, hi)
            for opt in g.options:
                if not _compatible(opt, rlo, rhi, slack):
                    continue
                if count + opt[0] + sum(maxes[g_index + 1 :]) <= best_val:
                    # Options are sorted by count; nothing later can do better.
                    break
                nlo, nhi = list(lo), list(hi)
                ncons = cons
                if opt[1] is not None:
                    ncons = cons + [(g.key, opt[1], opt[2])]
                    if not _propagate(ncons, nlo, nhi, slack):
                        continue
                if count + opt[0] + bound(g_index + 1, nlo, nhi) <= best_val:
                    continue
                search(g_index + 1, count + opt[0], ncons, nlo, nhi, chosen + list(opt[3]))

        search(0, base, [], [None] * d, [None] * d, [])
    return fit_result(inst, best_model, stats)


# --------------------------------------------------------------------------

SOLVERS: dict[str, Callable[[Instance, SolverConfig], FitResult]] = {
    "enum": enumerate_exact,
    "fpt": fpt_solve,
    "oracle": brute_force_oracle,
    "ransac": ransac_baseline,
    "grouped": grouped_search,
}


def solve(inst: Instance, cfg: SolverConfig) -> FitResult:
    return SOLVERS[cfg.algo](inst, cfg)
