"""Chebyshev (L-infinity) fitting on a subset of an instance.

The minimax problem ``min_x max_{i in C} |a_i . x - b_i|`` is the linear
program ``min gamma  s.t.  -gamma <= a_i . x - b_i <= gamma``.  We solve its
dual in standard form::

    max  sum_i b_i (u_i - v_i)
    s.t. sum_i (u_i - v_i) a_i = 0
         sum_i (u_i + v_i)     = 1,     u, v >= 0

with a dense two-phase simplex under Bland's rule.  The dual has ``r + 1``
equality rows (``r`` the rank of the a-vectors), so an optimal basic solution
has at most ``d + 1`` positive weights.  Those points form the basis: they
carry a dual certificate for the same optimum and, by complementary slackness,
all sit at residual ``gamma``.  The primal ``(x, gamma)`` is read off the
simplex multipliers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ._linalg import pivot_columns, solve_square
from .core import (
    EXACT,
    FLOAT,
    DataPoint,
    FitResult,
    InputError,
    Instance,
    Scalar,
    SolveStats,
    consensus,
    dot,
    fit_result,
)


@dataclass(frozen=True)
class MinimaxSolution:
    model: tuple[Scalar, ...]
    gamma: Scalar
    basis: tuple[int, ...]
    subset: tuple[int, ...]


class _Tableau:
    """Dense simplex tableau for ``max c.z, Az = rhs, z >= 0``.

    Artificial columns ``n .. n+m-1`` start as the identity basis and are kept
    after phase 1 so that the final multipliers ``c_B B^-1`` can be read from
    the objective row.
    """

    def __init__(self, A: list[list[Scalar]], rhs: list[Scalar], exact: bool) -> None:
        self.exact = exact
        self.m = len(A)
        self.n = len(A[0])
        one = Fraction(1) if exact else 1.0
        zero = Fraction(0) if exact else 0.0
        self.zero = zero
        self.rows = []
        for i, row in enumerate(A):
            art = [zero] * self.m
            art[i] = one
            self.rows.append(list(row) + art + [rhs[i]])
        self.basis = [self.n + i for i in range(self.m)]
        if exact:
            self.tol = 0
        else:
            scale = max((abs(v) for row in A for v in row), default=1.0)
            self.tol = 1e-10 * max(1.0, scale)
        self.pivots = 0

    def _objective(self, cost: Sequence[Scalar]) -> list[Scalar]:
        width = self.n + self.m + 1
        obj = [-c for c in cost] + [self.zero]
        for i, bi in enumerate(self.basis):
            cb = cost[bi]
            if cb:
                row = self.rows[i]
                obj = [o + cb * v for o, v in zip(obj, row)]
        assert len(obj) == width
        return obj

    def _pivot(self, obj: list[Scalar], r: int, c: int) -> list[Scalar]:
        prow = self.rows[r]
        p = prow[c]
        prow = [v / p for v in prow]
        self.rows[r] = prow
        for i, row in enumerate(self.rows):
            if i != r:
                f = row[c]
                if f:
                    self.rows[i] = [u - f * v for u, v in zip(row, prow)]
        f = obj[c]
        if f:
            obj = [u - f * v for u, v in zip(obj, prow)]
        self.basis[r] = c
        self.pivots += 1
        return obj

    def _run(self, obj: list[Scalar], allowed: int) -> list[Scalar]:
        """Iterate until optimal; only columns ``< allowed`` may enter."""
        tol = self.tol
        while True:
            # Bland: lowest-index improving column.
            c = next((j for j in range(allowed) if obj[j] < -tol), None)
            if c is None:
                return obj
            best = None
            for i, row in enumerate(self.rows):
                a = row[c]
                if a > tol:
                    ratio = row[-1] / a
                    if best is None:
                        best = (ratio, self.basis[i], i)
                    else:
                        gap = ratio - best[0]
                        if gap < -tol or (abs(gap) <= tol and self.basis[i] < best[1]):
                            best = (ratio, self.basis[i], i)
            if best is None:
                raise RuntimeError("simplex: unbounded direction in a bounded program")
            obj = self._pivot(obj, best[2], c)

    def solve(self, cost: Sequence[Scalar]) -> list[Scalar]:
        n, m = self.n, self.m
        zero = self.zero
        one = Fraction(1) if self.exact else 1.0
        phase1 = [zero] * n + [-one] * m
        obj = self._run(self._objective(phase1), n)
        # Drive artificials still basic at level zero out of the basis.
        for i in range(m):
            if self.basis[i] >= n:
                row = self.rows[i]
                c = next((j for j in range(n) if abs(row[j]) > self.tol), None)
                if c is not None:
                    obj = self._pivot(obj, i, c)
        full_cost = list(cost) + [zero] * m
        return self._run(self._objective(full_cost), n)


def _chebyshev_dual(
    A: list[list[Scalar]], b: list[Scalar], exact: bool
) -> tuple[list[Scalar], list[int]]:
    """Return the multipliers ``(x_reduced..., gamma)`` and the dual support."""
    r = len(A[0])
    one = Fraction(1) if exact else 1.0
    rows: list[list[Scalar]] = []
    for k in range(r):
        row = []
        for a in A:
            row.append(a[k])
            row.append(-a[k])
        rows.append(row)
    rows.append([one] * (2 * len(A)))
    zero = Fraction(0) if exact else 0.0
    rhs = [zero] * r + [one]
    cost: list[Scalar] = []
    for bi in b:
        cost.append(bi)
        cost.append(-bi)
    tab = _Tableau(rows, rhs, exact)
    obj = tab.solve(cost)
    n = tab.n
    y = obj[n : n + tab.m]
    support = sorted(
        {bi // 2 for i, bi in enumerate(tab.basis) if bi < n and tab.rows[i][-1] > tab.tol}
    )
    return y, support


def _check_subset(inst: Instance, subset: Iterable[int]) -> tuple[int, ...]:
    idx = tuple(sorted(set(subset)))
    if not idx:
        raise InputError("minimax needs a non-empty subset")
    if idx[0] < 0 or idx[-1] >= inst.n:
        raise InputError("subset index out of range")
    return idx


def solve_points(points: Sequence[DataPoint], exact: bool) -> tuple[tuple[Scalar, ...], Scalar, list[int]]:
    """Minimax fit of a bare point list: ``(x, gamma, basis positions)``."""
    d = points[0].dim
    rows = [p.a for p in points]
    piv = pivot_columns(rows, exact)
    zero = Fraction(0) if exact else 0.0
    if piv:
        A = [[a[j] for j in piv] for a in rows]
    else:
        A = [[] for _ in rows]
    y, support = _chebyshev_dual(A, [p.b for p in points], exact)
    x = [zero] * d
    for t, j in enumerate(piv):
        x[j] = y[t]
    x = tuple(x)
    gamma = max(abs(dot(p.a, x) - p.b) for p in points)
    return x, gamma, support


def solve_minimax(inst: Instance, subset: Iterable[int]) -> MinimaxSolution:
    """Chebyshev fit of the points indexed by ``subset``.

    Returns an optimal vertex ``x``, the minimax value ``gamma`` and a basis of
    at most ``d + 1`` points whose own minimax value equals ``gamma``.
    Coordinates outside the span of the subset's a-vectors are set to zero.
    """
    idx = _check_subset(inst, subset)
    x, gamma, support = solve_points([inst.points[i] for i in idx], inst.exact)
    return MinimaxSolution(x, gamma, tuple(idx[p] for p in support), idx)


def solve_basis_analytic(points: Sequence[DataPoint]) -> MinimaxSolution:
    """Minimax fit of exactly ``d + 1`` points by equioscillation.

    For each sign pattern ``s`` (first sign fixed to +) the square system
    ``a_i . x - s_i * gamma = b_i`` is solved; a solution with ``gamma < 0``
    is the mirrored pattern ``-s`` with ``|gamma|``.  Every solution is
    feasible for the LP, and the smallest ``|gamma|`` is optimal whenever
    the a-vectors span R^d.  Otherwise every system is singular and the LP
    route is used.
    """
    points = list(points)
    if not points:
        raise InputError("need d + 1 points")
    d = points[0].dim
    if len(points) != d + 1 or any(p.dim != d for p in points):
        raise InputError(f"need exactly d + 1 = {d + 1} points of dimension {d}")
    exact = isinstance(points[0].b, Fraction)
    one = Fraction(1) if exact else 1.0
    subset = tuple(range(d + 1))
    best = None
    for tail in itertools.product((1, -1), repeat=d):
        signs = (1,) + tail
        M = [list(p.a) + [-s * one] for p, s in zip(points, signs)]
        z = solve_square(M, [p.b for p in points], exact)
        if z is None:
            continue
        # A negative gamma is the mirrored pattern -s with gamma >= 0.
        z[-1] = abs(z[-1])
        if best is None or z[-1] < best[-1]:
            best = z
    if best is None:
        x, gamma, support = solve_points(points, exact)
        return MinimaxSolution(x, gamma, tuple(support), subset)
    x = tuple(best[:d])
    gamma = max(abs(dot(p.a, x) - p.b) for p in points)
    return MinimaxSolution(x, gamma, subset, subset)


def refit(inst: Instance, x: Sequence) -> FitResult:
    """Chebyshev refit of the consensus set of ``x``; never loses inliers."""
    count, inliers = consensus(inst, x)
    if count == 0:
        raise InputError("model has no inliers to refit")
    sol = solve_minimax(inst, inliers)
    return fit_result(inst, sol.model, SolveStats(lp_solves=1))


__all__ = [
    "EXACT",
    "FLOAT",
    "MinimaxSolution",
    "refit",
    "solve_basis_analytic",
    "solve_minimax",
    "solve_points",
]
