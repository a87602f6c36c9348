"""Small dense Gaussian elimination routines shared by the solvers.

Everything works on lists of Fractions (exact, zero test is ``== 0``) or
floats (zero test against a scale-relative tolerance).
"""

from __future__ import annotations

from typing import Sequence

from .core import Scalar


def _tol(rows: Sequence[Sequence[Scalar]], exact: bool) -> float:
    if exact:
        return 0.0
    scale = max((abs(v) for row in rows for v in row), default=0.0)
    return 1e-11 * max(1.0, float(scale))


def pivot_columns(rows: Sequence[Sequence[Scalar]], exact: bool) -> list[int]:
    """Column indices of the reduced row echelon form pivots.

    These form the lexicographically first maximal set of linearly
    independent columns.  The result depends only on the row space.
    """
    if not rows:
        return []
    tol = _tol(rows, exact)
    M = [list(r) for r in rows]
    ncols = len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(M):
            break
        if exact:
            p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        else:
            p = max(range(r, len(M)), key=lambda i: abs(M[i][c]))
            if abs(M[p][c]) <= tol:
                p = None
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        for i in range(r + 1, len(M)):
            f = M[i][c]
            if f:
                f = f / piv
                M[i] = [u - f * v for u, v in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return pivots


def solve_square(
    M: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar], exact: bool
) -> list[Scalar] | None:
    """Solve ``M z = rhs``; ``None`` when ``M`` is (numerically) singular."""
    n = len(M)
    A = [list(row) + [v] for row, v in zip(M, rhs)]
    tol = _tol(M, exact)
    for c in range(n):
        if exact:
            p = next((i for i in range(c, n) if A[i][c] != 0), None)
        else:
            p = max(range(c, n), key=lambda i: abs(A[i][c]))
            if abs(A[p][c]) <= tol:
                p = None
        if p is None:
            return None
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c] / piv
                A[i] = [u - f * v for u, v in zip(A[i], A[c])]
    return [A[i][n] / A[i][i] for i in range(n)]
