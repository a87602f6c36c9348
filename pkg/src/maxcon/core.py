"""Domain types and the residual / consensus / k-th order statistic evaluators.

Scalars are either :class:`fractions.Fraction` (exact mode) or ``float``
(float mode).  An :class:`Instance` is homogeneous: every coordinate, response
and the threshold share one mode, and all arithmetic below works unchanged on
either representation.

Indices are 0-based inside the library.  Serialized output converts to 1-based.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Any, Iterable, Sequence, Union

import numpy as np

Scalar = Union[Fraction, float]

EXACT = "exact"
FLOAT = "float"

# Float-mode inlier slack: residual <= eps * (1 + REL_TOL) + ABS_TOL.
REL_TOL = 1e-12
ABS_TOL = 1e-12


class InputError(ValueError):
    """Raised when an operation receives arguments violating its contract."""


def to_scalar(value: Any, mode: str) -> Scalar:
    """Convert ``value`` into the scalar type of ``mode``.

    Strings go through :class:`Fraction` so that decimals like ``"0.1"`` are
    read exactly in exact mode.
    """
    if mode == EXACT:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, Rational)):
            return Fraction(value)
        if isinstance(value, float):
            if not math.isfinite(value):
                raise InputError(f"non-finite value {value!r} in exact mode")
            # Shortest round-trip decimal: 0.1 means 1/10, not the binary double.
            return Fraction(repr(value))
        if isinstance(value, str):
            return Fraction(value)
        raise InputError(f"cannot convert {value!r} to an exact scalar")
    if mode == FLOAT:
        if isinstance(value, str):
            return float(Fraction(value)) if "/" in value else float(value)
        return float(value)
    raise InputError(f"unknown scalar mode {mode!r}")


def within(value: Scalar, bound: Scalar, mode: str) -> bool:
    """``value <= bound`` under the active tolerance policy."""
    if mode == EXACT:
        return value <= bound
    return value <= bound * (1 + REL_TOL) + ABS_TOL


@dataclass(frozen=True)
class DataPoint:
    a: tuple[Scalar, ...]
    b: Scalar

    @property
    def dim(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class Instance:
    """A MAXCON input: measurements ``(a_i, b_i)`` and an inlier threshold."""

    points: tuple[DataPoint, ...]
    epsilon: Scalar
    d: int
    mode: str = FLOAT
    metadata: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self) -> None:
        if self.mode not in (EXACT, FLOAT):
            raise InputError(f"unknown mode {self.mode!r}")
        if self.d < 1:
            raise InputError("dimension d must be positive")
        if not self.points:
            raise InputError("an instance needs at least one point")
        kind = Fraction if self.mode == EXACT else float
        for i, p in enumerate(self.points):
            if p.dim != self.d:
                raise InputError(f"point {i + 1} has dimension {p.dim}, expected {self.d}")
            if not all(isinstance(v, kind) for v in (*p.a, p.b)):
                raise InputError(f"point {i + 1} mixes scalar modes")
        if not isinstance(self.epsilon, kind):
            raise InputError("epsilon does not match the instance mode")
        if self.epsilon < 0:
            raise InputError("epsilon must be non-negative")

    @classmethod
    def build(
        cls,
        A: Iterable[Sequence[Any]],
        b: Iterable[Any],
        epsilon: Any,
        *,
        exact: bool = False,
        metadata: dict | None = None,
    ) -> "Instance":
        """Convenience constructor from plain row lists."""
        mode = EXACT if exact else FLOAT
        rows = [tuple(to_scalar(v, mode) for v in row) for row in A]
        bs = [to_scalar(v, mode) for v in b]
        if len(rows) != len(bs):
            raise InputError("A and b have different lengths")
        if not rows:
            raise InputError("an instance needs at least one point")
        pts = tuple(DataPoint(r, v) for r, v in zip(rows, bs))
        return cls(pts, to_scalar(epsilon, mode), len(rows[0]), mode, dict(metadata or {}))

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def exact(self) -> bool:
        return self.mode == EXACT

    def scalar(self, value: Any) -> Scalar:
        return to_scalar(value, self.mode)

    def model(self, x: Iterable[Any]) -> tuple[Scalar, ...]:
        """Coerce ``x`` into a model vector of this instance's mode."""
        m = tuple(self.scalar(v) for v in x)
        if len(m) != self.d:
            raise InputError(f"model has dimension {len(m)}, expected {self.d}")
        return m

    def zero_model(self) -> tuple[Scalar, ...]:
        return (self.scalar(0),) * self.d

    def subset(self, indices: Iterable[int]) -> "Instance":
        pts = tuple(self.points[i] for i in indices)
        return Instance(pts, self.epsilon, self.d, self.mode)

    @cached_property
    def _arrays(self) -> tuple[np.ndarray, np.ndarray]:
        A = np.array([p.a for p in self.points], dtype=float)
        b = np.array([p.b for p in self.points], dtype=float)
        return A, b

    def with_epsilon(self, epsilon: Any) -> "Instance":
        return Instance(self.points, self.scalar(epsilon), self.d, self.mode, dict(self.metadata))


@dataclass
class SolveStats:
    nodes_visited: int = 0
    lp_solves: int = 0
    elapsed: float = 0.0
    outliers_removed: int = 0
    flags: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "nodes_visited": self.nodes_visited,
            "lp_solves": self.lp_solves,
            "elapsed": self.elapsed,
            "outliers_removed": self.outliers_removed,
            "flags": dict(sorted(self.flags.items())),
        }


class Stopwatch:
    def __init__(self, stats: SolveStats) -> None:
        self.stats = stats

    def __enter__(self) -> SolveStats:
        self._t0 = time.perf_counter()
        return self.stats

    def __exit__(self, *exc: object) -> None:
        self.stats.elapsed += time.perf_counter() - self._t0


@dataclass(frozen=True)
class FitResult:
    model: tuple[Scalar, ...]
    consensus: int
    inliers: tuple[int, ...]
    stats: SolveStats = field(default_factory=SolveStats, compare=False)


def dot(a: Sequence[Scalar], x: Sequence[Scalar]) -> Scalar:
    total = a[0] * x[0]
    for ai, xi in zip(a[1:], x[1:]):
        total += ai * xi
    return total


def residual(p: DataPoint, x: Sequence[Scalar]) -> Scalar:
    """``|a . x - b|``."""
    if len(x) != p.dim:
        raise InputError(f"model has dimension {len(x)}, point has {p.dim}")
    return abs(dot(p.a, x) - p.b)


def residuals(inst: Instance, x: Sequence[Scalar]) -> list[Scalar]:
    if len(x) != inst.d:
        raise InputError(f"model has dimension {len(x)}, instance has {inst.d}")
    return [abs(dot(p.a, x) - p.b) for p in inst.points]


def consensus(inst: Instance, x: Sequence[Any]) -> tuple[int, tuple[int, ...]]:
    """Number of inliers of ``x`` and their (0-based, ascending) indices.

    The inlier test is the non-strict ``residual <= epsilon``; float instances
    get the small slack of :func:`within`.
    """
    x = inst.model(x)
    eps, mode = inst.epsilon, inst.mode
    if mode == FLOAT:
        A, b = inst._arrays
        r = np.abs(A @ np.asarray(x) - b)
        idx = tuple(np.flatnonzero(r <= eps * (1 + REL_TOL) + ABS_TOL).tolist())
    else:
        idx = tuple(i for i, r in enumerate(residuals(inst, x)) if r <= eps)
    return len(idx), idx


def kos_objective(inst: Instance, x: Sequence[Any], k: int) -> Scalar:
    """The k-th largest residual (order statistic over the multiset).

    ``k = ceil(N/2)`` gives the least-median objective.
    """
    if not 1 <= k <= inst.n:
        raise InputError(f"k={k} outside 1..{inst.n}")
    rs = sorted(residuals(inst, inst.model(x)), reverse=True)
    return rs[k - 1]


def fit_result(inst: Instance, x: Sequence[Any], stats: SolveStats | None = None) -> FitResult:
    x = inst.model(x)
    count, idx = consensus(inst, x)
    return FitResult(x, count, idx, stats if stats is not None else SolveStats())
