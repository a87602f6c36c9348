"""Executable hardness reductions into MAXCON.

* k-SLAB -> MAXCON-D: same points, ``eps = w'/2``, ``psi = k``.
* k-CLIQUE -> MAXCON: vertex-selection points ``D_V`` and edge-selection
  points ``D_E`` in dimension k, ``eps = 1/(2(M+2))``, ``psi = k + C(k,2)``.
* MAX-2SAT -> MAXCON: six points per clause, ``eps = 1/2``; for bipolar models
  the consensus is ``2M + (number of satisfied clauses)``.

All generated instances are exact.  :func:`verify_reduction` brute-forces the
source problem, solves the image exactly and checks the iff conditions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .core import (
    EXACT,
    FLOAT,
    DataPoint,
    InputError,
    Instance,
    Scalar,
    consensus,
    within,
)
from .minimax import solve_minimax
from .solvers import ORACLE_MAX_N, SolverRefusal, brute_force_oracle, grouped_search

CLIQUE_LIMITS = (9, 4)  # M, k
TWOSAT_LIMITS = (10, 12)  # variables, clauses
SLAB_MAX_N = 16


@dataclass(frozen=True)
class Graph:
    num_vertices: int
    edges: frozenset

    def __post_init__(self) -> None:
        if self.num_vertices < 1:
            raise InputError("a graph needs at least one vertex")
        for e in self.edges:
            u, v = e
            if u == v:
                raise InputError(f"self-loop on vertex {u}")
            if not (1 <= u < v <= self.num_vertices):
                raise InputError(f"edge {e} not a normalized pair in 1..{self.num_vertices}")

    @classmethod
    def from_edges(cls, M: int, edges: Iterable[Sequence[int]]) -> "Graph":
        norm = set()
        for u, v in edges:
            if u == v:
                raise InputError(f"self-loop on vertex {u}")
            for w in (u, v):
                if not 1 <= w <= M:
                    raise InputError(f"vertex {w} outside 1..{M}")
            norm.add((min(u, v), max(u, v)))
        return cls(M, frozenset(norm))

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


@dataclass(frozen=True)
class TwoSatFormula:
    """Clauses are pairs of literals ``(variable, negated)``, variables 1-based."""

    num_vars: int
    clauses: tuple

    def __post_init__(self) -> None:
        if self.num_vars < 1:
            raise InputError("a formula needs at least one variable")
        for c in self.clauses:
            if len(c) != 2:
                raise InputError(f"clause {c} does not have exactly two literals")
            for var, _neg in c:
                if not 1 <= var <= self.num_vars:
                    raise InputError(f"variable {var} outside 1..{self.num_vars}")

    @classmethod
    def from_ints(cls, k: int, clauses: Iterable[Sequence[int]]) -> "TwoSatFormula":
        """DIMACS-style literals: ``-3`` is the negation of variable 3."""
        cl = []
        for c in clauses:
            if len(c) != 2 or 0 in c:
                raise InputError(f"clause {tuple(c)} must have two non-zero literals")
            cl.append(tuple((abs(l), l < 0) for l in c))
        return cls(k, tuple(cl))

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


@dataclass(frozen=True)
class SlabInstance:
    points: tuple[DataPoint, ...]
    k: int
    width: Scalar

    def __post_init__(self) -> None:
        if not 1 <= self.k <= len(self.points):
            raise InputError(f"k={self.k} outside 1..{len(self.points)}")
        if self.width < 0:
            raise InputError("slab width must be non-negative")


@dataclass(frozen=True)
class ReductionCertificate:
    source_kind: str
    source_optimum: int
    maxcon_optimum: int
    psi: int
    decoded_witness: Any
    threshold_used: Scalar
    verdict: bool
    details: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# k-SLAB


def slab_to_maxcon(s: SlabInstance) -> tuple[Instance, int]:
    d = s.points[0].dim
    exact = isinstance(s.width, Fraction)
    eps = s.width / 2
    inst = Instance(tuple(s.points), eps, d, EXACT if exact else FLOAT)
    return inst, s.k


def slab_min_width(s: SlabInstance) -> Scalar:
    """Width of the thinnest slab holding ``k`` points (exhaustive over k-subsets)."""
    d = s.points[0].dim
    inst = Instance(tuple(s.points), s.width * 0, d, EXACT if isinstance(s.width, Fraction) else FLOAT)
    return 2 * min(solve_minimax(inst, c).gamma for c in itertools.combinations(range(inst.n), s.k))


# --------------------------------------------------------------------------
# k-CLIQUE


def clique_threshold(M: int) -> Fraction:
    return Fraction(1, 2 * (M + 2))


def clique_to_maxcon(g: Graph, k: int) -> tuple[Instance, int, Fraction]:
    """Point set whose maximum consensus reaches ``k + C(k,2)`` iff ``g`` has a k-clique.

    ``D_V``: for each vertex ``v`` and slot ``alpha``, ``(e_alpha, v)``.
    ``D_E``: for each edge, both orientations ``(u, v)``, and each slot pair
    ``alpha < beta``, ``(e_alpha + M e_beta, u + M v)``.
    """
    M = g.num_vertices
    if not 2 <= k <= M:
        raise InputError(f"k={k} outside 2..{M}")
    one, zero = Fraction(1), Fraction(0)

    def unit(*pairs):
        a = [zero] * k
        for pos, val in pairs:
            a[pos] = Fraction(val)
        return tuple(a)

    pts = []
    for v in range(1, M + 1):
        for alpha in range(k):
            pts.append(DataPoint(unit((alpha, one)), Fraction(v)))
    arcs = sorted({(u, v) for u, v in g.edges} | {(v, u) for u, v in g.edges})
    for u, v in arcs:
        for alpha, beta in itertools.combinations(range(k), 2):
            pts.append(DataPoint(unit((alpha, 1), (beta, M)), Fraction(u + M * v)))
    eps = clique_threshold(M)
    inst = Instance(
        tuple(pts), eps, k, EXACT, {"reduction": "clique", "M": M, "k": k, "num_edges": len(g.edges)}
    )
    return inst, k + math.comb(k, 2), eps


def _nearest_int(v: Scalar) -> int:
    return math.floor(v + Fraction(1, 2)) if isinstance(v, Fraction) else math.floor(v + 0.5)


def decode_clique(x: Sequence[Scalar], k: int, M: int) -> frozenset:
    """Vertices picked by the slots: each coordinate rounded and clamped to 1..M."""
    if len(x) != k:
        raise InputError(f"model has {len(x)} coordinates, expected k={k}")
    return frozenset(min(M, max(1, _nearest_int(v))) for v in x)


def is_clique(g: Graph, vertices: Iterable[int]) -> bool:
    vs = sorted(set(vertices))
    return all(g.has_edge(u, v) for u, v in itertools.combinations(vs, 2))


def clique_number(g: Graph) -> int:
    best = 1
    for size in range(2, g.num_vertices + 1):
        if any(is_clique(g, c) for c in itertools.combinations(range(1, g.num_vertices + 1), size)):
            best = size
        else:
            break
    return best


# --------------------------------------------------------------------------
# MAX-2SAT


TWOSAT_EPSILON = Fraction(1, 2)


def twosat_to_maxcon(f: TwoSatFormula) -> tuple[Instance, Fraction]:
    """Six measurements per clause ``(+-v_p) or (+-v_q)`` with signs ``s_p, s_q``.

    ``(s_p e_p + s_q e_q, 2)``, ``(s_p e_p + s_q e_q, 0)``, ``(s_p e_p, -1)``,
    ``(s_p e_p, 1)``, ``(s_q e_q, -1)``, ``(s_q e_q, 1)``.  A clause repeating
    a variable gets the sum of its two unit vectors.
    """
    k = f.num_vars
    zero = Fraction(0)

    def vec(*terms):
        a = [zero] * k
        for var, sgn in terms:
            a[var - 1] += sgn
        return tuple(a)

    pts = []
    for (p, neg_p), (q, neg_q) in f.clauses:
        sp = -1 if neg_p else 1
        sq = -1 if neg_q else 1
        pair = vec((p, sp), (q, sq))
        first = vec((p, sp))
        second = vec((q, sq))
        pts += [
            DataPoint(pair, Fraction(2)),
            DataPoint(pair, zero),
            DataPoint(first, Fraction(-1)),
            DataPoint(first, Fraction(1)),
            DataPoint(second, Fraction(-1)),
            DataPoint(second, Fraction(1)),
        ]
    inst = Instance(
        tuple(pts), TWOSAT_EPSILON, k, EXACT, {"reduction": "2sat", "num_clauses": f.num_clauses}
    )
    return inst, TWOSAT_EPSILON


def decode_assignment(x: Sequence[Scalar]) -> tuple[bool, ...]:
    """Nearest bipolar vector as a truth assignment (``x_j >= 0`` is true)."""
    return tuple(v >= 0 for v in x)


def bipolar(assignment: Sequence[bool]) -> tuple[Fraction, ...]:
    return tuple(Fraction(1) if t else Fraction(-1) for t in assignment)


def satisfied_count(f: TwoSatFormula, assignment: Sequence[bool]) -> int:
    return sum(
        1 for c in f.clauses if any(assignment[var - 1] != neg for var, neg in c)
    )


def max2sat_brute_force(f: TwoSatFormula) -> tuple[int, tuple[bool, ...]]:
    best, arg = -1, None
    for bits in itertools.product((True, False), repeat=f.num_vars):
        s = satisfied_count(f, bits)
        if s > best:
            best, arg = s, bits
    return best, arg


# --------------------------------------------------------------------------
# Certificates


def _exact_optimum(inst: Instance):
    return grouped_search(inst)


def verify_clique(g: Graph, k: int) -> ReductionCertificate:
    M = g.num_vertices
    if M > CLIQUE_LIMITS[0] or k > CLIQUE_LIMITS[1]:
        raise SolverRefusal(f"clique certificate limited to M <= {CLIQUE_LIMITS[0]}, k <= {CLIQUE_LIMITS[1]}")
    inst, psi, eps = clique_to_maxcon(g, k)
    omega = clique_number(g)
    res = _exact_optimum(inst)
    witness = decode_clique(res.model, k, M)
    n_v = k * M
    v_count = sum(1 for i in res.inliers if i < n_v)
    e_count = res.consensus - v_count
    has_clique = omega >= k
    reaches = res.consensus == psi
    ok = (
        res.consensus <= psi
        and v_count <= k
        and e_count <= math.comb(k, 2)
        and reaches == has_clique
        and (not reaches or (len(witness) == k and is_clique(g, witness)))
    )
    details = {
        "num_points": inst.n,
        "expected_num_points": k * M + 2 * len(g.edges) * math.comb(k, 2),
        "vertex_inliers": v_count,
        "edge_inliers": e_count,
        "clique_number": omega,
        "model": list(res.model),
    }
    return ReductionCertificate("clique", omega, res.consensus, psi, sorted(witness), eps, ok, details)


def verify_twosat(f: TwoSatFormula) -> ReductionCertificate:
    if f.num_vars > TWOSAT_LIMITS[0] or f.num_clauses > TWOSAT_LIMITS[1]:
        raise SolverRefusal(
            f"2-SAT certificate limited to {TWOSAT_LIMITS[0]} variables, {TWOSAT_LIMITS[1]} clauses"
        )
    inst, eps = twosat_to_maxcon(f)
    M = f.num_clauses
    opt, _ = max2sat_brute_force(f)
    res = _exact_optimum(inst)
    t = decode_assignment(res.model)
    sat_t = satisfied_count(f, t)
    psi_t, _ = consensus(inst, bipolar(t))
    ok = (
        res.consensus == 2 * M + opt
        and res.consensus <= 3 * M
        and psi_t >= res.consensus
        and abs(opt - sat_t) == abs(res.consensus - psi_t)
    )
    details = {
        "num_points": inst.n,
        "num_clauses": M,
        "witness_satisfied": sat_t,
        "witness_consensus": psi_t,
        "model": list(res.model),
    }
    return ReductionCertificate("2sat", opt, res.consensus, 2 * M + opt, list(t), eps, ok, details)


def verify_slab(s: SlabInstance) -> ReductionCertificate:
    if len(s.points) > SLAB_MAX_N:
        raise SolverRefusal(f"slab certificate limited to N <= {SLAB_MAX_N}")
    inst, psi = slab_to_maxcon(s)
    slab_yes = within(slab_min_width(s), s.width, inst.mode)
    res = brute_force_oracle(inst) if inst.n <= ORACLE_MAX_N else grouped_search(inst)
    maxcon_yes = res.consensus >= psi
    return ReductionCertificate(
        "slab", int(slab_yes), res.consensus, psi, list(res.model), inst.epsilon, slab_yes == maxcon_yes
    )


def verify_reduction(kind: str, source: Any, **params: Any) -> ReductionCertificate:
    if kind == "clique":
        return verify_clique(source, params["k"])
    if kind == "2sat":
        return verify_twosat(source)
    if kind == "slab":
        return verify_slab(source)
    raise InputError(f"unknown reduction kind {kind!r}")
