"""JSON instance/result files and DIMACS-style graph and 2-CNF readers.

Instance file (``format_version`` 1)::

    {"format_version": 1, "d": 2, "epsilon": "1/2", "mode": "exact",
     "points": [{"a": ["1", "0"], "b": "3"}, ...], "metadata": {...}}

Exact scalars are written canonically as ``"p"`` or ``"p/q"`` (q > 0, reduced);
float scalars use ``repr``.  Indices in result files are 1-based.
"""

from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from typing import Any

from .core import EXACT, FLOAT, DataPoint, FitResult, InputError, Instance, Scalar
from .reductions import Graph, ReductionCertificate, TwoSatFormula

FORMAT_VERSION = 1

_RATIONAL = re.compile(r"[+-]?\d+/\d+")
_DECIMAL = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")


class ParseError(InputError):
    def __init__(self, where: str, msg: str) -> None:
        super().__init__(f"{where}: {msg}")
        self.where = where


def parse_scalar(text: Any, mode: str, where: str) -> Scalar:
    if not isinstance(text, str):
        raise ParseError(where, f"expected a string scalar, got {type(text).__name__}")
    s = text.strip()
    if _RATIONAL.fullmatch(s):
        num, den = s.split("/")
        if int(den) == 0:
            raise ParseError(where, f"zero denominator in {text!r}")
        v = Fraction(int(num), int(den))
    elif _DECIMAL.fullmatch(s):
        v = Fraction(s)
    else:
        raise ParseError(where, f"malformed scalar {text!r}")
    if mode == EXACT:
        return v
    f = float(s) if "/" not in s else float(v)
    if not math.isfinite(f):
        raise ParseError(where, f"scalar {text!r} overflows a float")
    return f


def format_scalar(v: Scalar) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return repr(float(v))


def instance_to_dict(inst: Instance) -> dict:
    out = {
        "format_version": FORMAT_VERSION,
        "d": inst.d,
        "epsilon": format_scalar(inst.epsilon),
        "mode": inst.mode,
        "points": [
            {"a": [format_scalar(v) for v in p.a], "b": format_scalar(p.b)} for p in inst.points
        ],
    }
    if inst.metadata:
        out["metadata"] = inst.metadata
    return out


def write_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=1) + "\n"


def parse_instance(text: str) -> Instance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    if not isinstance(obj, dict):
        raise ParseError("$", "instance must be a JSON object")
    version = obj.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ParseError("$.format_version", f"unsupported version {version!r}")
    mode = obj.get("mode", EXACT)
    if mode not in (EXACT, FLOAT):
        raise ParseError("$.mode", f"unknown mode {mode!r}")
    d = obj.get("d")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ParseError("$.d", "d must be a positive integer")
    if "epsilon" not in obj:
        raise ParseError("$.epsilon", "missing")
    eps = parse_scalar(obj["epsilon"], mode, "$.epsilon")
    if eps < 0:
        raise ParseError("$.epsilon", "must be non-negative")
    raw = obj.get("points")
    if not isinstance(raw, list) or not raw:
        raise ParseError("$.points", "must be a non-empty list")
    pts = []
    for i, p in enumerate(raw):
        where = f"$.points[{i}]"
        if not isinstance(p, dict) or "a" not in p or "b" not in p:
            raise ParseError(where, "expected an object with 'a' and 'b'")
        if not isinstance(p["a"], list):
            raise ParseError(f"{where}.a", "must be a list")
        if len(p["a"]) != d:
            raise ParseError(f"{where}.a", f"has {len(p['a'])} entries, expected d={d}")
        a = tuple(parse_scalar(v, mode, f"{where}.a[{j}]") for j, v in enumerate(p["a"]))
        pts.append(DataPoint(a, parse_scalar(p["b"], mode, f"{where}.b")))
    meta = obj.get("metadata", {})
    if not isinstance(meta, dict):
        raise ParseError("$.metadata", "must be an object")
    return Instance(tuple(pts), eps, d, mode, meta)


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if s and not s.startswith("c") and not s.startswith("%"):
            yield lineno, s.split()


def parse_graph(text: str) -> Graph:
    """DIMACS edge format: ``p edge M E`` then ``e u v`` lines."""
    M = None
    edges: set[tuple[int, int]] = set()
    for lineno, tok in _data_lines(text):
        where = f"line {lineno}"
        if tok[0] == "p":
            if len(tok) != 4 or tok[1] not in ("edge", "col"):
                raise ParseError(where, "expected 'p edge M E'")
            if M is not None:
                raise ParseError(where, "duplicate header")
            try:
                M = int(tok[2])
                int(tok[3])
            except ValueError:
                raise ParseError(where, "non-integer header field") from None
            if M < 1:
                raise ParseError(where, "graph needs at least one vertex")
        elif tok[0] == "e":
            if M is None:
                raise ParseError(where, "edge before 'p edge' header")
            if len(tok) != 3:
                raise ParseError(where, "expected 'e u v'")
            try:
                u, v = int(tok[1]), int(tok[2])
            except ValueError:
                raise ParseError(where, "non-integer vertex") from None
            if u == v:
                raise ParseError(where, f"self-loop on vertex {u}")
            for w in (u, v):
                if not 1 <= w <= M:
                    raise ParseError(where, f"vertex {w} outside 1..{M}")
            edges.add((min(u, v), max(u, v)))
        else:
            raise ParseError(where, f"unknown line type {tok[0]!r}")
    if M is None:
        raise ParseError("line 1", "missing 'p edge' header")
    return Graph(M, frozenset(edges))


def write_graph(g: Graph) -> str:
    lines = [f"p edge {g.num_vertices} {len(g.edges)}"]
    lines += [f"e {u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def parse_cnf2(text: str) -> TwoSatFormula:
    """DIMACS CNF restricted to clauses of exactly two literals."""
    k = None
    clauses = []
    pending: list[int] = []
    for lineno, tok in _data_lines(text):
        where = f"line {lineno}"
        if tok[0] == "p":
            if len(tok) != 4 or tok[1] != "cnf":
                raise ParseError(where, "expected 'p cnf k M'")
            if k is not None:
                raise ParseError(where, "duplicate header")
            try:
                k = int(tok[2])
                int(tok[3])
            except ValueError:
                raise ParseError(where, "non-integer header field") from None
            if k < 1:
                raise ParseError(where, "formula needs at least one variable")
            continue
        if k is None:
            raise ParseError(where, "clause before 'p cnf' header")
        for t in tok:
            try:
                lit = int(t)
            except ValueError:
                raise ParseError(where, f"bad literal {t!r}") from None
            if lit == 0:
                if len(pending) != 2:
                    raise ParseError(where, f"clause has {len(pending)} literals, expected 2")
                clauses.append(tuple((abs(l), l < 0) for l in pending))
                pending = []
                continue
            if abs(lit) > k:
                raise ParseError(where, f"variable {abs(lit)} outside 1..{k}")
            pending.append(lit)
    if k is None:
        raise ParseError("line 1", "missing 'p cnf' header")
    if pending:
        raise ParseError("end of input", "unterminated clause")
    return TwoSatFormula(k, tuple(clauses))


def write_cnf2(f: TwoSatFormula) -> str:
    lines = [f"p cnf {f.num_vars} {f.num_clauses}"]
    for c in f.clauses:
        lines.append(" ".join(str(-v if neg else v) for v, neg in c) + " 0")
    return "\n".join(lines) + "\n"


def result_to_dict(res: FitResult, algo: str | None = None) -> dict:
    out = {}
    if algo is not None:
        out["algo"] = algo
    out.update(
        {
            "consensus": res.consensus,
            "inliers": [i + 1 for i in res.inliers],
            "model": [format_scalar(v) for v in res.model],
            "stats": res.stats.as_dict(),
        }
    )
    return out


def _jsonable(v: Any) -> Any:
    if isinstance(v, (Fraction, float)):
        return format_scalar(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(u) for u in v]
    if isinstance(v, dict):
        return {k: _jsonable(u) for k, u in v.items()}
    return v


def certificate_to_dict(cert: ReductionCertificate) -> dict:
    return {
        "source_kind": cert.source_kind,
        "source_optimum": cert.source_optimum,
        "maxcon_optimum": cert.maxcon_optimum,
        "psi": cert.psi,
        "decoded_witness": _jsonable(cert.decoded_witness),
        "threshold_used": format_scalar(cert.threshold_used),
        "verdict": cert.verdict,
        "details": _jsonable(cert.details),
    }
