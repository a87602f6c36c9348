"""Command-line entry point.

Exit codes: 0 success, 1 certificate verdict false, 2 bad usage or bad input,
3 solver refusal (instance too large for an exhaustive method).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import formats
from .bench import SWEEPS, run_sweep
from .core import InputError
from .generate import DEFAULT_EPSILON, generate_random
from .reductions import clique_to_maxcon, twosat_to_maxcon, verify_clique, verify_twosat
from .solvers import ALGORITHMS, SolverConfig, SolverRefusal, solve

EXIT_OK = 0
EXIT_VERDICT_FALSE = 1
EXIT_USAGE = 2
EXIT_REFUSED = 3


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="maxcon", description="Maximum consensus fitting tools.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("instance")
    p.add_argument("--algo", choices=ALGORITHMS, default="fpt")
    p.add_argument("--max-outliers", type=int, default=None)
    p.add_argument("--iters", type=int, default=500, help="RANSAC iterations")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--parallel", action="store_true")
    p.add_argument("--no-prune", action="store_true", help="disable FPT incumbent pruning")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in the output")

    g = sub.add_parser("generate", help="write an instance file")
    gsub = g.add_subparsers(dest="kind", required=True)
    gc = gsub.add_parser("clique")
    gc.add_argument("graph")
    gc.add_argument("--k", type=int, required=True)
    gc.add_argument("--out")
    gs = gsub.add_parser("2sat")
    gs.add_argument("cnf")
    gs.add_argument("--out")
    gr = gsub.add_parser("random")
    gr.add_argument("--n", type=int, required=True)
    gr.add_argument("--d", type=int, required=True)
    gr.add_argument("--inlier-frac", required=True)
    gr.add_argument("--seed", type=int, required=True)
    gr.add_argument("--epsilon", default=str(DEFAULT_EPSILON))
    gr.add_argument("--exact", action="store_true")
    gr.add_argument("--out")

    v = sub.add_parser("verify", help="check a reduction end to end")
    vsub = v.add_subparsers(dest="kind", required=True)
    vc = vsub.add_parser("clique")
    vc.add_argument("graph")
    vc.add_argument("--k", type=int, required=True)
    vs = vsub.add_parser("2sat")
    vs.add_argument("cnf")

    b = sub.add_parser("bench", help="scaling sweep")
    b.add_argument("--sweep", choices=SWEEPS, required=True)
    b.add_argument("--algo", choices=ALGORITHMS, nargs="+", default=["fpt"])
    b.add_argument("--values", type=_int_list, default=None)
    b.add_argument("--reps", type=int, default=1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--n", type=int, default=20)
    b.add_argument("--d", type=int, default=2)
    b.add_argument("--out")
    return ap


def _cmd_solve(args) -> int:
    inst = formats.parse_instance(_read(args.instance))
    cfg = SolverConfig(
        algo=args.algo,
        max_outliers=args.max_outliers,
        ransac_iters=args.iters,
        rng_seed=args.seed,
        parallel=args.parallel,
        prune=not args.no_prune,
    )
    res = solve(inst, cfg)
    out = formats.result_to_dict(res, args.algo)
    if not args.timing:
        # Keep stdout reproducible byte for byte.
        del out["stats"]["elapsed"]
    _emit(_dump(out), None)
    return EXIT_OK


def _cmd_generate(args) -> int:
    if args.kind == "clique":
        inst, _, _ = clique_to_maxcon(formats.parse_graph(_read(args.graph)), args.k)
    elif args.kind == "2sat":
        inst, _ = twosat_to_maxcon(formats.parse_cnf2(_read(args.cnf)))
    else:
        inst = generate_random(
            args.n, args.d, args.inlier_frac, args.seed, args.epsilon, exact=args.exact
        )
    _emit(formats.write_instance(inst), args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.kind == "clique":
        cert = verify_clique(formats.parse_graph(_read(args.graph)), args.k)
    else:
        cert = verify_twosat(formats.parse_cnf2(_read(args.cnf)))
    _emit(_dump(formats.certificate_to_dict(cert)), None)
    return EXIT_OK if cert.verdict else EXIT_VERDICT_FALSE


def _cmd_bench(args) -> int:
    report = run_sweep(
        args.sweep, args.algo, args.values, reps=args.reps, seed=args.seed, n=args.n, d=args.d
    )
    _emit(_dump(report.as_dict()), args.out)
    return EXIT_OK


COMMANDS = {"solve": _cmd_solve, "generate": _cmd_generate, "verify": _cmd_verify, "bench": _cmd_bench}


def cli_main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except SolverRefusal as exc:
        print(f"maxcon: refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except InputError as exc:
        print(f"maxcon: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli_main())
