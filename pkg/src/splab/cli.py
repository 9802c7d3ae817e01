"""``splab`` command line: Khavinson constants, verification campaigns, Bohr radii.

Output is JSON lines by default (``--format csv`` for tables). Exit codes:
0 success, 1 a verified bound was violated, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from typing import Sequence, TextIO

from splab import bohr, bounds
from splab.campaigns import TAGS, CampaignConfig, run_campaign
from splab.errors import SeriesFormatError, SplabError
from splab.series import read_series

TOL_ENV = "SPLAB_DEFAULT_TOL"

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_p(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        return float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid norm exponent {text!r}") from exc


def _p_field(p: float):
    return "inf" if math.isinf(p) else p


def _emit(rows: list[dict], fmt: str, out: TextIO, columns: Sequence[str] | None = None) -> None:
    if fmt == "json":
        for row in rows:
            out.write(json.dumps(row) + "\n")
        return
    columns = list(columns or (rows[0].keys() if rows else []))
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([json.dumps(row[c]) if isinstance(row[c], (list, dict)) else row[c] for c in columns])


def default_tolerance() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None or not raw.strip():
        return bounds.DEFAULT_TOLERANCE
    try:
        tol = float(raw)
    except ValueError as exc:
        raise UsageError(f"{TOL_ENV} must be a decimal number, got {raw!r}") from exc
    if not tol > 0:
        raise UsageError(f"{TOL_ENV} must be positive, got {raw!r}")
    return tol


# --- commands -------------------------------------------------------------

def cmd_khavinson(args, out: TextIO) -> int:
    constant = bounds.khavinson_constant(args.dim, args.radius)
    row = {"n": args.dim, "r": args.radius, "c_n": bounds.c_n_constant(args.dim), "constant": constant}
    _emit([row], args.format, out)
    return EXIT_OK


def cmd_verify(args, out: TextIO) -> int:
    tol = args.tol if args.tol is not None else default_tolerance()
    cfg = CampaignConfig(
        theorem=args.theorem, trials=args.trials, seed=args.seed, n=args.n, nu=args.nu, p=args.p,
        degree=args.degree, tolerance=tol, workers=args.workers,
    )
    result = run_campaign(cfg)
    columns = ["theorem", "point", "lhs", "rhs", "margin", "ratio", "notes"]
    _emit([r.to_dict() for r in result.reports], args.format, out, columns)
    if result.violations:
        for r in result.violations:
            print(f"violation: {r.to_json()}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def bounds_dims(top: int) -> list[int]:
    dims = []
    k = 1
    while k <= top:
        dims.append(k)
        k *= 2
    if top not in dims:
        dims.append(top)
    return dims


def cmd_bohr(args, out: TextIO) -> int:
    if args.mode == "1d":
        cert = bohr.class_bohr_1d()
        row = {
            "mode": "1d",
            "radius": cert.radius,
            "witness_radius": cert.witness.radius if cert.witness else None,
            "certificate": [{"f0": f0, "value": v} for f0, v in cert.grid],
        }
        if args.format == "json":
            _emit([row], "json", out)
        else:
            _emit([{"f0": f0, "value": v, "radius": cert.radius} for f0, v in cert.grid], "csv", out)
        return EXIT_OK
    if args.mode == "function":
        if not args.series:
            raise UsageError("--mode function requires --series FILE")
        try:
            f = read_series(args.series)
        except OSError as exc:
            raise UsageError(f"cannot read series file: {exc}") from exc
        res = bohr.bohr_radius_of(f, args.functional, args.p, seed=args.seed)
        row = {
            "mode": "function", "p": _p_field(args.p), "functional": res.functional_tag, "radius": res.radius,
            "bracket": list(res.bracket), "evaluations": res.evaluations, "notes": res.notes,
        }
        _emit([row], args.format, out)
        return EXIT_OK
    rows = []
    for n in bounds_dims(args.dim):
        lower = bohr.lower_bound_radius(n, args.p)
        if n >= 2:
            terms = bohr.upper_bound_terms(n, args.p)
            k, upper = min(terms, key=lambda kv: kv[1])
        else:
            k, upper = None, None
        rows.append({
            "n": n, "p": _p_field(args.p), "lower": lower, "upper": upper, "k": k,
            "ratio": upper / lower if upper is not None else None,
        })
    _emit(rows, args.format, out, ["n", "p", "lower", "upper", "k", "ratio"])
    return EXIT_OK


# --- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="splab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    k = sub.add_parser("khavinson", help="sharp gradient constant C(x) for bounded harmonic functions")
    k.add_argument("--dim", type=int, required=True)
    k.add_argument("--radius", type=float, required=True)
    k.add_argument("--format", choices=("json", "csv"), default="json")
    k.set_defaults(func=cmd_khavinson)

    v = sub.add_parser("verify", help="seeded random and extremal checks of one bound")
    v.add_argument("--theorem", choices=TAGS, required=True)
    v.add_argument("--trials", type=int, default=50)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--n", type=int)
    v.add_argument("--nu", type=int)
    v.add_argument("--p", type=parse_p)
    v.add_argument("--degree", type=int)
    v.add_argument("--tol", type=float, help=f"violation tolerance (default ${TOL_ENV} or 1e-8)")
    v.add_argument("--workers", type=int)
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bohr", help="Bohr radii: the 1-D class value, one function, or bound tables")
    b.add_argument("--mode", choices=("1d", "function", "bounds"), required=True)
    b.add_argument("--p", type=parse_p, default=math.inf)
    b.add_argument("--dim", type=int, default=16)
    b.add_argument("--series")
    b.add_argument("--functional", choices=("sum", "abs-pair"), default="sum")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--format", choices=("json", "csv"), default="json")
    b.set_defaults(func=cmd_bohr)
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args, out)
    except SeriesFormatError as exc:
        print(f"error: malformed series file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SplabError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
