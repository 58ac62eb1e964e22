"""Command-line front end: ``tlcat verify`` and ``tlcat eval``."""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .diagram import DiagramError, check_planar
from .dsl import DSLSyntaxError, builtin_operators, parse, parse_matrix_file, serialize
from .evaluate import UnknownOperatorError, evaluate
from .linalg import DimensionMismatchError, default_tol
from .report import VerificationReport
from .rewrite import reduce_to_normal_form
from .suites import SUITES, SuiteConfig, SuiteConfigError, run_suite

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def fmt_number(x: float) -> str:
    """12 significant digits, lowercase exponent, tiny values and -0 as 0."""
    if math.isinf(x) or math.isnan(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    if abs(x) < 5e-13:
        return "0"
    return f"{x:.12g}"


def _config_float(x: float) -> float:
    # user-supplied thresholds are never snapped
    return float(f"{float(x):.12g}")


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        s = fmt_number(float(v))
        return s if s in ("inf", "-inf", "nan") else float(s)
    if isinstance(v, complex):
        return [_json_value(v.real), _json_value(v.imag)]
    if isinstance(v, dict):
        return {str(k): _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def record(r: VerificationReport, cfg: SuiteConfig) -> dict:
    return {
        "check_id": r.check_id,
        "lhs": r.lhs_descr,
        "rhs": r.rhs_descr,
        "max_deviation": _json_value(r.max_deviation),
        "tolerance": _config_float(r.tolerance),
        "passed": bool(r.passed),
        "diagram_confirmed": bool(r.diagram_confirmed),
        "ok": bool(r.ok),
        "seed": cfg.seed if r.seed is None else r.seed,
        "d": cfg.d if r.d is None else r.d,
        "details": _json_value(r.details),
    }


def render(reports: list[VerificationReport], cfg: SuiteConfig, fmt: str) -> str:
    recs = [record(r, cfg) for r in reports]
    if fmt == "json":
        doc = {
            "schema": SCHEMA,
            "suite": cfg.suite,
            "d": cfg.d,
            "tol": _config_float(cfg.tol),
            "seed": cfg.seed,
            "passed": all(r["ok"] for r in recs),
            "records": recs,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    lines = []
    for r in recs:
        status = "PASS" if r["ok"] else "FAIL"
        diag = "diagram" if r["diagram_confirmed"] else "matrix"
        lines.append(f"{status} {r['check_id']} dev={fmt_number(float(r['max_deviation']))} [{diag}]")
    n_ok = sum(r["ok"] for r in recs)
    lines.append(f"{n_ok}/{len(recs)} checks passed (suite={cfg.suite} d={cfg.d} seed={cfg.seed})")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    tol = default_tol() if args.tol is None else args.tol
    try:
        cfg = SuiteConfig(args.suite, d=args.dim, tol=tol, seed=args.seed, jobs=args.jobs)
    except SuiteConfigError as exc:
        print(f"tlcat: {exc}", file=sys.stderr)
        return EXIT_USAGE
    reports = run_suite(cfg)
    text = render(reports, cfg, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def format_matrix(m: np.ndarray) -> str:
    rows = []
    for row in np.atleast_2d(m):
        rows.append(" ".join(f"{fmt_number(z.real)} {fmt_number(z.imag)}" for z in row))
    return "\n".join(rows) + "\n"


def cmd_eval(args) -> int:
    try:
        src = Path(args.diagram).read_text()
        d = parse(src).d
        ops = builtin_operators(d)
        if args.ops:
            for name, m in parse_matrix_file(Path(args.ops).read_text()).items():
                if m.shape != (d, d):
                    raise DimensionMismatchError(f"operator {name!r} is {m.shape[0]}x{m.shape[1]}, diagram has dim {d}")
                ops[name] = m
        diag = parse(src, ops)
        if args.action == "evaluate":
            out = format_matrix(evaluate(diag, ops))
        elif args.action == "reduce":
            out = serialize(reduce_to_normal_form(diag, ops)) + "\n"
        else:
            out = ("true" if check_planar(diag) else "false") + "\n"
    except OSError as exc:
        print(f"tlcat: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DSLSyntaxError, UnknownOperatorError, DimensionMismatchError, DiagramError) as exc:
        print(f"tlcat: {args.diagram}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tlcat", description="Decorated Temperley-Lieb diagram calculus checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, choices=SUITES + ("all",))
    v.add_argument("--dim", type=int, default=2)
    v.add_argument("--tol", type=float, default=None, help="default 1e-10 or $TLCAT_TOL")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--format", choices=("json", "text"), default="json")
    v.add_argument("--out", default=None)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eval", help="evaluate, reduce or classify a DSL diagram")
    e.add_argument("diagram")
    e.add_argument("--ops", default=None, help="matrix file with user operators")
    e.add_argument("--action", choices=("evaluate", "reduce", "planar"), required=True)
    e.set_defaults(func=cmd_eval)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"tlcat: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
