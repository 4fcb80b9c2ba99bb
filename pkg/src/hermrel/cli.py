"""Command-line entry point: ``hermrel <subcommand> --field p^2m ...``.

Exit status is 0 on success, 1 when a sweep or self-check finds violations,
and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys
from pathlib import Path

from . import projective as pj
from .census import SWEEPS, SweepPlan, parse_plan_file
from .classify import class_census, classification_report, equivalent
from .curve import Curve
from .errors import HermrelError
from .field import parse_field, solve_artin_schreier, solve_kummer, solve_semilinear
from .verify import verify_all

DEFAULT_SEED = 20240601


class UsageError(Exception):
    pass


def _emit(out, fmt: str, payload: dict, text: str, csv: str | None = None):
    if fmt == "json":
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    elif fmt == "csv":
        if csv is None:
            raise UsageError("csv output is not available for this subcommand")
        out.write(csv)
    else:
        out.write(text.rstrip("\n") + "\n")


def _field(args):
    if not args.field:
        raise UsageError("--field is required")
    return parse_field(args.field)


def _curve(F, text: str) -> Curve:
    return Curve(F, pj.parse_codes(text, 9, F))


def cmd_field_info(args, out) -> int:
    F = _field(args)
    info = {
        "p": F.p,
        "m": F.n // 2,
        "q": F.q,
        "sqrt_q": F.sqrt_q,
        "modulus": list(F.modulus),
        "modulus_code": F.modulus_code,
        "spec": F.spec,
        "generator": F.generator,
        "subfield": list(F.subfield),
    }
    if args.tables:
        info["exp"] = [F.exp(k) for k in range(F.q - 1)]
        info["log"] = [None] + [F.log(a) for a in range(1, F.q)]
        info["frobenius"] = [F.frob(a) for a in range(F.q)]
    text = "\n".join(f"{k}: {v}" for k, v in info.items())
    csv = "code,log,frobenius,trace,norm\n" + "".join(
        f"{a},{'' if a == 0 else F.log(a)},{F.frob(a)},{F.trace(a)},{F.norm(a)}\n" for a in range(F.q)
    )
    _emit(out, args.format or "text", info, text, csv)
    return 0


def cmd_points(args, out) -> int:
    F = _field(args)
    C = _curve(F, args.matrix)
    rep = C.report()
    flex = set(map(tuple, rep["inflexions"]))
    text = f"N = {rep['N']}\n" + "".join(
        f"{pj.format_codes(P)}{'  inflexion' if tuple(P) in flex else ''}\n" for P in rep["points"]
    )
    csv = "x,y,z,inflexion\n" + "".join(f"{P[0]},{P[1]},{P[2]},{int(tuple(P) in flex)}\n" for P in rep["points"])
    _emit(out, args.format or "text", rep, text, csv)
    return 0


def cmd_inflexions(args, out) -> int:
    F = _field(args)
    C = _curve(F, args.matrix)
    flex = C.inflexions()
    payload = {"A": list(C.matrix), "q": F.q, "count": len(flex), "inflexions": [list(P) for P in flex]}
    text = f"{len(flex)} rational inflexions\n" + "".join(pj.format_codes(P) + "\n" for P in flex)
    csv = "x,y,z\n" + "".join(f"{P[0]},{P[1]},{P[2]}\n" for P in flex)
    _emit(out, args.format or "text", payload, text, csv)
    return 0


def cmd_classify(args, out) -> int:
    F = _field(args)
    rep = classification_report(_curve(F, args.matrix))
    if rep["type"] == "out_of_scope":
        text = f"out of theorem scope ({rep['n_inflexions']} rational inflexions, N = {rep['n_points']})"
    else:
        text = f"Type{rep['type']}"
        if rep["invariant"] is not None:
            text += f", invariant {rep['invariant']}"
        text += f", omega {rep['omega']}, N = {rep['n_points']}, inflexions = {rep['n_inflexions']}"
        text += f"\ntransform: {pj.format_codes(rep['transform'])}"
    csv = "q,type,invariant,omega,n_points,n_inflexions\n" + (
        f"{rep['q']},{rep['type']},{'' if rep['invariant'] is None else rep['invariant']},"
        f"{'' if rep['omega'] is None else rep['omega']},{rep['n_points']},{rep['n_inflexions']}\n"
    )
    _emit(out, args.format or "text", rep, text, csv)
    return 0


def cmd_equiv(args, out) -> int:
    F = _field(args)
    C1, C2 = _curve(F, args.a), _curve(F, args.b)
    method = "bruteforce" if args.bruteforce else "theorem"
    kwargs = {"budget": args.budget} if args.budget else {}
    res = equivalent(C1, C2, method, **kwargs)
    payload = {
        "q": F.q,
        "A": list(C1.matrix),
        "B": list(C2.matrix),
        "method": res.method,
        "equivalent": res.equivalent,
        "witness": list(res.witness) if res.witness else None,
    }
    text = "equivalent" if res.equivalent else "not equivalent"
    if res.witness:
        text += f"\nwitness: {pj.format_codes(res.witness)}"
    _emit(out, args.format or "text", payload, text)
    return 0


def cmd_table1(args, out) -> int:
    F = _field(args)
    report = class_census(F)
    payload = report.to_dict()
    payload["matches_expected"] = report.matches_expected(F)
    text = report.to_csv() + "".join(f"# {note}\n" for note in report.notes)
    _emit(out, args.format or "csv", payload, text, report.to_csv())
    return 0


def cmd_solve(args, out) -> int:
    F = _field(args)
    values = [int(v) for v in args.values]
    expected = {"artin-schreier": 1, "kummer": 1, "semilinear": 2}[args.equation]
    if len(values) != expected:
        raise UsageError(f"{args.equation} takes {expected} element code(s)")
    if any(not 0 <= v < F.q for v in values):
        raise UsageError(f"element codes must lie in [0, {F.q})")
    if args.equation == "artin-schreier":
        roots = solve_artin_schreier(F, values[0])
        payload = {"equation": "X^r - X - beta", "beta": values[0]}
    elif args.equation == "kummer":
        roots = solve_kummer(F, values[0])
        payload = {"equation": "X^(r-1) - beta", "beta": values[0]}
    else:
        roots = solve_semilinear(F, values[0], values[1])
        payload = {"equation": "X^r + alpha X + beta", "alpha": values[0], "beta": values[1]}
    payload.update(q=F.q, roots=roots)
    text = " ".join(map(str, roots)) if roots else "no roots"
    csv = "root\n" + "".join(f"{x}\n" for x in roots)
    _emit(out, args.format or "text", payload, text, csv)
    return 0


def _plan_from_args(args) -> SweepPlan:
    overrides = {
        "field": args.field,
        "mode": args.mode,
        "count": args.count,
        "seed": args.seed,
        "workers": args.workers,
        "checks": args.checks,
        "block_size": args.block_size,
        "extension_count": args.extension_count,
        "budget": args.budget,
    }
    text = Path(args.plan).read_text() if args.plan else ""
    if not args.field and "field" not in text:
        raise UsageError("--field is required")
    return parse_plan_file(text, **overrides)


def cmd_sweep(args, out) -> int:
    plan = _plan_from_args(args)
    parse_field(plan.field)
    report = SWEEPS[args.kind](plan)
    logging.getLogger(__name__).info("stats: %s", report.stats)
    fmt = args.format or "json"
    text = (
        f"{report.kind} sweep over {report.field}: {report.curves} curves, "
        f"{len(report.violations)} violations\n" + report.to_csv()
    )
    _emit(out, fmt, report.to_dict(args.stats), text, report.to_csv())
    return 0 if report.ok else 1


def cmd_verify_all(args, out) -> int:
    F = _field(args)
    results = verify_all(F, seed=args.seed, workers=args.workers)
    payload = {
        "field": F.spec,
        "passed": all(r.passed for r in results),
        "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
    }
    text = "".join(r.line() + "\n" for r in results)
    csv = "name,passed,detail\n" + "".join(f"{r.name},{int(r.passed)},\"{r.detail}\"\n" for r in results)
    _emit(out, args.format or "text", payload, text, csv)
    return 0 if payload["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help='field spec "p^2m[:modulus-code]", e.g. 3^2')
    common.add_argument("--format", choices=("json", "csv", "text"))

    parser = argparse.ArgumentParser(prog="hermrel", description="Relatives of the Hermitian curve over F_q.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field-info", parents=[common], help="modulus, generator and tables")
    p.add_argument("--tables", action="store_true", help="include exp/log/frobenius tables")
    p.set_defaults(func=cmd_field_info)

    for name, func, help_ in (
        ("points", cmd_points, "rational points of C_A"),
        ("inflexions", cmd_inflexions, "rational inflexions of C_A"),
        ("classify", cmd_classify, "type and invariant of C_A"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--matrix", required=True, help="9 element codes, row-major")
        p.set_defaults(func=func)

    p = sub.add_parser("equiv", parents=[common], help="projective equivalence of two curves")
    p.add_argument("a", help="first matrix, 9 codes")
    p.add_argument("b", help="second matrix, 9 codes")
    p.add_argument("--bruteforce", action="store_true", help="search all of PGL(3, q)")
    p.add_argument("--budget", type=int, help="largest |PGL(3, q)| the brute force may scan")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("table1", parents=[common], help="classify every x^r y + w x y^r + z^(r+1)")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("solve", parents=[common], help="solve one of the three equations")
    p.add_argument("equation", choices=("artin-schreier", "kummer", "semilinear"))
    p.add_argument("values", nargs="+", help="beta, or alpha beta for semilinear")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", parents=[common], help="census sweep")
    p.add_argument("kind", choices=sorted(SWEEPS))
    p.add_argument("--plan", help="plan file of key=value lines")
    p.add_argument("--mode", choices=("exhaustive", "sampled"))
    p.add_argument("--count", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--checks", help="comma-separated subset of the sweep checks")
    p.add_argument("--block-size", type=int)
    p.add_argument("--extension-count", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--stats", action="store_true", help="include timing in the report")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify-all", parents=[common], help="run every self-check for one field")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify_all)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=err)
    try:
        return args.func(args, out)
    except (UsageError, HermrelError, ValueError, ZeroDivisionError, OSError) as exc:
        err.write(f"hermrel {args.command}: error: {exc}\n")
        return 2


def main():
    sys.exit(run())
