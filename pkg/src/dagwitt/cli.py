"""Command-line interface: ``dagwitt <subcommand> [options]``.

Every subcommand prints one JSON document with sorted keys and a
``"schema": 1`` field. Exit status is 0 when all checks pass, 1 when a check
fails and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .acceptance import CRITERIA, run_suite
from .base_arith import GlobalParams, kappa_for
from .cohomology import compare_cohomology, fractional_acyclicity
from .comparison import WittLift, pushforward_connection, pushforward_report, t_f_on_forms, witt_lift_apply
from .dagger import DaggerSeries, FrobeniusLift, MwConnection, monomial_forms, parse_form
from .drw.rewrite import drw_normalize, parse_expression
from .errors import DagwittError, InvalidFrobeniusLift, NotIntegrable, ParseError, RankMismatch
from .homotopy import check_coefficient_homotopy, check_homotopy_identity
from .witt import frobenius_via_ghost, ghost, lift, parse_witt, witt_F, witt_V

SCHEMA = 1


class UsageError(Exception):
    pass


def _params(args, d=None) -> GlobalParams:
    try:
        return GlobalParams(args.p, args.N, getattr(args, "D", None) or 6, d or getattr(args, "vars", 1))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _frobenius(texts, p, N, nvars) -> FrobeniusLift:
    if not texts:
        return FrobeniusLift.coordinate(p, N, nvars)
    if len(texts) != nvars:
        raise UsageError(f"{len(texts)} Frobenius images given for {nvars} variables")
    return FrobeniusLift.parse(texts, p, N)


def _connection(rows, p, N, nvars, rank=None) -> MwConnection:
    if not rows:
        return MwConnection.trivial(rank or 1, p, N, nvars)
    matrix = [[t.strip() for t in row.split(",")] for row in rows]
    if rank is not None and len(matrix) != rank:
        raise UsageError(f"connection has {len(matrix)} rows, rank is {rank}")
    return MwConnection.parse(matrix, p, N, nvars)


def _is_form(text: str) -> bool:
    return any(f"d{v}" in text for v in "xyz")


# -- subcommands -------------------------------------------------------------------------


def cmd_witt(args) -> tuple:
    prm = _params(args)
    a = parse_witt(args.a, prm.p, prm.N, prm.d)
    if args.op in ("add", "sub", "mul"):
        if args.b is None:
            raise UsageError(f"witt {args.op} needs --b")
        b = parse_witt(args.b, prm.p, prm.N, prm.d)
        res = {"add": a + b, "sub": a - b, "mul": a * b}[args.op]
    elif args.op == "V":
        res = witt_V(a)
    elif args.op == "F":
        res = witt_F(a)
        # the ghost-equation oracle must agree
        if res != frobenius_via_ghost(a):
            return {"components": [c.to_text() for c in res.components], "oracle": False}, 1
    else:
        g = ghost(lift(a, prm.N), prm.N)
        return {"ghost": [w.to_text() for w in g], "valid_mod": f"{prm.p}^{prm.N}"}, 0
    return {"components": [c.to_text() for c in res.components], "valid_mod": f"{prm.p}^{res.N}"}, 0


def cmd_drw_normalize(args) -> tuple:
    prm = _params(args)
    tree = parse_expression(args.expr, prm.d)
    if args.strategy == "both":
        a = drw_normalize(tree, prm.p, prm.N, prm.d, "eager")
        b = drw_normalize(tree, prm.p, prm.N, prm.d, "rewrite")
        out = a.to_json()
        out.update({"strategies_agree": a == b, "text": a.to_text()})
        return out, 0 if a == b else 1
    w = drw_normalize(tree, prm.p, prm.N, prm.d, args.strategy)
    out = w.to_json()
    out["text"] = w.to_text()
    return out, 0


def cmd_tf(args) -> tuple:
    nvars = len(args.F) if args.F else args.vars
    prm = _params(args, nvars)
    L = WittLift(_frobenius(args.F, prm.p, prm.N, nvars))
    if _is_form(args.input):
        w = t_f_on_forms(L, parse_form(args.input, prm.p, prm.N, nvars))
        out = w.to_json()
        out["text"] = w.to_text()
        return out, 0
    a = witt_lift_apply(L, DaggerSeries.parse(args.input, prm.p, prm.N, nvars))
    return {"components": [c.to_text() for c in a.components], "valid_mod": f"{prm.p}^{prm.N}"}, 0


def cmd_pushforward(args) -> tuple:
    prm = _params(args)
    Mt = _connection(args.connection, prm.p, prm.N, prm.d)
    L = WittLift(_frobenius(args.F, prm.p, prm.N, prm.d))
    P = pushforward_connection(Mt, L, require_integrable=True)
    rep = pushforward_report(P)
    ok = rep["diagram_commutes"] and rep["integrable"]
    return rep, 0 if ok else 1


def cmd_homotopy(args) -> tuple:
    nvars = len(args.F1)
    prm = _params(args, nvars)
    F1 = _frobenius(args.F1, prm.p, prm.N, nvars)
    F2 = _frobenius(args.F2, prm.p, prm.N, nvars)
    kappa = kappa_for(prm.p, nvars) if args.kappa is None else args.kappa
    gens = []
    for q in range(nvars + 1):
        gens += monomial_forms(prm.p, prm.N, nvars, args.max_deg - q, q)
    rep = check_homotopy_identity(F1, F2, gens, kappa)
    if args.rank:
        Mt = _connection(args.connection, prm.p, prm.N, nvars, args.rank)
        check_coefficient_homotopy(F1, F2, Mt, gens, kappa, report=rep)
    return rep.to_json(), 0 if rep.passed else 1


def cmd_compare(args) -> tuple:
    prm = _params(args)
    Mt = _connection(args.connection, prm.p, prm.N, prm.d, args.rank)
    L = WittLift(FrobeniusLift.coordinate(prm.p, prm.N, prm.d))
    out = compare_cohomology(Mt, L, prm.D)
    return out.to_json(), 0 if out.passed else 1


def cmd_frac(args) -> tuple:
    prm = _params(args)
    rep = fractional_acyclicity(prm.D, prm.N, p=prm.p, d=prm.d)
    return rep.to_json(), 0 if rep.passed else 1


def cmd_acceptance(args) -> tuple:
    if args.suite == "all":
        numbers = sorted(CRITERIA)
    else:
        try:
            numbers = sorted({int(x) for x in args.suite.split(",")})
        except ValueError as exc:
            raise UsageError(f"bad suite {args.suite!r}") from exc
        if any(n not in CRITERIA for n in numbers):
            raise UsageError(f"criteria are numbered 1..{len(CRITERIA)}")
    results = run_suite(numbers, args.seed)
    for r in results:
        print(r.line, file=sys.stderr)
    ok = all(r.passed for r in results)
    return {"criteria": [r.to_json() for r in results], "pass": ok, "seed": args.seed}, 0 if ok else 1


# -- parser -------------------------------------------------------------------------------


def _common(sp, D=False, vars_=True):
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--N", type=int, required=True)
    if D:
        sp.add_argument("--D", type=int, required=True)
    if vars_:
        sp.add_argument("--vars", type=int, default=1)
    sp.add_argument("--output", help="also write the JSON report to this file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dagwitt", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("witt", help="Witt vector arithmetic")
    sp.add_argument("op", choices=["add", "sub", "mul", "V", "F", "ghost"])
    _common(sp)
    sp.add_argument("--a", required=True)
    sp.add_argument("--b")
    sp.set_defaults(func=cmd_witt)

    sp = sub.add_parser("drw-normalize", help="normal form of a de Rham-Witt expression")
    _common(sp)
    sp.add_argument("--expr", required=True)
    sp.add_argument("--strategy", choices=["eager", "rewrite", "both"], default="both")
    sp.set_defaults(func=cmd_drw_normalize)

    sp = sub.add_parser("tf", help="apply t_F to a function or a form")
    _common(sp)
    sp.add_argument("--F", action="append", help="Frobenius image of each variable, in order")
    sp.add_argument("--input", required=True)
    sp.set_defaults(func=cmd_tf)

    sp = sub.add_parser("pushforward", help="push a connection forward along t_F")
    _common(sp)
    sp.add_argument("--F", action="append")
    sp.add_argument("--connection", action="append", help="one matrix row, entries separated by commas")
    sp.set_defaults(func=cmd_pushforward)

    sp = sub.add_parser("homotopy-check", help="verify hd + dh = p^kappa (psi_2 - psi_1)")
    _common(sp, vars_=False)
    sp.add_argument("--F1", action="append", required=True)
    sp.add_argument("--F2", action="append", required=True)
    sp.add_argument("--max-deg", type=int, default=6)
    sp.add_argument("--rank", type=int, default=0, help="also check e (x) g through L^E for this rank")
    sp.add_argument("--connection", action="append")
    sp.add_argument("--kappa", type=int)
    sp.set_defaults(func=cmd_homotopy)

    sp = sub.add_parser("compare", help="kernel/cokernel exponents of t_F on cohomology slices")
    _common(sp, D=True)
    sp.add_argument("--connection", action="append")
    sp.add_argument("--rank", type=int)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("frac-acyclicity", help="cohomology of the fractional part")
    _common(sp, D=True)
    sp.set_defaults(func=cmd_frac)

    sp = sub.add_parser("acceptance", help="run the acceptance suite")
    sp.add_argument("--suite", default="all", help="'all' or a comma-separated list of criterion numbers")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_acceptance)
    return ap


def render(payload: dict) -> str:
    return json.dumps({**payload, "schema": SCHEMA}, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload, code = args.func(args)
    except (UsageError, ParseError, InvalidFrobeniusLift, RankMismatch, NotIntegrable) as exc:
        print(f"dagwitt {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except DagwittError as exc:
        payload, code = {"error": f"{type(exc).__name__}: {exc}"}, 1
    text = render(payload)
    sys.stdout.buffer.write(text.encode("utf-8"))
    sys.stdout.flush()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
