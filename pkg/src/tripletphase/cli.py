"""Command-line interface: ``tripletphase {simulate,phase,emit,subduct,verify}``.

Exit status: 0 on success, 1 when a verification fails, 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from . import checks
from .crystal import load_atoms, load_reflections, needed_keys, phase_from_reflections, simulate
from .errors import InputError, TripletPhaseError
from .exactnum import format_rational
from .laurent import LaurentPolynomial, VariableShape
from .observables import E2_value, ObservableIndex, polynomial_text
from .reduction import SCHEMA as FORMULA_SCHEMA, emit_formula
from .sagbi import generators_to_q, subduct
from .univdenom import DEFAULT_BUDGET, algorithm31

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
DEFAULT_TOL = 1e-6


def _schema(kind: str) -> str:
    return f"tripletphase.{kind}/1"


def _num(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def _emit(args, payload: dict, text: str) -> None:
    if args.output == "json":
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        print(text.rstrip("\n"))


def _vector(text: str) -> list[int]:
    try:
        parts = [int(p) for p in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three integers, got {text!r}") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three integers, got {text!r}")
    return parts


# --------------------------------------------------------------------------
# simulate
# --------------------------------------------------------------------------

def cmd_simulate(args) -> int:
    cell = load_atoms(args.atoms)
    if args.n is not None and args.n != cell.n:
        raise InputError(f"--n {args.n} does not match the {cell.n} atoms in {args.atoms}")
    keys = set(needed_keys(cell.n))
    if args.range:
        R = args.range
        keys |= {ObservableIndex((a, b)) for a in range(-R, R + 1) for b in range(-R, R + 1) if (a, b) != (0, 0)}
    rng = random.Random(args.seed)
    sim = simulate(cell, args.v1, args.v2, mode=args.mode, keys=sorted(keys), rng=rng)
    if args.reflections:
        Path(args.reflections).write_text(sim.reflections.to_text(), encoding="utf-8")
    report = {"schema": _schema("simulate"), **sim.report(), "degenerate_cell": cell.degenerate,
              "reflections_file": args.reflections}
    if args.mode == "rational":
        report["x"] = [format_rational(v) for v in sim.x]
        report["y"] = [format_rational(v) for v in sim.y]
    lines = [
        f"atoms: {cell.n}{' (degenerate: repeated positions)' if cell.degenerate else ''}",
        f"mode: {args.mode}",
        f"reflections: {len(sim.reflections)}" + (f" -> {args.reflections}" if args.reflections else ""),
        f"E2 (true): {_num(sim.e2)}",
        f"cos phi (true): {_num(sim.cos_phi)}",
    ]
    if not args.reflections and args.output == "text":
        lines += ["", sim.reflections.to_text()]
    elif not args.reflections:
        report["reflections_data"] = {str(k): _num(v) for k, v in sim.reflections.entries.items()}
    _emit(args, report, "\n".join(lines))
    return EXIT_OK


# --------------------------------------------------------------------------
# phase
# --------------------------------------------------------------------------

def cmd_phase(args) -> int:
    if args.n is None:
        raise InputError("phase needs --n (2, 3 or 4)")
    refl = load_reflections(args.reflections)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = phase_from_reflections(args.n, refl, tol=args.tol)
    provenance = [
        {"index": str(k), "value": _num(v), "source": refl.source(k)} for k, v in res.inputs.items()
    ]
    payload = {
        "schema": _schema("phase"),
        **res.to_json(),
        "warnings": [str(w.message) for w in caught],
        "provenance": provenance,
    }
    lines = [f"n = {args.n}", f"E2 = {_num(res.e2)}", f"cos phi = {_num(res.cos_phi)}"]
    if res.condition is not None:
        lines.append(f"condition(R) = {res.condition:.3g}")
    lines += [f"warning: {w.message}" for w in caught]
    lines.append("inputs:")
    lines += [f"  {p['index']} = {p['value']}  ({p['source']})" for p in provenance]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


# --------------------------------------------------------------------------
# emit
# --------------------------------------------------------------------------

def cmd_emit(args) -> int:
    if args.n is None:
        raise InputError("emit needs --n (2, 3 or 4)")
    formula = emit_formula(args.n)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    json_path = out / f"formula_n{args.n}.json"
    text_path = out / f"formula_n{args.n}.txt"
    json_path.write_text(json.dumps(formula.to_json()) + "\n", encoding="utf-8")
    text_path.write_text(formula.to_text() + "\n", encoding="utf-8")
    payload = {
        "schema": _schema("emit"),
        "formula_schema": FORMULA_SCHEMA,
        "n": args.n,
        "json": str(json_path),
        "text": str(text_path),
        "nodes": formula.expression.size(),
        "required_observables": [str(i) for i in formula.required_observables],
    }
    if args.check:
        payload["check"] = _check_formula(formula, args.n, args.check, args.seed)
    lines = [
        f"wrote {json_path}",
        f"wrote {text_path}",
        f"nodes: {payload['nodes']}",
        "observables: " + " ".join(payload["required_observables"]),
    ]
    if args.check:
        c = payload["check"]
        lines.append(f"check: {c['agree']}/{c['points']} random points exact")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if not args.check or payload["check"]["agree"] == payload["check"]["points"] else EXIT_FAILED


def _check_formula(formula, n: int, points: int, seed: int) -> dict:
    rng = random.Random(seed)
    agree = tried = 0
    while tried < points:
        x, y = checks.random_point(rng, n), checks.random_point(rng, n)
        try:
            got = formula.evaluate(checks.pair_observables(x, y, n))
        except ZeroDivisionError:
            continue
        tried += 1
        agree += got == E2_value(x, y)
    return {"points": points, "agree": agree}


# --------------------------------------------------------------------------
# subduct
# --------------------------------------------------------------------------

def cmd_subduct(args) -> int:
    text = Path(args.polynomial).read_text(encoding="utf-8")
    lines_in = [ln.split("#", 1)[0] for ln in text.splitlines()]
    text = " ".join(ln for ln in lines_in if ln.strip())
    if not text.strip():
        raise InputError(f"{args.polynomial}: no polynomial found")
    f = LaurentPolynomial.parse(text, VariableShape(1, args.n) if args.n else None)
    n = f.shape.n
    if f.shape.m != 1:
        raise InputError("subduct works on a single array x1..xn")
    if args.method == "symmetrize":
        expr = algorithm31(f, n, budget=args.budget)
        payload = {"schema": _schema("subduct"), "n": n, "method": "symmetrize",
                   "q_form": expr.to_text(), "q_form_tree": expr.to_json()}
        _emit(args, payload, f"q-form: {expr.to_text()}")
        return EXIT_OK
    res = subduct(f, n)
    q_form = generators_to_q(res.expression, n)
    gen_text = res.expression.format(factor_content=True)
    expanded = q_form.as_polynomial()
    q_text = polynomial_text(expanded) if expanded is not None else q_form.to_text()
    payload = {
        "schema": _schema("subduct"),
        "n": n,
        "method": "sagbi",
        "generators": gen_text,
        "steps": res.steps,
        "q_form": q_text,
        "q_form_tree": q_form.to_json(),
    }
    _emit(args, payload, f"{gen_text}\nq-form: {q_text}")
    return EXIT_OK


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------

ALL_SUITES = ("paper", "all")


def cmd_verify(args) -> int:
    if args.list:
        _emit(args, {"schema": _schema("verify"), "suites": list(checks.SUITES)}, "\n".join(checks.SUITES))
        return EXIT_OK
    names = []
    for name in args.suites or ["all"]:
        if name in ALL_SUITES:
            names.extend(s for s in checks.SUITES if s not in names)
        elif name in checks.SUITES:
            names.append(name)
        else:
            raise InputError(f"unknown suite {name!r}; choose from {', '.join(checks.SUITES)} or all")
    results = []
    for name in names:
        if name == "crystal":
            results.append(checks.check_crystal(tol=args.tol))
        else:
            results.append(checks.SUITES[name]())
        if args.output == "text":
            print(results[-1].line(), flush=True)
    ok = all(r.passed for r in results)
    if args.output == "json":
        print(json.dumps({"schema": _schema("verify"), "passed": ok,
                          "results": [r.to_json() for r in results]}, indent=2, default=str))
    else:
        print(f"{sum(r.passed for r in results)}/{len(results)} suites passed")
    return EXIT_OK if ok else EXIT_FAILED


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="number of atoms")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="float tolerance (default 1e-6)")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="term-operation budget for symmetrization")
    common.add_argument("--output", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(prog="tripletphase", description="Triplet phase invariants from magnitudes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="simulate squared magnitudes for a unit cell")
    p.add_argument("atoms", help="atoms file: three fractional coordinates per line")
    p.add_argument("--v1", type=_vector, required=True, help="first reciprocal vector, e.g. 1,0,0")
    p.add_argument("--v2", type=_vector, required=True, help="second reciprocal vector")
    p.add_argument("--range", type=int, default=0, help="also emit all (a, b) with |a|, |b| <= RANGE")
    p.add_argument("--mode", choices=("float", "rational"), default="float")
    p.add_argument("--seed", type=int, default=0, help="seed for rational mode")
    p.add_argument("-o", "--reflections", help="write the reflections file here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("phase", parents=[common], help="E2 and cos(phi) from a reflections file")
    p.add_argument("reflections", help="reflections file: lines 'a b value'")
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("emit", parents=[common], help="write the E2 formula for n atoms")
    p.add_argument("--out-dir", default=".", help="directory for formula_n<N>.json/.txt")
    p.add_argument("--check", type=int, default=0, metavar="K", help="verify at K random rational points")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_emit)

    p = sub.add_parser("subduct", parents=[common], help="rewrite an invariant in generators and observables")
    p.add_argument("polynomial", help="file holding a Laurent polynomial in x1..xn")
    p.add_argument("--method", choices=("sagbi", "symmetrize"), default="sagbi")
    p.set_defaults(func=cmd_subduct)

    p = sub.add_parser("verify", parents=[common], help="run the verification suites")
    p.add_argument("suites", nargs="*", help="suite names, or 'all' (default)")
    p.add_argument("--list", action="store_true", help="list the suites and exit")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (TripletPhaseError, OSError) as exc:
        kind = type(exc).__name__
        if args.output == "json":
            err = {"schema": _schema("error"), "error": kind, "message": str(exc)}
            if hasattr(exc, "missing"):
                err["missing"] = [str(m) for m in exc.missing]
            print(json.dumps(err, indent=2))
        print(f"tripletphase {args.command}: {kind}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
