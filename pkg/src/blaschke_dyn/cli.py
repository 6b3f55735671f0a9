"""Command-line front end.

Every subcommand writes a JSON document (schema ``blaschke-dyn/1``) or CSV
to stdout or ``--out``.  Exit status: 0 success, 1 verification failure,
2 invalid input, 3 numerical failure.
"""

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import cheby, dynamics, ellrat, factorization, serialize
from .blaschke import compose, equals_fbp, make_fbp, max_deviation
from .errors import DomainError, GrowthCapError, NumericalError
from .monodromy import block_systems, factor_degree_lattice, numerical_monodromy
from .verify import SUITES, disk_grid, run_suites

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3

CSV_HELP = """CSV columns:
  cheby      x, re, im            samples of T on [-gamma(t), gamma(t)]
  orbit      index, point         exact iterates
  height     m, naive, estimate   h(f^m x) and h(f^m x)/d^m
  intersect  i, j, point          exact coincidences f^i(x) = g^j(y)
  verify     suite, passed, max_deviation, tolerance
"""


class InputError(Exception):
    pass


def parse_complex(text):
    """Accept ``re,im``, ``a+bj`` or ``a+bi``."""
    s = str(text).strip().replace(" ", "")
    try:
        if "," in s:
            re_part, im_part = s.split(",")
            return complex(float(re_part), float(im_part))
        return complex(s.replace("i", "j"))
    except ValueError as exc:
        raise InputError(f"cannot parse complex number {text!r}") from exc


def _positive(kind):
    def conv(text):
        v = kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"expected a positive value, got {text}")
        return v
    return conv


# ---------------------------------------------------------------------------
# subcommands; each returns (document, csv_rows or None, exit code)
# ---------------------------------------------------------------------------

def cmd_cheby(args):
    f = cheby.cheby_blaschke(args.n, args.t)
    g = f.gamma
    x = np.linspace(-g, g, args.samples)
    y = f(x.astype(complex))
    rows = [("x", "re", "im")] + [(repr(float(a)), repr(float(b.real)), repr(float(b.imag)))
                                  for a, b in zip(x, y)]
    doc = serialize.envelope("cheby", n=f.n, t=f.t, chi=f.chi, gamma=g,
                             gamma_image=f.gamma_image, product=f.product)
    return doc, rows, EXIT_OK


def cmd_ellrat(args):
    tau = parse_complex(args.tau)
    p = ellrat.EllipticRationalParams(args.n, tau)
    doc = serialize.envelope("ellrat", n=args.n, tau=tau)
    if args.critvals:
        cv = ellrat.ell_rat_critical_values(p)
        doc["critical_values"] = list(cv.values)
        doc["half_period_values"] = list(cv.half_period_values)
    if args.fit:
        fit = ellrat.ell_rat_fit(p)
        num, den = fit.coefficients()
        doc["fit"] = {"numerator": list(num), "denominator": list(den),
                      "holdout_residual": fit.holdout_residual,
                      "critical_values": fit.critical_values()}
    if not (args.fit or args.critvals):
        x = np.linspace(-1.0, 1.0, 5) + 0.5j
        doc["samples"] = [{"x": a, "value": b} for a, b in zip(x, ellrat.ell_rat_eval(p, x))]
    return doc, None, EXIT_OK


def cmd_compose(args):
    maps = [serialize.load_fbp(p) for p in args.input]
    if len(maps) < 2:
        raise InputError("compose needs at least two --input files")
    out = maps[-1]
    for f in reversed(maps[:-1]):
        out = compose(f, out)
    return serialize.envelope("compose", degree=out.degree, product=out), None, EXIT_OK


def cmd_decompose(args):
    f = serialize.load_fbp(args.input)
    dec = factorization.decompose_recognized(f, tol=args.tol)
    if dec is None:
        doc = serialize.envelope("decompose", degree=f.degree, kind="none")
    else:
        doc = serialize.envelope("decompose", degree=f.degree, result=dec.kind,
                                 outer=dec.outer, inner=dec.inner, deviation=dec.deviation,
                                 details=dec.details, block_sizes=list(dec.block_sizes))
    return doc, None, EXIT_OK


def cmd_monodromy(args):
    f = serialize.load_fbp(args.input)
    rep = numerical_monodromy(f)
    transitive = rep.is_transitive()
    doc = serialize.envelope(
        "monodromy", degree=rep.degree, base_point=rep.base_point,
        critical_values=list(rep.critical_values), loops=list(rep.loops),
        ordered_product=rep.ordered_product(), boundary_loop=rep.boundary_loop,
        transitive=transitive, group_order=rep.group_order(), loop_radius=rep.loop_radius)
    if transitive:
        doc["block_systems"] = [s.as_lists() for s in block_systems(rep)]
        doc["degree_lattice"] = sorted(factor_degree_lattice(f, rep).degrees)
    return doc, None, EXIT_OK


def cmd_ritt(args):
    if args.move == "power":
        if args.g:
            g = serialize.load_fbp(args.g)
        else:
            g = make_fbp(1.0, [parse_complex(args.a)])
        lhs, rhs = factorization.ritt_move_power(args.k, args.r, g, tol=args.tol)
        params = {"k": args.k, "r": args.r}
    else:
        lhs, rhs = factorization.ritt_move_cheby(args.p, args.q, args.t, tol=args.tol)
        params = {"p": args.p, "q": args.q, "t": args.t}
    dev = max_deviation(lhs, rhs, disk_grid())
    doc = serialize.envelope("ritt", move=args.move, params=params, lhs=lhs, rhs=rhs,
                             max_deviation=dev, equal=equals_fbp(lhs, rhs))
    return doc, None, EXIT_OK


def cmd_pair(args):
    params = {}
    for name in ("m", "n", "r", "t"):
        v = getattr(args, name)
        if v is not None:
            params[name] = v
    for name in ("a", "b"):
        v = getattr(args, name)
        if v is not None:
            params[name] = parse_complex(v)
    if args.p:
        params["p"] = serialize.load_fbp(args.p)
    f1, g1 = factorization.bilu_tichy_pair(args.case, strict=args.strict, **params)
    doc = serialize.envelope("pair", case=args.case, first=f1, second=g1,
                             degrees=[f1.degree, g1.degree])
    return doc, None, EXIT_OK


def cmd_orbit(args):
    f = serialize.load_exact_map(args.map)
    orb = dynamics.orbit(f, args.point, args.steps, bit_cap=args.bit_cap)
    cycle = list(orb.cycle) if orb.cycle else None
    doc = serialize.envelope("orbit", map=f, point=orb[0], steps=args.steps,
                             orbit=list(orb), cycle=cycle)
    rows = [("index", "point")] + [(i, str(p)) for i, p in enumerate(orb)]
    return doc, rows, EXIT_OK


def cmd_height(args):
    f = serialize.load_exact_map(args.map)
    est = dynamics.canonical_height_estimate(f, args.point, args.steps, bit_cap=args.bit_cap)
    doc = serialize.envelope("height", map=f, point=dynamics.as_gaussian(args.point),
                             steps=args.steps, naive=est.naive,
                             canonical_estimate=est.canonical_estimate,
                             trace=list(est.trace), preperiodic=est.preperiodic)
    d = f.degree
    rows = [("m", "naive", "estimate")] + [(m, repr(v * d ** m), repr(v))
                                           for m, v in enumerate(est.trace)]
    return doc, rows, EXIT_OK


def cmd_intersect(args):
    f = serialize.load_exact_map(args.map)
    g = serialize.load_exact_map(args.map2)
    hits = dynamics.orbit_intersection(f, args.point, g, args.point2, args.steps,
                                       bit_cap=args.bit_cap)
    doc = serialize.envelope("intersect", steps=args.steps,
                             hits=[{"i": i, "j": j, "point": p} for i, j, p in hits])
    rows = [("i", "j", "point")] + [(i, j, str(p)) for i, j, p in hits]
    return doc, rows, EXIT_OK


def cmd_verify(args):
    results = run_suites(args.suite, t=args.t, draws=args.draws, seed=args.seed)
    ok = all(r.passed for r in results)
    for r in results:
        print(f"{r.name:<14} {'PASS' if r.passed else 'FAIL'}  max_dev={r.max_deviation:.3e}"
              f"  tol={r.tolerance:.0e}", file=sys.stderr)
    doc = serialize.envelope("verify", passed=ok, suites=[
        {"suite": r.name, "passed": r.passed, "max_deviation": r.max_deviation,
         "tolerance": r.tolerance, "cases": list(r.cases)} for r in results])
    rows = [("suite", "passed", "max_deviation", "tolerance")] + [
        (r.name, r.passed, repr(r.max_deviation), repr(r.tolerance)) for r in results]
    return doc, rows, EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="blaschke-dyn",
        description="Blaschke products, elliptic descents, monodromy and exact orbits.",
        epilog=CSV_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--emit", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0, help="random seed (runs are deterministic)")
    common.add_argument("--tol", type=_positive(float), default=None,
                        help="override the identity tolerance")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cheby", parents=[common], help="Chebyshev-Blaschke product T_{n,t}")
    p.add_argument("--n", type=_positive(int), required=True)
    p.add_argument("--t", type=_positive(float), required=True)
    p.add_argument("--samples", type=_positive(int), default=101)
    p.set_defaults(func=cmd_cheby)

    p = sub.add_parser("ellrat", parents=[common], help="elliptic rational function n_tau")
    p.add_argument("--n", type=_positive(int), required=True)
    p.add_argument("--tau", required=True, help="RE,IM with IM > 0")
    p.add_argument("--fit", action="store_true", help="fit a rational function and report it")
    p.add_argument("--critvals", action="store_true", help="report critical values")
    p.set_defaults(func=cmd_ellrat)

    p = sub.add_parser("compose", parents=[common], help="compose products (first o second o ...)")
    p.add_argument("--input", action="append", required=True)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("decompose", parents=[common], help="recognise a factorisation")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("monodromy", parents=[common], help="numerical monodromy and blocks")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_monodromy)

    p = sub.add_parser("ritt", parents=[common], help="build both sides of a Ritt move")
    p.add_argument("--move", choices=("power", "cheby"), required=True)
    p.add_argument("--k", type=_positive(int), default=2)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--g", help="JSON file with the product g (power move)")
    p.add_argument("--a", default="0.3,0.2", help="zero of a degree-one g when --g is absent")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--t", type=_positive(float), default=0.5)
    p.set_defaults(func=cmd_ritt)

    p = sub.add_parser("pair", parents=[common], help="pair families (i)-(v)")
    p.add_argument("--case", choices=("i", "ii", "iii", "iv", "v"), required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--t", type=_positive(float))
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--p", help="JSON file with the product p")
    p.add_argument("--strict", action="store_true", help="require m, n >= 3 in (iii)/(iv)")
    p.set_defaults(func=cmd_pair)

    for name, func, helptext in (("orbit", cmd_orbit, "exact orbit over Q(i)"),
                                 ("height", cmd_height, "naive and canonical heights")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--map", default="z^2", help="exact map JSON file or z^n (default z^2)")
        p.add_argument("--point", required=True, help='Gaussian rational, e.g. "1/2+1/3*i"')
        p.add_argument("--steps", type=int, default=6)
        p.add_argument("--bit-cap", type=_positive(int), default=dynamics.DEFAULT_BIT_CAP)
        p.set_defaults(func=func)

    p = sub.add_parser("intersect", parents=[common], help="exact orbit intersections")
    p.add_argument("--map", default="z^2")
    p.add_argument("--point", required=True)
    p.add_argument("--map2", default="z^3")
    p.add_argument("--point2", required=True)
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--bit-cap", type=_positive(int), default=dynamics.DEFAULT_BIT_CAP)
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("verify", parents=[common], help="run identity suites")
    p.add_argument("--suite", action="append", choices=sorted(SUITES) + ["all"],
                   help="suite to run (repeatable; default all)")
    p.add_argument("--t", type=_positive(float), default=None)
    p.add_argument("--draws", type=_positive(int), default=10)
    p.set_defaults(func=cmd_verify)
    return parser


def _render(doc, rows, emit):
    if emit == "csv":
        if rows is None:
            raise InputError("this subcommand has no CSV form")
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return buf.getvalue()
    return serialize.dumps(doc) + "\n"


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc, rows, code = args.func(args)
        text = _render(doc, rows, args.emit)
    except (InputError, DomainError, FileNotFoundError, json.JSONDecodeError,
            KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalError, GrowthCapError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
