"""Command-line front end.

Every subcommand is a thin adapter over the library: identical inputs give
identical machine-block values through either route.  Exit codes: 0 for
success, 1 for a mathematically meaningful failure (an inconsistent
verification, a fiction mismatch, a failed law), 2 for usage errors, 3 for
file or data problems.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import braid as braidmod
from . import corpus as corpusmod
from .errors import (
    BootstrapStalled,
    CorruptCorpus,
    ExpressFailure,
    G0wbError,
    Inconsistent,
    InsufficientSeed,
    InsufficientTruncation,
    NonConvergent,
    NotInvariant,
    NotUnimodular,
    ParseError,
    ShapeError,
)
from .hauptmodul import bootstrap_extend, check_replication, classify, congruence_membership
from .matrices import parse_matrix
from .modeq import (
    average_sum,
    build_modular_polynomial,
    emit_mpoly,
    express_in_generator,
    parse_mpoly,
    verify_modular_equation,
)
from .numeric import (
    UpperHalfPoint,
    check_weight_law,
    eisenstein_eval,
    eisenstein_evaluator,
    eta_eval,
    eta_evaluator,
    eval_series,
    select_eta_kappa,
)
from .qseries import PuiseuxSeries, emit_qexp, parse_qexp
from .report import provenance_footnotes, render

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_DATA = 3

_BUNDLED_STEMS = ("j", "g0_2", "g0_13", "g0_25")


def _resolve_series_path(path: str) -> str | None:
    """A --series/--modpoly path, tried literally, then under G0WB_DATA,
    then against the bundled corpus by basename."""
    if os.path.exists(path):
        return path
    override = corpusmod.data_directory()
    base = os.path.basename(path)
    if override is not None:
        candidate = os.path.join(override, base)
        if os.path.exists(candidate):
            return candidate
    return None


def _load_series(path: str) -> tuple[PuiseuxSeries, str, tuple[str, ...]]:
    resolved = _resolve_series_path(path)
    if resolved is not None:
        with open(resolved, "r", encoding="utf-8") as fh:
            series, label = parse_qexp(fh.read())
        return series, label, ()
    stem = os.path.splitext(os.path.basename(path))[0]
    if stem in _BUNDLED_STEMS:
        entry = corpusmod.load_entry(stem)
        return entry.series, entry.meta.label, provenance_footnotes(entry)
    raise OSError(f"no such series file: {path}")


def _load_mpoly(path: str):
    resolved = _resolve_series_path(path)
    if resolved is None:
        raise OSError(f"no such polynomial file: {path}")
    with open(resolved, "r", encoding="utf-8") as fh:
        return parse_mpoly(fh.read())


def _parse_tau(text: str) -> UpperHalfPoint:
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError(f"tau must be RE,IM, got {text!r}")
    try:
        return UpperHalfPoint(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise ParseError(f"bad tau {text!r}: {exc}") from exc


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}i"


def _emit(body: str, machine: list[tuple[str, str]]) -> None:
    pairs = "\n".join(f"{k}={v}" for k, v in machine)
    sys.stdout.write(f"{body}\n---\n{pairs}\n" if body else f"---\n{pairs}\n")


def _write_or_print(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# -- subcommand handlers ------------------------------------------------------

def _cmd_modpoly(args) -> int:
    series, label, _ = _load_series(args.series)
    poly = build_modular_polynomial(series, args.order,
                                    generalised=args.generalised,
                                    conductor=args.conductor)
    text = emit_mpoly(poly)
    _write_or_print(text, args.out)
    if args.out is not None:
        _emit(f"order-{args.order} polynomial for {label} written to {args.out}",
              [("order", str(args.order)), ("degx", str(poly.degx)),
               ("degy", str(poly.degy)), ("out", args.out)])
    return EXIT_OK


def _cmd_verify(args) -> int:
    series, _, notes = _load_series(args.series)
    poly = _load_mpoly(args.modpoly)
    rep = verify_modular_equation(series, poly, args.order,
                                  generalised=args.generalised)
    sys.stdout.write(render(rep, footnotes=notes).text())
    return EXIT_FAILED if rep.status == "inconsistent" else EXIT_OK


def _cmd_classify(args) -> int:
    series, _, notes = _load_series(args.series)
    orders = [int(tok) for tok in args.orders.split(",") if tok]
    result = classify(series, orders)
    sys.stdout.write(render(result, footnotes=notes).text())
    return EXIT_FAILED if result.verdict == "inconsistent" else EXIT_OK


def _cmd_bootstrap(args) -> int:
    series, label, _ = _load_series(args.series)
    poly = _load_mpoly(args.modpoly)
    extended = bootstrap_extend(series, poly, args.order, args.target)
    text = emit_qexp(extended, label)
    _write_or_print(text, args.out)
    if args.out is not None:
        _emit(f"{label} extended to q^{args.target} and written to {args.out}",
              [("target", str(args.target)), ("trunc", str(extended.trunc)),
               ("out", args.out)])
    return EXIT_OK


def _cmd_replicate(args) -> int:
    series, _, _ = _load_series(args.series)
    square, _, _ = _load_series(args.square)
    rows = []
    all_ok = True
    for k in range(1, args.k_max + 1):
        ok = check_replication(series, square, k)
        all_ok &= ok
        rows.append((f"k_{k}", "true" if ok else "false"))
    body = "\n".join(
        f"k = {k}: {'holds' if v == 'true' else 'FAILS'}"
        for (kname, v), k in zip(rows, range(1, args.k_max + 1)))
    _emit(body, rows + [("all", "true" if all_ok else "false")])
    return EXIT_OK if all_ok else EXIT_FAILED


def _cmd_avg(args) -> int:
    series, label, _ = _load_series(args.series)
    averaged = average_sum(series, args.prime)
    machine: list[tuple[str, str]] = [("prime", str(args.prime)),
                                      ("trunc", str(averaged.trunc))]
    body = emit_qexp(averaged, f"{label}_avg_{args.prime}").rstrip("\n")
    if args.express:
        poly = express_in_generator(averaged, series)
        body += f"\nexpressed in generator: {poly}"
        machine.append(("expressed", str(poly)))
    _emit(body, machine)
    return EXIT_OK


def _cmd_member(args) -> int:
    mat = parse_matrix(args.matrix)
    ok = congruence_membership(mat, args.level, args.flavor)
    _emit(f"{mat} in {args.flavor}({args.level}): {'yes' if ok else 'no'}",
          [("member", "true" if ok else "false"),
           ("level", str(args.level)), ("flavor", args.flavor)])
    return EXIT_OK


def _cmd_eval(args) -> int:
    series, label, _ = _load_series(args.series)
    tau = _parse_tau(args.tau)
    result = eval_series(series, tau)
    _emit(f"{label}({args.tau}) = {_fmt_complex(result.value)}"
          f"  (tail {result.tail_estimate:.3e}, {result.terms_used} terms)",
          [("value_re", f"{result.value.real:.16g}"),
           ("value_im", f"{result.value.imag:.16g}"),
           ("tail", f"{result.tail_estimate:.6e}"),
           ("terms", str(result.terms_used))])
    return EXIT_OK


def _cmd_eta(args) -> int:
    tau = _parse_tau(args.tau)
    if not args.law:
        result = eta_eval(tau, args.terms)
        _emit(f"eta({args.tau}) = {_fmt_complex(result.value)}"
              f"  (tail {result.tail_estimate:.3e})",
              [("value_re", f"{result.value.real:.16g}"),
               ("value_im", f"{result.value.imag:.16g}"),
               ("tail", f"{result.tail_estimate:.6e}")])
        return EXIT_OK
    if args.matrix is None:
        raise ParseError("--law needs --matrix a,b,c,d")
    mat = parse_matrix(args.matrix)
    mu = braidmod.eta_multiplier_matrix(mat)
    residual = check_weight_law(eta_evaluator(args.terms), mat, Fraction(1, 2), mu, tau)
    tolerance = 1e-8
    ok = residual < tolerance
    _emit(f"weight-1/2 law for {mat} at tau={args.tau}: residual {residual:.3e} "
          f"(tolerance {tolerance:.1e}) {'pass' if ok else 'FAIL'}",
          [("residual", f"{residual:.6e}"), ("tolerance", f"{tolerance:.1e}"),
           ("kappa", str(braidmod.DEFAULT_ETA_KAPPA)),
           ("law", "pass" if ok else "fail")])
    return EXIT_OK if ok else EXIT_FAILED


def _cmd_eisenstein(args) -> int:
    tau = _parse_tau(args.tau)
    if not args.law:
        result = eisenstein_eval(args.k, tau, args.radius)
        _emit(f"E{args.k}({args.tau}) = {_fmt_complex(result.value)}"
              f"  (tail {result.tail_estimate:.3e})",
              [("value_re", f"{result.value.real:.16g}"),
               ("value_im", f"{result.value.imag:.16g}"),
               ("tail", f"{result.tail_estimate:.6e}")])
        return EXIT_OK
    if args.matrix is None:
        raise ParseError("--law needs --matrix a,b,c,d")
    mat = parse_matrix(args.matrix)
    f = eisenstein_evaluator(args.k, args.radius)
    residual = check_weight_law(f, mat, args.k, 1.0, tau)
    t = tau.as_complex()
    image = UpperHalfPoint.of(mat.moebius(t))
    tolerance = (f(image).tail_estimate
                 + abs((mat.c * t + mat.d) ** args.k) * f(tau).tail_estimate)
    ok = residual < tolerance
    _emit(f"weight-{args.k} law for {mat} at tau={args.tau}: residual {residual:.3e} "
          f"(combined tails {tolerance:.3e}) {'pass' if ok else 'FAIL'}",
          [("residual", f"{residual:.6e}"), ("tolerance", f"{tolerance:.6e}"),
           ("law", "pass" if ok else "fail")])
    return EXIT_OK if ok else EXIT_FAILED


def _cmd_braid(args) -> int:
    word = braidmod.BraidWord.parse(args.word)
    if args.action == "degree":
        d = braidmod.degree(word)
        _emit(f"degree({word}) = {d}", [("degree", str(d))])
        return EXIT_OK
    if args.action == "burau":
        mat = braidmod.burau(word)
        _emit(f"projection({word}) = {mat}",
              [("matrix", f"{mat.a},{mat.b},{mat.c},{mat.d}")])
        return EXIT_OK
    if args.action == "multiplier":
        mu = braidmod.braid_multiplier(word)
        _emit(f"multiplier({word}) = {mu.literal()} (conductor 24)",
              [("multiplier", mu.literal()), ("conductor", "24")])
        return EXIT_OK
    lifted = braidmod.lift_braid(word)
    mat = lifted.matrix
    _emit(f"lift({word}) = ({mat}, n={lifted.n})",
          [("matrix", f"{mat.a},{mat.b},{mat.c},{mat.d}"), ("n", str(lifted.n))])
    return EXIT_OK


_BUILTIN_GROUPS = {
    "z2": lambda: braidmod.cyclic_group(2),
    "s3": braidmod.symmetric_group_3,
    "d4": lambda: braidmod.dihedral_group(4),
}


def _cmd_quilt(args) -> int:
    if args.group in _BUILTIN_GROUPS and not os.path.exists(args.group):
        table = _BUILTIN_GROUPS[args.group]()
    else:
        with open(args.group, "r", encoding="utf-8") as fh:
            table = braidmod.parse_group_table(fh.read())
    parts = args.start.split(",")
    if len(parts) != 2:
        raise ParseError("--start must be g,h with element labels")
    pair = (table.index(parts[0].strip()), table.index(parts[1].strip()))
    orbit = braidmod.quilt_orbit(pair, table)
    pretty = sorted(f"({table.labels[g]},{table.labels[h]})" for g, h in orbit)
    _emit("orbit of (%s,%s): size %d\n%s" % (parts[0].strip(), parts[1].strip(),
                                             len(orbit), " ".join(pretty)),
          [("orbit_size", str(len(orbit))), ("elements", " ".join(pretty))])
    return EXIT_OK


def _cmd_kappa(args) -> int:
    selection = select_eta_kappa(terms=args.terms)
    sys.stdout.write(render(selection).text())
    return EXIT_OK if selection.winner is not None else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="g0wb",
        description="exact workbench for q-series modular equations, "
                    "series screening, and the two-generator braid group")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("modpoly", help="build the order-m modular polynomial of a series")
    p.add_argument("--series", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--generalised", action="store_true")
    p.add_argument("--conductor", type=int, default=None)
    p.set_defaults(fn=_cmd_modpoly)

    p = sub.add_parser("verify", help="check a series against a modular polynomial")
    p.add_argument("--series", required=True)
    p.add_argument("--modpoly", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--generalised", action="store_true")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("classify", help="fiction / candidate / inconsistent screening")
    p.add_argument("--series", required=True)
    p.add_argument("--orders", required=True, help="comma-separated orders, e.g. 2,3")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("bootstrap", help="extend a series prefix with its polynomial")
    p.add_argument("--series", required=True)
    p.add_argument("--modpoly", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_bootstrap)

    p = sub.add_parser("replicate", help="coefficient recursions against the square series")
    p.add_argument("--series", required=True)
    p.add_argument("--square", required=True)
    p.add_argument("--k-max", type=int, required=True, dest="k_max")
    p.set_defaults(fn=_cmd_replicate)

    p = sub.add_parser("avg", help="prime averaging operator")
    p.add_argument("--series", required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--express", action="store_true")
    p.set_defaults(fn=_cmd_avg)

    p = sub.add_parser("member", help="congruence-subgroup membership")
    p.add_argument("--matrix", required=True, help="a,b,c,d")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--flavor", choices=("gamma0", "gamma1", "full"), required=True)
    p.set_defaults(fn=_cmd_member)

    p = sub.add_parser("eval", help="numeric evaluation of a series")
    p.add_argument("--series", required=True)
    p.add_argument("--tau", required=True, help="RE,IM")
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("eta", help="eta product value or its weight-1/2 law")
    p.add_argument("--tau", required=True)
    p.add_argument("--terms", type=int, default=120)
    p.add_argument("--law", action="store_true")
    p.add_argument("--matrix")
    p.set_defaults(fn=_cmd_eta)

    p = sub.add_parser("eisenstein", help="lattice sum value or its weight-k law")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tau", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--law", action="store_true")
    p.add_argument("--matrix")
    p.set_defaults(fn=_cmd_eisenstein)

    p = sub.add_parser("braid", help="word operations: projection, degree, multiplier, lift")
    p.add_argument("action", choices=("burau", "degree", "multiplier", "lift"))
    p.add_argument("--word", required=True, help='e.g. "s1 s2^-1 s1"')
    p.set_defaults(fn=_cmd_braid)

    p = sub.add_parser("quilt", help="orbit of a pair under the two-sided action")
    p.add_argument("--group", required=True, help="path to a Cayley-table file")
    p.add_argument("--start", required=True, help="g,h element labels")
    p.set_defaults(fn=_cmd_quilt)

    p = sub.add_parser("kappa", help="select the eta-multiplier constant numerically")
    p.add_argument("--terms", type=int, default=120)
    p.set_defaults(fn=_cmd_kappa)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (OSError, ParseError, CorruptCorpus, ShapeError,
            InsufficientTruncation, InsufficientSeed) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DATA
    except (NotInvariant, ExpressFailure, Inconsistent, BootstrapStalled) as exc:
        sys.stderr.write(f"failed: {exc}\n")
        return EXIT_FAILED
    except (NonConvergent, NotUnimodular, ValueError) as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except G0wbError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DATA


def console() -> None:  # pragma: no cover
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
