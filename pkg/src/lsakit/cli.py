"""Command-line front end.

Exit codes: 0 success, 1 validation failure (including malformed input files),
2 usage error (bad arguments, unreadable file, dimension cap exceeded).
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Sequence

from . import families
from .fileformat import FormatError, parse_algebra_file, serialize_algebra
from .koszul import (
    KoszulError,
    arithmetic_relations,
    graph_extend,
    idempotent_report,
    induced_algebra,
    principal_idempotent,
    weight_decomposition,
)
from .lsa_core import (
    DEFAULT_MAX_DIM,
    DimensionCapExceeded,
    LSAViolation,
    char_poly_lsa,
    classify,
    trace_form,
    validate_lsa,
)
from .ma_verify import NOT_CONSTANT, flow_sample, graph_restrict, ma_constant
from .polyring import MPoly, PolyParseError, parse_poly
from .qlinalg import QMatrix, to_q


class UsageError(Exception):
    pass


class ValidationFailure(Exception):
    pass


# ----------------------------------------------------------------------------
# rendering


def fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, (MPoly, QMatrix)):
        return str(v)
    if isinstance(v, (tuple, list)):
        return "(" + ", ".join(fmt(x) for x in v) + ")"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {fmt(x)}" for k, x in v.items()) + "}"
    if v is None:
        return "none"
    return str(v)


class Report:
    def __init__(self):
        self.lines: list[str] = []

    def add(self, key: str, value):
        self.lines.append(f"{key} = {fmt(value)}")

    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines)


def parse_vector(text: str) -> tuple:
    try:
        return tuple(to_q(x) for x in text.split(",") if x.strip() != "" or True)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"bad vector {text!r}: {e}")


def parse_matrix(text: str) -> QMatrix:
    try:
        rows = [[to_q(x) for x in r.split(",")] for r in text.split(";")]
        return QMatrix.from_rows(rows)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"bad matrix {text!r}: {e}")


def read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as e:
        raise UsageError(f"cannot read {path}: {getattr(e, 'strerror', None) or e}")


def load_algebra(path: str, max_dim: int):
    A = parse_algebra_file(read_text(path))
    if A.dim > max_dim:
        raise DimensionCapExceeded(f"dimension {A.dim} exceeds cap {max_dim}")
    return validate_lsa(A)


# ----------------------------------------------------------------------------
# subcommands


def cmd_check(args, rep: Report):
    A = parse_algebra_file(read_text(args.file))
    rep.add("name", A.name)
    rep.add("dim", A.dim)
    try:
        validate_lsa(A)
    except LSAViolation as v:
        rep.add("lsa", False)
        rep.add("violation", (v.i, v.j, v.k))
        rep.add("residual", v.residual)
        raise ValidationFailure(str(v))
    rep.add("lsa", True)


def _classify_lines(A, rep: Report, thorough: bool, max_dim: int):
    cr = classify(A, thorough=thorough, max_dim=max_dim)
    for key, flag in cr.items():
        if key == "derived_codim":
            rep.add(key, flag)
            continue
        rep.add(key, flag.value)
        if flag.witness is not None:
            rep.add(f"{key}.witness", flag.witness)
    if thorough:
        rep.add("complete_by_charpoly", cr.complete_by_charpoly.value)
        rep.add("complete_by_powers", cr.complete_by_powers.value)
    return cr


def cmd_classify(args, rep: Report):
    A = load_algebra(args.file, args.max_dim)
    rep.add("name", A.name)
    rep.add("dim", A.dim)
    _classify_lines(A, rep, args.thorough, args.max_dim)


def cmd_charpoly(args, rep: Report):
    A = load_algebra(args.file, args.max_dim)
    rep.add("P", char_poly_lsa(A, max_dim=args.max_dim))


def cmd_traceform(args, rep: Report):
    A = load_algebra(args.file, args.max_dim)
    tf = trace_form(A)
    rep.add("tau", tf.matrix)
    rep.add("det", tf.determinant)
    rep.add("nondegenerate", tf.nondegenerate)


def _idempotent_lines(A, rep: Report):
    K = principal_idempotent(A)
    rep.add("r", K.u)
    rep.add("trR(r)", K.rank)
    ir = idempotent_report(A, K)
    for k, v in ir.items():
        rep.add(k, v)
    return K, ir


def cmd_idempotent(args, rep: Report):
    A = load_algebra(args.file, args.max_dim)
    try:
        _idempotent_lines(A, rep)
    except KoszulError as e:
        rep.add("error", e.code)
        raise ValidationFailure(str(e))


def _ma_lines(P: MPoly, rep: Report, algebra=None, r=None, prefix=""):
    ma = ma_constant(P, algebra=algebra, r=r)
    if ma.axis is None:
        rep.add("axis", None)
    else:
        rep.add("axis", ma.axis.v)
        rep.add("axis_increment", ma.axis.lam)
    if ma.kappa == NOT_CONSTANT:
        rep.add("kappa", NOT_CONSTANT)
        rep.add("det_hess_plus_dpdp", ma.det_poly)
    else:
        rep.add("kappa", ma.kappa)
        rep.add("sign_of_kappa", ma.sign_of_kappa)
    if algebra is not None:
        rep.add("convention", f"H(e^P) = kappa e^(nP), n = dim = {algebra.dim}")
        rep.add("trace_condition_2trL_eq_n1trR", ma.trace_condition_2L_n1R)
        if ma.euler_identity is not None:
            rep.add("euler_identity", ma.euler_identity)
    else:
        rep.add("convention", f"H(e^P) = kappa e^(mP), m = nvars = {P.nvars}")
    if ma.axis is not None and ma.axis.lam != 0 and P.nvars > 1:
        g = graph_restrict(P, ma.axis)
        rep.add("graph_f", g.f)
        rep.add("graph_H", g.hessian_det)
    return ma


def cmd_report(args, rep: Report):
    A = load_algebra(args.file, args.max_dim)
    rep.add("name", A.name)
    rep.add("dim", A.dim)
    _classify_lines(A, rep, False, args.max_dim)
    P = char_poly_lsa(A, max_dim=args.max_dim)
    rep.add("P", P)
    r = None
    try:
        K, ir = _idempotent_lines(A, rep)
        r = K.u
        if ir.recognizer:
            ind = induced_algebra(A, K)
            rep.add("base_dim", ind.base.dim)
            rep.add("base_metric", ind.h)
            rep.add("derivation", ind.D)
            wd = weight_decomposition(ind.D, ind.h, ind.base)
            rep.add("weights", [w for w, _ in wd.weights])
            rep.add("weight_dims", [d for _, d in wd.weights])
            rep.add("weights_split", wd.splits)
            rep.add("weight_pairing", wd.pairing_ok)
            rep.add("weight_grading", wd.grading_ok)
            if wd.splits:
                rels = arithmetic_relations(wd.weight_set, P)
                for d, part in rels:
                    rep.add(f"relation.deg{d}", part)
    except KoszulError as e:
        rep.add("koszul", e.code)
    _ma_lines(P, rep, algebra=A, r=r)


def cmd_ma_verify(args, rep: Report):
    if (args.file is None) == (args.poly is None):
        raise UsageError("give exactly one of FILE or --poly EXPR")
    if args.poly is not None:
        try:
            P = parse_poly(args.poly)
        except PolyParseError as e:
            raise UsageError(f"bad polynomial: {e}")
        rep.add("P", P)
        _ma_lines(P, rep)
    else:
        A = load_algebra(args.file, args.max_dim)
        P = char_poly_lsa(A, max_dim=args.max_dim)
        rep.add("P", P)
        r = None
        try:
            r = principal_idempotent(A).u
        except KoszulError:
            pass
        _ma_lines(P, rep, algebra=A, r=r)


def cmd_graph_extend(args, rep: Report):
    base = load_algebra(args.file, args.max_dim)
    h = parse_matrix(args.metric)
    D = parse_matrix(args.derivation)
    try:
        ge = graph_extend(base, h, D, name=args.name)
    except KoszulError as e:
        rep.add("error", e.code)
        raise ValidationFailure(str(e))
    except ValueError as e:
        raise UsageError(str(e))
    rep.raw = serialize_algebra(ge.result)


def cmd_generate(args, rep: Report):
    fam = args.family
    a = args.params
    try:
        if fam == "cayley":
            A = families.cayley(int(a[0]))
        elif fam == "fili":
            A = families.fili(int(a[0]))
        elif fam == "trivial":
            A = families.trivial(int(a[0]))
        elif fam == "parab":
            n = int(a[0])
            A = families.parab(parse_matrix(args.metric), n) if args.metric else families.parab(n)
        elif fam == "sixdim":
            A = families.six_dim()
        elif fam == "negeig":
            if args.jordan is not None:
                A = families.jordan_family(to_q(args.jordan))
            else:
                A = families.sigma_family(to_q(args.sigma if args.sigma is not None else 2))
        else:  # pragma: no cover - argparse restricts choices
            raise UsageError(f"unknown family {fam}")
    except (IndexError, ValueError) as e:
        raise UsageError(f"bad parameters for {fam}: {e}")
    if A.dim > args.max_dim:
        raise DimensionCapExceeded(f"dimension {A.dim} exceeds cap {args.max_dim}")
    rep.raw = serialize_algebra(A)


def cmd_flow(args, rep: Report):
    A = load_algebra(args.file, args.max_dim)
    a = parse_vector(args.a)
    x0 = parse_vector(args.x0)
    if len(a) != A.dim or len(x0) != A.dim:
        raise UsageError(f"vectors must have {A.dim} entries")
    fs = flow_sample(A, a, x0, float(args.t), tol=args.tol)
    rep.lines.append("endpoint = (" + ", ".join(repr(x) for x in fs.endpoint) + ")")
    rep.lines.append(f"character_residual = {fs.character_residual:.3e}")
    rep.add("within_tolerance", fs.ok)
    if not fs.ok:
        raise ValidationFailure("flow residual above tolerance")


# ----------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lsakit", description="Exact computations with left-symmetric algebras.")
    p.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM, help="dimension cap (default 10)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    for name, fn, hlp in [
        ("check", cmd_check, "validate the left-symmetry axiom"),
        ("charpoly", cmd_charpoly, "characteristic polynomial det(I + R(x))"),
        ("traceform", cmd_traceform, "trace form tr R(x)R(y)"),
        ("idempotent", cmd_idempotent, "right principal idempotent diagnostics"),
        ("report", cmd_report, "full pipeline"),
    ]:
        sp = sub.add_parser(name, help=hlp)
        sp.add_argument("file")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("classify", help="classification predicates")
    sp.add_argument("file")
    sp.add_argument("--thorough", action="store_true", help="also check R(X)^n = 0 and P = 1")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("ma-verify", help="det(Hess P + dP dP) for an algebra or polynomial")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--poly", help="polynomial such as 'x3 - x1^2 - x2^2'")
    sp.set_defaults(func=cmd_ma_verify)

    sp = sub.add_parser("graph-extend", help="graph extension of a Hessian LSA")
    sp.add_argument("file")
    sp.add_argument("--metric", required=True, help="rows separated by ';', entries by ','")
    sp.add_argument("--derivation", required=True)
    sp.add_argument("--name", default=None)
    sp.set_defaults(func=cmd_graph_extend)

    sp = sub.add_parser("generate", help="emit a builtin algebra")
    sp.add_argument("family", choices=["cayley", "fili", "parab", "sixdim", "negeig", "trivial"])
    sp.add_argument("params", nargs="*")
    sp.add_argument("--metric", default=None, help="parab metric g")
    sp.add_argument("--sigma", default=None)
    sp.add_argument("--jordan", default=None)
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("flow", help="sample the affine flow and the character residual")
    sp.add_argument("file")
    sp.add_argument("--a", required=True)
    sp.add_argument("--x0", required=True)
    sp.add_argument("--t", required=True, type=float)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.set_defaults(func=cmd_flow)
    return p


def run_command(argv: Sequence[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    rep = Report()
    rep.raw = None
    try:
        args = build_parser().parse_args(list(argv))
        args.func(args, rep)
        code = 0
    except UsageError as e:
        err.write(f"usage error: {e}\n")
        return 2
    except DimensionCapExceeded as e:
        err.write(f"usage error: {e}\n")
        return 2
    except FormatError as e:
        err.write(f"{e}\n")
        return 1
    except LSAViolation as e:
        err.write(f"not a left-symmetric algebra: {e}\n")
        return 1
    except ValidationFailure as e:
        err.write(f"{e}\n")
        code = 1
    except SystemExit as e:  # --help
        return int(e.code or 0)
    out.write(rep.raw if rep.raw is not None else rep.text())
    return code


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
