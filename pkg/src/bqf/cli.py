"""Command line interface: JSON in, JSON out, deterministic exit codes.

Exit status: 0 success, 2 precondition/domain error (message names the violated
precondition), 3 not-found or budget exhausted.  Integers with magnitude at
least 2^53 are serialized as decimal strings.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import carks, composition, cubes, geometry, jimm, reduction
from .forms import Form, UnimodularMatrix
from .numutil import DomainError, SearchExhausted, factor_string
from .reduction import FormClass, QuadraticIrrational

_BIG = 2**53


def _enc(value):
    """Recursively encode, stringifying big integers."""
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return str(value) if abs(value) >= _BIG else value
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return _enc(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (list, tuple)):
        return [_enc(v) for v in value]
    if isinstance(value, dict):
        return {k: _enc(v) for k, v in value.items()}
    return value


def _parse_int(v):
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        return int(v, 10)
    raise DomainError(f"expected an integer, got {v!r}")


def _load_json(arg: str):
    text = arg
    if os.path.exists(arg):
        with open(arg, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DomainError(f"malformed JSON at position {e.pos}: {e.msg}") from e


def _load_form(arg: str) -> Form:
    data = _load_json(arg)
    if not isinstance(data, dict) or not {"a", "b", "c"} <= set(data):
        raise DomainError('form JSON must be an object with keys "a", "b", "c"')
    return Form(_parse_int(data["a"]), _parse_int(data["b"]), _parse_int(data["c"]))


def _form_json(f: Form):
    return {"a": f.a, "b": f.b, "c": f.c}


def _matrix_json(m: UnimodularMatrix):
    out = {"p": m.p, "q": m.q, "r": m.r, "s": m.s}
    if m.word is not None:
        out["word"] = m.word
    return out


def _emit(payload, fmt: str):
    payload = _enc(payload)
    if fmt == "json":
        print(json.dumps(payload, separators=(", ", ": ")))
    else:
        def lines(obj, indent=""):
            if isinstance(obj, dict):
                for k, v in obj.items():
                    if isinstance(v, (dict, list)):
                        print(f"{indent}{k}:")
                        lines(v, indent + "  ")
                    else:
                        print(f"{indent}{k}: {v}")
            elif isinstance(obj, list):
                for v in obj:
                    if isinstance(v, (dict, list)):
                        lines(v, indent + "  ")
                    else:
                        print(f"{indent}{v}")
            else:
                print(f"{indent}{obj}")

        lines(payload)


def _cmd_reduce(args):
    f = _load_form(args.form)
    if args.mode == "gauss":
        if f.classify() == "indefinite":
            cycle, witness = reduction.gauss_reduce_indefinite(f)
            return {
                "mode": "gauss",
                "cycle": [_form_json(g) for g in cycle],
                "witness": _matrix_json(witness),
            }
        target = f if f.a > 0 else -f
        reduced, witness = reduction.reduce_definite(target)
        if f.a < 0:
            reduced = -reduced
        return {"mode": "gauss", "reduced": _form_json(reduced), "witness": _matrix_json(witness)}
    pre, cycle = reduction.zagier_reduce(f)
    return {
        "mode": "zagier",
        "preperiod": [_form_json(g) for g in pre],
        "cycle": [_form_json(g) for g in cycle],
    }


def _cmd_cf(args):
    x = QuadraticIrrational(args.p, args.q, args.surd)
    cf = reduction.cf_plus(x) if args.flavor == "plus" else reduction.cf_minus(x)
    return {
        "flavor": cf.flavor,
        "head": list(cf.head),
        "period": list(cf.period),
    }


def _cmd_pell(args):
    sol = reduction.pell(args.D, args.m, budget=args.budget)
    return {"t": sol.t, "u": sol.u, "m": sol.m, "D": sol.D}


def _cmd_hirzebruch(args):
    h = reduction.hirzebruch_class_number(args.p, hypothesis=args.hypothesis)
    cf = reduction.cf_minus(QuadraticIrrational(0, 1, args.p))
    return {
        "p": args.p,
        "h_minus_p": h,
        "period": list(cf.period),
        "hypothesis": args.hypothesis,
    }


def _cmd_compose(args):
    f1 = _load_form(args.form1)
    f2 = _load_form(args.form2)
    product = composition.compose(FormClass(f1), FormClass(f2))
    return {
        "product": _form_json(product.representative),
        "discriminant": product.discriminant(),
    }


def _cmd_classgroup(args):
    group = composition.class_group(args.disc)
    out = {
        "discriminant": args.disc,
        "order": group.order(),
        "elements": [_form_json(c.representative) for c in group.elements],
    }
    if args.table:
        out["table"] = [list(row) for row in group.table()]
    return out


def _cmd_cube(args):
    if args.cube_verb == "slice":
        data = _load_json(args.cube)
        if not isinstance(data, dict) or "cube" not in data:
            raise DomainError('cube JSON must be an object with key "cube"')
        cube = cubes.Cube(*(_parse_int(v) for v in data["cube"]))
        (U, D), (Lm, R), (F, B) = cube.slices()
        ud, lr, fb = cube.form_coefficients()
        return {
            "U": [list(r) for r in U],
            "D": [list(r) for r in D],
            "L": [list(r) for r in Lm],
            "R": [list(r) for r in R],
            "F": [list(r) for r in F],
            "B": [list(r) for r in B],
            "forms": [list(ud), list(lr), list(fb)],
            "discriminant": cube.discriminant(),
        }
    f1 = _load_form(args.form1)
    f2 = _load_form(args.form2)
    cube = cubes.cube_from_pair(f1, f2)
    ud, lr, fb = cube.form_coefficients()
    return {
        "cube": list(cube.vertices()),
        "forms": [list(ud), list(lr), list(fb)],
        "discriminant": cube.discriminant(),
    }


def _cmd_cark(args):
    f = _load_form(args.form)
    cark = carks.cark_of(f)
    out = {
        "code": list(cark.code.sizes),
        "spine": [_form_json(g) for g in cark.spine],
        "base": cark.base,
        "automorph": _matrix_json(cark.automorph),
    }
    if args.dot:
        text = carks.export_dot(cark, depth=args.depth)
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(text)
        out["dot"] = args.dot
    return out


def _cmd_represent(args):
    f = _load_form(args.form)
    sols = carks.represent(f, args.N, budget=args.budget)
    return {
        "N": args.N,
        "orbit_count": len(sols),
        "solutions": [list(v) for v in sols],
    }


def _cmd_jimm(args):
    f = _load_form(args.form)
    image = jimm.jimm_class(f)
    d1, d2 = f.discriminant(), image.discriminant()
    return {
        "input": _form_json(f),
        "image": _form_json(image),
        "input_discriminant": d1,
        "input_factorization": factor_string(d1),
        "image_discriminant": d2,
        "image_factorization": factor_string(d2),
    }


def _cmd_penner(args):
    if args.penner_verb == "point":
        f = _load_form(args.form)
        w = geometry.point_of_form(f)
        return {"u": w.u, "v": w.v}
    f1 = _load_form(args.form1)
    f2 = _load_form(args.form2)
    locus = geometry.common_locus(f1, f2)
    if locus is None:
        return {"locus": None, "unitable": geometry.is_unitable(f1, f2)}
    return {
        "locus": {"kind": locus.kind, "parameter": locus.parameter},
        "unitable": geometry.is_unitable(f1, f2),
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bqf", description="Exact arithmetic on integral binary quadratic forms."
    )
    parser.add_argument("--format", choices=("json", "plain"), default="json")
    parser.add_argument(
        "--budget",
        type=int,
        default=int(os.environ.get("BQF_BUDGET", 10**6)),
        help="step cap for all search loops (env BQF_BUDGET)",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("reduce", help="Gauss or Zagier reduction")
    p.add_argument("--mode", choices=("gauss", "zagier"), default="gauss")
    p.add_argument("form")
    p.set_defaults(run=_cmd_reduce)

    p = sub.add_parser("cf", help="continued fraction of (P + sqrt(D)) / Q")
    p.add_argument("--flavor", choices=("plus", "minus"), default="plus")
    p.add_argument("--surd", type=int, required=True)
    p.add_argument("--p", type=int, default=0)
    p.add_argument("--q", type=int, default=1)
    p.set_defaults(run=_cmd_cf)

    p = sub.add_parser("pell", help="smallest t, u with t^2 - D u^2 = m^2")
    p.add_argument("D", type=int)
    p.add_argument("--m", type=int, default=1)
    p.set_defaults(run=_cmd_pell)

    p = sub.add_parser("hirzebruch", help="class number of Q(sqrt(-p)) from the minus CF")
    p.add_argument("p", type=int)
    p.add_argument("--hypothesis", choices=("ordinary", "narrow"), default="ordinary")
    p.set_defaults(run=_cmd_hirzebruch)

    p = sub.add_parser("compose", help="Gauss product of two form classes")
    p.add_argument("form1")
    p.add_argument("form2")
    p.set_defaults(run=_cmd_compose)

    p = sub.add_parser("classgroup", help="the form class group of a discriminant")
    p.add_argument("disc", type=int)
    p.add_argument("--table", action="store_true")
    p.set_defaults(run=_cmd_classgroup)

    p = sub.add_parser("cube", help="Bhargava cube operations")
    cube_sub = p.add_subparsers(dest="cube_verb", required=True)
    ps = cube_sub.add_parser("slice")
    ps.add_argument("cube")
    ps.set_defaults(run=_cmd_cube)
    pf = cube_sub.add_parser("from-pair")
    pf.add_argument("form1")
    pf.add_argument("form2")
    pf.set_defaults(run=_cmd_cube)

    p = sub.add_parser("cark", help="cark of an indefinite form")
    p.add_argument("form")
    p.add_argument("--dot")
    p.add_argument("--depth", type=int, default=1)
    p.set_defaults(run=_cmd_cark)

    p = sub.add_parser("represent", help="orbit representatives of f(X, Y) = N")
    p.add_argument("form")
    p.add_argument("N", type=int)
    p.set_defaults(run=_cmd_represent)

    p = sub.add_parser("jimm", help="Jimm image of a form class")
    p.add_argument("form")
    p.set_defaults(run=_cmd_jimm)

    p = sub.add_parser("penner", help="half-plane correspondence")
    penner_sub = p.add_subparsers(dest="penner_verb", required=True)
    pp = penner_sub.add_parser("point")
    pp.add_argument("form")
    pp.set_defaults(run=_cmd_penner)
    pl = penner_sub.add_parser("locus")
    pl.add_argument("form1")
    pl.add_argument("form2")
    pl.set_defaults(run=_cmd_penner)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = args.run(args)
    except SearchExhausted as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    _emit(payload, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
