"""Command line interface: ``metabelian <subcommand> [options]``.

Automorphisms are given either as a definition (a file path, or inline text
with ``;`` between images) or with ``--zoo``, e.g. ``--zoo "tauP 1 2 3 1,0,1,0"``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from . import zoo
from .endo import Coset, Endomorphism, NotAutomorphism, NotIA, star_act
from .graded import basis, bullet, coordinates, rank_gr
from .harness import expected_ranks, rank_report, reports_to_json, run_suite, suite_exit_code
from .laurent import LaurentPoly, format_scalar
from .magnus import FreeMetabelian, NotDerived
from .parser import (ParseError, format_element, format_endomorphism, parse_element,
                     parse_endomorphism, parse_scalar)

RANK_ENV = "METABELIAN_RANK"


class UsageError(Exception):
    pass


# -- helpers -------------------------------------------------------------------

def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _scalar_arg(G: FreeMetabelian, text: str):
    if all(ch.isdigit() or ch in ", " for ch in text) and "," in text:
        return tuple(_int_list(text))
    return parse_scalar(text, G.n)


def zoo_from_spec(G: FreeMetabelian, spec: str) -> Endomorphism:
    """Build a named automorphism from ``"name arg ..."``."""
    parts = spec.split(None, 1)
    if not parts:
        raise UsageError("empty --zoo specification")
    name, rest = parts[0], (parts[1] if len(parts) > 1 else "")
    args = rest.split()
    try:
        if name == "tau":
            return zoo.tau_seq(G, int(args[0]), _int_list(args[1]))
        if name == "tauP":
            return zoo.tau_P(G, int(args[0]), int(args[1]), int(args[2]), _int_list(args[3]))
        if name == "B_P":
            return zoo.B_P(G, int(args[0]), int(args[1]), int(args[2]), _scalar_arg(G, " ".join(args[3:])))
        if name == "B_Q":
            return zoo.B_Q(G, int(args[0]), int(args[1]), _scalar_arg(G, " ".join(args[2:])))
        if name == "xi":
            return zoo.inner(G, parse_element(rest, G))
        if name == "pi":
            return zoo.pi(G, int(args[0]), int(args[1]))
        if name == "sigma":
            return zoo.sigma(G, int(args[0]), int(args[1]))
        if name == "beta":
            return zoo.beta(G)
        if name == "mu":
            return zoo.mu(G)
        if name == "eta":
            return zoo.eta(G, int(args[0]))
        if name == "delta":
            return zoo.delta(G, _int_list(args[0]))
        if name == "psi1":
            return zoo.psi1(G, int(args[0]))
    except (IndexError, ValueError) as exc:
        raise UsageError(f"bad arguments for {name}: {exc}") from None
    raise UsageError(f"unknown zoo name {name!r}")


def _read_definition(text: str) -> str:
    if os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            return fh.read()
    return text.replace(";", "\n")


def _automorphism(args, G: FreeMetabelian) -> Endomorphism:
    if args.zoo:
        return zoo_from_spec(G, args.zoo)
    if not args.definition:
        raise UsageError("give a definition (file or inline images) or --zoo")
    return parse_endomorphism(_read_definition(args.definition), G)


def _matrix(text: str):
    rows = [_int_list(r) for r in text.split(";") if r.strip()]
    if not rows or any(len(r) != len(rows) for r in rows):
        raise UsageError(f"matrix {text!r} is not square")
    return tuple(tuple(r) for r in rows)


def _rank(args) -> int:
    n = args.rank
    if n is None:
        env = os.environ.get(RANK_ENV)
        if env is None:
            raise UsageError(f"--rank is required (or set {RANK_ENV})")
        n = int(env)
    if n < 2:
        raise UsageError("rank must be at least 2")
    return n


def _weight(args, default: Optional[int] = None) -> int:
    c = args.weight if args.weight is not None else default
    if c is None:
        raise UsageError("--weight is required")
    if c < 2:
        raise UsageError("weight must be at least 2")
    return c


def _emit(args, text_out: str, json_obj) -> None:
    if args.format == "json":
        data = json.dumps(json_obj, indent=2) + "\n"
    else:
        data = text_out if text_out.endswith("\n") else text_out + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data)


def _depth_value(d):
    return d if isinstance(d, int) else None


# -- subcommands -------------------------------------------------------------

def cmd_eval(args) -> int:
    G = FreeMetabelian(_rank(args))
    w = parse_element(args.expr, G)
    obj = {"element": format_element(w), "exponents": list(w.e), "fox": [format_scalar(d) for d in w.d]}
    _emit(args, obj["element"], obj)
    return 0


def cmd_depth(args) -> int:
    G = FreeMetabelian(_rank(args))
    if args.zoo or args.auto:
        if args.auto:
            args.definition = args.auto
        phi = _automorphism(args, G)
        d = phi.ia_depth()
        obj = {"ia_depth": _depth_value(d)}
    else:
        if not args.expr:
            raise UsageError("give an element, --auto or --zoo")
        d = parse_element(args.expr, G).gamma_depth()
        obj = {"depth": _depth_value(d)}
    _emit(args, str(d), obj)
    return 0


def cmd_jacobian(args) -> int:
    G = FreeMetabelian(_rank(args))
    phi = _automorphism(args, G)
    rows = [[format_scalar(x) for x in row] for row in phi.jacobian]
    det = phi.det_jacobian()
    auto = phi.is_automorphism()
    lines = [" | ".join(r) for r in rows]
    lines.append(f"det = {format_scalar(det)}")
    lines.append(f"automorphism: {'yes' if auto else 'no'}")
    _emit(args, "\n".join(lines), {"jacobian": rows, "det": format_scalar(det), "automorphism": auto})
    return 0


def cmd_invert(args) -> int:
    G = FreeMetabelian(_rank(args))
    phi = _automorphism(args, G)
    inv = phi.inverse()
    if not (phi * inv).is_identity():
        raise NotAutomorphism("inverse check failed")
    _emit(args, format_endomorphism(inv), {"images": [format_element(im) for im in inv.images]})
    return 0


def cmd_chi(args) -> int:
    G = FreeMetabelian(_rank(args))
    c = _weight(args)
    phi = _automorphism(args, G)
    t = phi.chi(c)
    text = "\n".join(f"x{i + 1}: " + (", ".join(f"{v}*{list(k)}" for k, v in s.pairs()) or "0")
                     for i, s in enumerate(t.slots))
    _emit(args, text, {"weight": c, "chi": t.to_json()})
    return 0


def cmd_act(args) -> int:
    G = FreeMetabelian(_rank(args))
    c = _weight(args)
    g = _matrix(args.matrix)
    if len(g) != G.n:
        raise UsageError("matrix size differs from rank")
    phi = _automorphism(args, G)
    star = star_act(g, Coset(phi, c)).chi()
    bul = bullet(g, phi.chi(c))
    obj = {"star": star.to_json(), "bullet": bul.to_json(), "equal": star == bul}
    text = f"star:   {star.to_json()}\nbullet: {bul.to_json()}\nequal: {star == bul}"
    _emit(args, text, obj)
    return 0 if star == bul else 1


def cmd_basis(args) -> int:
    n, c = _rank(args), _weight(args)
    b = basis(n, c)
    text = "\n".join("[" + ", ".join(f"x{i}" for i in t) + "]" for t in b)
    _emit(args, text + f"\n# {len(b)} elements", {"n": n, "c": c, "basis": [list(t) for t in b]})
    return 0


def cmd_ranks(args) -> int:
    n, c = _rank(args), _weight(args)
    rep = rank_report(n, c, closure=None if not args.no_closure else False)
    exp, got = rep.details["expected"], rep.details["computed"]
    keys = list(exp)
    lines = [f"{'quantity':<10}{'formula':>10}{'computed':>10}"]
    for k in keys:
        lines.append(f"{k:<10}{exp[k]:>10}{str(got.get(k, '-')):>10}")
    lines.append(f"status: {rep.status}")
    _emit(args, "\n".join(lines), rep.to_dict())
    return 0 if rep.status != "fail" else 1


def cmd_verify_suite(args) -> int:
    n = _rank(args)
    c = _weight(args, 3)
    reports = run_suite(n, c, seed=args.seed, samples=args.samples)
    if args.format == "json":
        data = reports_to_json(reports, timings=args.timings)
    else:
        lines = []
        for r in reports:
            tag = r.status.upper() + (f" [{r.variant}]" if r.variant else "")
            lines.append(f"{tag:<28} {r.check} {json.dumps(r.params)}")
        data = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data)
    return suite_exit_code(reports)


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rank", "-n", type=int, default=None, help=f"rank n (default: ${RANK_ENV})")
    common.add_argument("--weight", "-c", type=int, default=None, help="weight c")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="write output to this file")

    auto = argparse.ArgumentParser(add_help=False)
    auto.add_argument("definition", nargs="?", help="automorphism file, or inline images separated by ';'")
    auto.add_argument("--zoo", help='named automorphism, e.g. "mu" or "tauP 1 2 3 1,0,1,0"')

    p = argparse.ArgumentParser(prog="metabelian", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="parse and normalize an element")
    s.add_argument("expr")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("depth", parents=[common], help="lower central depth of an element or automorphism")
    s.add_argument("expr", nargs="?")
    s.add_argument("--auto", help="automorphism definition (file or inline)")
    s.add_argument("--zoo")
    s.set_defaults(func=cmd_depth)

    for name, fn, helptext in (("jacobian", cmd_jacobian, "Fox Jacobian and determinant"),
                               ("invert", cmd_invert, "inverse automorphism"),
                               ("chi", cmd_chi, "chi_c coordinates")):
        s = sub.add_parser(name, parents=[common, auto], help=helptext)
        s.set_defaults(func=fn)

    s = sub.add_parser("act", parents=[common, auto], help="star action against bullet action of a matrix")
    s.add_argument("--matrix", required=True, help='integer matrix, rows separated by ";", e.g. "1,1;0,1"')
    s.set_defaults(func=cmd_act)

    s = sub.add_parser("basis", parents=[common], help="basic commutators of weight c")
    s.set_defaults(func=cmd_basis)

    s = sub.add_parser("ranks", parents=[common], help="rank formulas against span closures")
    s.add_argument("--no-closure", action="store_true")
    s.set_defaults(func=cmd_ranks)

    s = sub.add_parser("verify-suite", parents=[common], help="run every check at rank n, weight c")
    s.add_argument("--samples", type=int, default=50)
    s.add_argument("--timings", action="store_true", help="include wall-clock millis in JSON")
    s.set_defaults(func=cmd_verify_suite)
    return p


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ParseError) as exc:
        print(f"metabelian: error: {exc}", file=sys.stderr)
        return 2
    except (NotAutomorphism, NotIA, NotDerived, ValueError, ArithmeticError) as exc:
        print(f"metabelian: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
