"""Command line entry point.

Every command prints a JSON report on stdout and a one-line summary on
stderr.  Exit status: 0 when every check passed, 1 when a check failed (the
report carries the witness), 2 for bad input, bad usage or an exhausted
search budget.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import __version__
from .bibundle import (CONVENTION, BudgetExceeded, InvalidBibundle,
                       MiddleMismatch, NotPrincipal, bibundle_from_json,
                       bibundle_to_json, compose, functor_stacky_group,
                       is_left_principal, is_right_principal, morita_refute,
                       morita_verify, mutate_action, quotient_stack_group, stacky_group_check,
                       validate_bibundle)
from .circlegeom import (DEFAULT_ALPHAS, TorusCircle, compose_circles, emit_plot,
                         oracle_compare, sweep)
from .convalg import (AxiomsFailed, Undecided, bimodule_iso, character_module,
                      check_coassoc, check_counit, cyclic_character,
                      hopfish_from_stacky_group, module_tensor, point_module)
from .groupoid import (GroupSpec, InvalidAction, NotAFunctor, UnknownObject,
                       groupoid_from_json, validate)
from .nctorus import ModuleClass, NotCoprime, ZeroClass, tensor_classify
from .scalars import Angle
from .symprel import (check_zigzag, random_symplectic_space, standard_space,
                      zigzag_report)


class UsageError(ValueError):
    pass


INPUT_ERRORS = (UsageError, ValueError, KeyError, TypeError, json.JSONDecodeError,
                OSError, InvalidAction, UnknownObject, NotAFunctor, InvalidBibundle,
                MiddleMismatch, NotPrincipal, NotCoprime, ZeroClass)


def _load(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _is_bibundle(d) -> bool:
    return isinstance(d, dict) and "carrier" in d and "actL" in d


# ---------------------------------------------------------------------------
# commands; each returns (report, ok, summary)

def cmd_validate(args):
    d = _load(args.input)
    if _is_bibundle(d):
        B = bibundle_from_json(d)
        bad = validate_bibundle(B)
        report = {"kind": "bibundle", "valid": not bad,
                  "violations": [v.to_json() for v in bad], "convention": CONVENTION}
        if not bad:
            report["rightPrincipal"] = is_right_principal(B).to_json()
            report["leftPrincipal"] = is_left_principal(B).to_json()
    else:
        G = groupoid_from_json(d)
        bad = validate(G)
        report = {"kind": "groupoid", "valid": not bad,
                  "violations": [v.to_json() for v in bad],
                  "objects": G.n_objects, "arrows": G.n_arrows}
    return report, not bad, f"{report['kind']}: {len(bad)} violation(s)"


def cmd_compose(args):
    M = bibundle_from_json(_load(args.first))
    N = bibundle_from_json(_load(args.second))
    C = compose(M, N)
    rp = is_right_principal(C)
    report = {"convention": CONVENTION, "carrier": C.size,
              "rightPrincipal": rp.to_json(), "bibundle": bibundle_to_json(C)}
    return report, True, f"composite carrier size {C.size}"


def cmd_morita(args):
    G = groupoid_from_json(_load(args.first))
    H = groupoid_from_json(_load(args.second))
    obs = morita_refute(G, H)
    report = {"obstruction": obs.to_json() if obs else None}
    ok = obs is None
    if args.bibundle:
        M = bibundle_from_json(_load(args.bibundle))
        check = morita_verify(G, H, M)
        report["bibundle"] = check.to_json()
        ok = ok and bool(check)
    summary = f"obstruction: {obs.invariant}" if obs else "no obstruction found"
    return report, ok, summary


def _stacky_data(args):
    if args.input:
        d = _load(args.input)
        G = groupoid_from_json(d["groupoid"])
        named = {"G": G}
        return (G,) + tuple(bibundle_from_json(d[k], named) for k in ("Em", "Ee", "Einv"))
    if args.family == "discrete":
        return functor_stacky_group(GroupSpec.cyclic(args.n), True)
    if args.family == "classifying":
        return functor_stacky_group(GroupSpec.cyclic(args.n), False)
    if args.family == "quotient":
        return quotient_stack_group(args.n, args.d)
    raise UsageError("give --input or --family")


def cmd_stacky(args):
    G, Em, Ee, Einv = _stacky_data(args)
    report = {}
    if args.mutate is not None:
        Em, info = mutate_action(Em, args.mutate)
        report["mutation"] = info
    try:
        res = stacky_group_check(G, Em, Ee, Einv)
    except NotPrincipal as e:
        name, check = e.args[0]
        report.update({"ok": False, "notPrincipal": name, "witness": check.to_json()})
        return report, False, f"{name} is not right principal"
    report.update(res.to_json())
    failed = [k for k, v in res.checks.items() if not v]
    return report, res.ok, "all diagrams commute" if res.ok else f"failed: {', '.join(failed)}"


def cmd_hopfish(args):
    G, Em, Ee, Einv = _stacky_data(args)
    D = hopfish_from_stacky_group(G, Em, Ee, Einv)
    co, cu = check_coassoc(D), check_counit(D)
    report = {"dims": {"algebra": D.algebra.dim, "delta": D.delta.dim,
                       "epsilon": D.epsilon.dim, "antipode": D.antipode.dim},
              "coassociative": co, "counital": cu}
    return report, co and cu, f"coassoc={co} counit={cu}"


def cmd_tensor_mod(args):
    disc = args.family == "discrete"
    G, Em, Ee, Einv = functor_stacky_group(GroupSpec.cyclic(args.n), disc)
    D = hopfish_from_stacky_group(G, Em, Ee, Einv)
    A = D.algebra
    if disc:
        make = lambda k: point_module(A, k)  # noqa: E731
    else:
        make = lambda k: character_module(A, cyclic_character(args.n, k))  # noqa: E731
    T = module_tensor(make(args.a), make(args.b), D)
    matches = [k for k in range(args.n) if bimodule_iso(T, make(k)) is not None]
    report = {"family": args.family, "n": args.n, "a": args.a, "b": args.b,
              "dim": T.dim, "isomorphic_to": matches}
    return report, True, f"dim {T.dim}, isomorphic to {matches or 'none'}"


def _class(p, q, alpha: str) -> ModuleClass:
    return ModuleClass(p, q, Angle.parse(alpha))


def cmd_nct_tensor(args):
    res = tensor_classify(_class(args.p1, args.q1, args.alpha1),
                          _class(args.p2, args.q2, args.alpha2))
    report = res.to_json()
    if res.result is not None:
        report.update({"p": res.result.p, "q": res.result.q,
                       "alpha": str(res.result.alpha)})
    summary = (f"{res.multiplicity} x {res.result}" if res.result else "0")
    return report, True, summary


def cmd_oracle(args):
    if args.sweep is not None:
        reports = sweep(args.sweep, tuple(args.alphas or DEFAULT_ALPHAS))
        bad = [r for r in reports if not r.agree]
        report = {"bound": args.sweep, "alphas": list(args.alphas or DEFAULT_ALPHAS),
                  "cases": len(reports), "disagreements": len(bad),
                  "witnesses": [r.to_json() for r in bad[:20]]}
        return report, not bad, f"{len(reports) - len(bad)}/{len(reports)} agree"
    if None in (args.p1, args.q1, args.p2, args.q2):
        raise UsageError("give --sweep or all of --p1 --q1 --p2 --q2")
    r = oracle_compare(_class(args.p1, args.q1, args.alpha1),
                       _class(args.p2, args.q2, args.alpha2))
    return r.to_json(), r.agree, "agree" if r.agree else "DISAGREE"


def cmd_zigzag(args):
    rng = random.Random(args.seed)
    spaces = [("standard", standard_space(args.dim // 2))]
    spaces += [(f"random[{i}]", random_symplectic_space(args.dim, rng))
               for i in range(args.random)]
    results = {name: zigzag_report(S) for name, S in spaces}
    ok = all(check_zigzag(S) for _, S in spaces)
    return {"dim": args.dim, "seed": args.seed, "results": results}, ok, \
        f"{len(spaces)} space(s), zig-zag {'holds' if ok else 'FAILS'}"


def _parse_circle(text: str) -> TorusCircle:
    parts = text.split(",", 2)
    if len(parts) < 2:
        raise UsageError(f"circle must be p,q[,alpha], got {text!r}")
    alpha = Angle.parse(parts[2]) if len(parts) == 3 else Angle()
    return TorusCircle(int(parts[0]), int(parts[1]), alpha)


def cmd_plot(args):
    circles = [_parse_circle(c) for c in args.circle]
    groups = None
    if args.compose:
        if len(circles) != 2:
            raise UsageError("--compose needs exactly two circles")
        comps = compose_circles(*circles)
        circles = [c.circle for c in comps]
        groups = list(range(len(circles)))
    symbols = dict(_parse_symbol(s) for s in args.symbol)
    emit_plot(circles, args.out, lam=args.lam, symbols=symbols, groups=groups)
    report = {"path": str(args.out), "circles": [c.to_json() for c in circles],
              "lam_rendered_as": args.lam}
    return report, True, f"wrote {args.out}"


def _parse_symbol(text: str):
    name, _, value = text.partition("=")
    if not value:
        raise UsageError(f"symbol must be name=value, got {text!r}")
    return name, float(value)


# ---------------------------------------------------------------------------

def _stacky_args(p):
    p.add_argument("--input", help="JSON with groupoid, Em, Ee, Einv")
    p.add_argument("--family", choices=["discrete", "classifying", "quotient"],
                   help="built-in family: Z_n as a set, B Z_n, or Z_n // <d>")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--d", type=int, default=1, help="generator of the acting subgroup")


def _pair_args(p, required):
    for name in ("p1", "q1", "p2", "q2"):
        p.add_argument(f"--{name}", type=int, required=required)
    p.add_argument("--alpha1", default="a1")
    p.add_argument("--alpha2", default="a2")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grouplike", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--output", "-o", help="write the JSON report here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check groupoid or bibundle axioms")
    p.add_argument("input")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("compose-bibundles", help="compose two bibundles")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("morita", help="look for Morita invariants that differ")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--bibundle", help="also check that this bibundle is biprincipal")
    p.set_defaults(func=cmd_morita)

    p = sub.add_parser("stacky-check", help="group-object diagrams for a stacky group")
    _stacky_args(p)
    p.add_argument("--mutate", type=int, metavar="SEED",
                   help="redirect one action entry of Em first")
    p.set_defaults(func=cmd_stacky)

    p = sub.add_parser("hopfish", help="build the bimodules and check coassoc/counit")
    _stacky_args(p)
    p.set_defaults(func=cmd_hopfish)

    p = sub.add_parser("tensor-mod", help="tensor two simple modules through Delta")
    p.add_argument("--family", choices=["discrete", "classifying"], default="discrete")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--b", type=int, default=1)
    p.set_defaults(func=cmd_tensor_mod)

    p = sub.add_parser("nct-tensor", help="classify a tensor product of torus modules")
    _pair_args(p, True)
    p.set_defaults(func=cmd_nct_tensor)

    p = sub.add_parser("oracle-compare", help="classifier vs circle composition")
    _pair_args(p, False)
    p.add_argument("--sweep", type=int, metavar="BOUND",
                   help="all coprime pairs with |p|, |q| <= BOUND")
    p.add_argument("--alphas", nargs="*", help=f"offsets for the sweep (default {DEFAULT_ALPHAS})")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("zigzag", help="rigidity zig-zag in the symplectic category")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--random", type=int, default=0, help="number of random forms")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_zigzag)

    p = sub.add_parser("plot", help="SVG of circles on the torus")
    p.add_argument("--circle", action="append", default=[], metavar="P,Q[,ALPHA]")
    p.add_argument("--compose", action="store_true", help="plot the composite of two circles")
    p.add_argument("--lam", type=float, default=None,
                   help="numeric value used to draw lam (display only)")
    p.add_argument("--symbol", action="append", default=[], metavar="NAME=VALUE")
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    if getattr(args, "lam", 0) is None:
        from .circlegeom import DEFAULT_LAMBDA
        args.lam = DEFAULT_LAMBDA
    try:
        report, ok, summary = args.func(args)
    except BudgetExceeded as e:
        print(f"error: search budget exceeded: {e}", file=sys.stderr)
        return 2
    except (AxiomsFailed, Undecided) as e:
        report, ok, summary = {"error": type(e).__name__, "detail": _jsonable(e.args)}, False, str(e)
    except INPUT_ERRORS as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    report = {"command": args.command, "ok": ok, **report}
    text = json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(f"[{args.command}] {'PASS' if ok else 'FAIL'}: {summary}", file=sys.stderr)
    return 0 if ok else 1


def _jsonable(x):
    try:
        json.dumps(x)
        return x
    except TypeError:
        return str(x)


if __name__ == "__main__":
    sys.exit(main())
