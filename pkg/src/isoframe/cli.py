"""Command-line front end.

Every subcommand prints one JSON object with the keys ``value``, ``class``,
``flags`` and ``diagnostics`` (or just the value with ``--plain``).
Exit codes: 0 success, 2 usage error, 3 domain/range error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Sequence

from . import arith, convexity, differential, integral, means, plotgen
from .errors import DomainError, IsoframeError, NumericError, UsageError, InvalidParam
from .exprparse import parse_constant, parse_expr, parse_mapping, parse_predicate
from .mappings import Frame2D
from .numerics import Interval, QuadConfig

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_NUMERIC = 0, 2, 3, 4


class Result:
    def __init__(self, value, klass=None, flags=None, diagnostics=None):
        self.value = value
        self.klass = klass
        self.flags = flags or {}
        self.diagnostics = diagnostics or {}


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _plain(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        text = repr(v)
        return text[:-2] if text.endswith(".0") else text
    return str(v)


# ---------------------------------------------------------------------------
# argument helpers


def _bindings(args) -> dict[str, float]:
    out: dict[str, float] = {}
    for item in args.let or ():
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise InvalidParam(f"--let expects name=value, got {item!r}")
        out[name.strip()] = parse_constant(value, out)
    return out


def _split_top(text: str, sep: str = ",") -> list[str]:
    """Split on separators that are not inside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _interval(text: str, args, open_lo=False, open_hi=False) -> Interval:
    parts = _split_top(text)
    if len(parts) != 2:
        raise InvalidParam(f"interval must look like a,b; got {text!r}")
    a, b = (parse_constant(p, _bindings(args)) for p in parts)
    if a > b:
        raise InvalidParam(f"interval {text!r} has its ends reversed")
    return Interval(a, b, open_lo, open_hi)


def _numbers(texts: Sequence[str], args) -> list[float]:
    env = _bindings(args)
    return [parse_constant(t, env) for t in texts]


def _mapping(text: str, args):
    return parse_mapping(text, _bindings(args))


def _frame(args) -> Frame2D:
    return Frame2D(_mapping(args.g, args), _mapping(args.h, args))


def _quad_config() -> QuadConfig:
    raw = os.environ.get("ISOFRAME_QUAD_TOL")
    if not raw:
        return QuadConfig()
    try:
        tol = float(raw)
    except ValueError:
        raise InvalidParam(f"ISOFRAME_QUAD_TOL must be a number, got {raw!r}") from None
    return QuadConfig(abs_tol=tol, rel_tol=tol)


def _function(text: str, args, domain: Interval | None = None):
    return parse_expr(text, _bindings(args), domain)


# ---------------------------------------------------------------------------
# subcommands


def cmd_arith(args) -> Result:
    g = _mapping(args.g, args)
    xs = _numbers(args.operands, args)
    need = {"add": 2, "sub": 2, "mul": 2, "div1": 2, "div2": 2}[args.op]
    if len(xs) < need or (args.op in ("mul", "div1", "div2") and len(xs) != 2):
        raise InvalidParam(f"arith {args.op} got {len(xs)} operands")
    if args.op == "add":
        value = arith.iso_add(xs, g)
    elif args.op == "sub":
        value = arith.iso_sub(xs[0], xs[1:], g)
    elif args.op == "mul":
        value = arith.iso_mul(xs[0], xs[1], g)
    elif args.op == "div1":
        value = arith.iso_div1(xs[0], xs[1], g)
    else:
        value = arith.iso_div2(xs[0], xs[1], g)
    return Result(value, diagnostics={"mapping": g.name, "operation": args.op})


def cmd_mean_numbers(args) -> Result:
    g = _mapping(args.g, args)
    xs = _numbers(args.xs, args)
    w = _numbers(_split_top(args.weights), args) if args.weights else None
    value = means.mean_numbers(xs, w, g)
    return Result(value, "Numbers", diagnostics={"mapping": g.name, "n": len(xs)})


def cmd_mean_function(args) -> Result:
    fr = _frame(args)
    iv = _interval(args.interval, args, args.open_lo, args.open_hi)
    f = _function(args.f, args, iv)
    fm = means.mean_function(f, iv, fr, _quad_config())
    flags = {
        "generalized": fm.generalized,
        "outside_range": fm.outside_range,
        "improper": fm.improper,
    }
    return Result(fm.value, str(fm.tag), flags, {"interval": str(iv), "g": fr.g.name, "h": fr.h.name})


def cmd_derive(args) -> Result:
    fr = _frame(args)
    x = parse_constant(args.at, _bindings(args))
    f = _function(args.f, args)
    if args.metrical:
        value = differential.metrical_derivative(f, fr, x)
    else:
        value = differential.dual_derivative(f, fr, x)
    density = differential.axis_density(fr.g, x)
    diagnostics = {
        "at": x,
        "g_density": None if density.singular else density.density,
    }
    return Result(value, "metrical" if args.metrical else "dual", {}, diagnostics)


def cmd_integrate(args) -> Result:
    iv = _interval(args.interval, args, args.open_lo, args.open_hi)
    f = _function(args.f, args, iv)
    cfg = _quad_config()
    kind = args.type
    if kind == "1":
        if not args.h:
            raise InvalidParam("--type 1 needs --h")
        value = integral.iso_integral_1(f, iv, _mapping(args.h, args), cfg)
    elif kind == "2":
        if not args.g:
            raise InvalidParam("--type 2 needs --g")
        value = integral.iso_integral_2(f, iv, _mapping(args.g, args), cfg)
    elif kind == "geometric":
        value = integral.geometric_integral(f, iv, cfg)
    else:
        value = integral.elastic_integral(f, iv, cfg)
    return Result(value, kind, {}, {"interval": str(iv)})


def cmd_convexity(args) -> Result:
    fr = _frame(args)
    iv = _interval(args.interval, args, args.open_lo, args.open_hi)
    f = _function(args.f, args, iv)
    verdict = convexity.classify_dvi_convexity(f, fr, iv)
    diagnostics = {
        "geometric_direction": verdict.geometric_direction,
        "aux_direction": verdict.aux_direction,
        "evidence": list(verdict.evidence),
    }
    flags = {"strict": verdict.strict}
    if args.verify:
        check = convexity.verify_dvi_inequality(f, fr, iv, args.verify, args.seed, verdict)
        flags["verified"] = check.passed
        diagnostics["trials"] = check.trials
        ce = check.counterexample
        diagnostics["counterexample"] = None if ce is None else [ce.x1, ce.x2, ce.lam, ce.lhs, ce.rhs]
    return Result(verdict.inequality, verdict.kind, flags, diagnostics)


def _box(text: str | None, args) -> Interval | None:
    return None if text is None else _interval(text, args)


def cmd_convex_set(args) -> Result:
    g = _mapping(args.g, args)
    env = _bindings(args)
    if args.dim == 1:
        member = parse_predicate(args.predicate, env, ("x",))
        check = convexity.is_convex_set_1d(member, g, args.trials, args.seed, _box(args.box, args))
    else:
        g2 = _mapping(args.g2 or args.g, args)
        member = parse_predicate(args.predicate, env, ("x", "y"))
        box = None
        if args.box or args.box2:
            box = (_box(args.box, args) or g.domain, _box(args.box2, args) or g2.domain)
        check = convexity.is_convex_set_2d(member, g, g2, args.trials, args.seed, box)
    ce = check.counterexample
    return Result(
        check.passed,
        "convex" if check.passed else "not_convex",
        {},
        {"trials": check.trials, "seed": args.seed, "counterexample": None if ce is None else list(ce)},
    )


def cmd_compare_means(args) -> Result:
    g, h = _mapping(args.g, args), _mapping(args.h, args)
    iv = _interval(args.interval, args, args.open_lo, args.open_hi)
    verdict = means.compare_means(g, h, iv)
    return Result(verdict, None, {}, {"meaning": f"mean_{g.name} {verdict} mean_{h.name}"})


def cmd_stolarsky(args) -> Result:
    env = _bindings(args)
    p, q = parse_constant(args.p, env), parse_constant(args.q, env)
    a, b = parse_constant(args.a, env), parse_constant(args.b, env)
    return Result(means.quasi_stolarsky(p, q, a, b), "V", {}, {"p": p, "q": q})


def cmd_cauchy_mean(args) -> Result:
    x1, x2 = _numbers([args.x1, args.x2], args)
    f, g = _function(args.f, args), _function(args.g, args)
    return Result(means.cauchy_mean(f, g, x1, x2), None, {}, {"x1": x1, "x2": x2})


def cmd_plot(args) -> Result:
    fr = _frame(args)
    iv = _interval(args.interval, args, args.open_lo, args.open_hi)
    f = _function(args.f, args, iv)
    series = plotgen.graph_series(f, fr, iv, args.samples)
    plotgen.emit([series], args.format, args.out)
    return Result(
        len(series.points),
        None,
        {"singular_points": bool(series.annotations)},
        {"out": args.out, "format": args.format},
    )


# ---------------------------------------------------------------------------
# parser


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--plain", action="store_true", help="print only the value")
    common.add_argument("--let", action="append", metavar="NAME=VALUE",
                        help="bind a named constant usable in expressions (repeatable)")

    def interval_opts(p, required=True):
        p.add_argument("--interval", required=required, help="a,b (inf, -inf, pi, e allowed)")
        p.add_argument("--open-lo", action="store_true")
        p.add_argument("--open-hi", action="store_true")

    root = argparse.ArgumentParser(prog="isoframe", description="Isomorphic frames, means and calculus.")
    sub = root.add_subparsers(dest="command", required=True)

    p = sub.add_parser("arith", parents=[common], help="isomorphic arithmetic")
    p.add_argument("op", choices=["add", "sub", "mul", "div1", "div2"])
    p.add_argument("--g", required=True)
    p.add_argument("operands", nargs="+")
    p.set_defaults(run=cmd_arith)

    p = sub.add_parser("mean-numbers", parents=[common], help="weighted isomorphic mean of numbers")
    p.add_argument("--g", required=True)
    p.add_argument("--weights")
    p.add_argument("xs", nargs="+")
    p.set_defaults(run=cmd_mean_numbers)

    p = sub.add_parser("mean-function", parents=[common], help="isomorphic mean of a function")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    interval_opts(p)
    p.set_defaults(run=cmd_mean_function)

    p = sub.add_parser("derive", parents=[common], help="dual-isomorphic derivative")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--at", required=True)
    p.add_argument("--metrical", action="store_true")
    p.set_defaults(run=cmd_derive)

    p = sub.add_parser("integrate", parents=[common], help="isomorphic integrals")
    p.add_argument("--type", required=True, choices=["1", "2", "geometric", "elastic"])
    p.add_argument("--f", required=True)
    p.add_argument("--g")
    p.add_argument("--h")
    interval_opts(p)
    p.set_defaults(run=cmd_integrate)

    p = sub.add_parser("convexity", parents=[common], help="DVI-convexity verdict")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    interval_opts(p)
    p.add_argument("--verify", type=int, metavar="N", default=0)
    p.add_argument("--seed", type=int, default=convexity.DEFAULT_SEED)
    p.set_defaults(run=cmd_convexity)

    p = sub.add_parser("convex-set", parents=[common], help="randomized isomorphic convex-set check")
    p.add_argument("--dim", type=int, choices=[1, 2], required=True)
    p.add_argument("--predicate", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--g2")
    p.add_argument("--trials", type=int, default=convexity.DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=convexity.DEFAULT_SEED)
    p.add_argument("--box", help="sampling range a,b for x (default: domain of g)")
    p.add_argument("--box2", help="sampling range a,b for y (default: domain of g2)")
    p.set_defaults(run=cmd_convex_set)

    p = sub.add_parser("compare-means", parents=[common], help="order of two isomorphic means")
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    interval_opts(p)
    p.set_defaults(run=cmd_compare_means)

    p = sub.add_parser("stolarsky", parents=[common], help="quasi-Stolarsky mean Q_{p,q}(a,b)")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(run=cmd_stolarsky)

    p = sub.add_parser("cauchy-mean", parents=[common], help="Cauchy mean-value point")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("x1")
    p.add_argument("x2")
    p.set_defaults(run=cmd_cauchy_mean)

    p = sub.add_parser("plot", parents=[common], help="sample the graph and write CSV or SVG")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    interval_opts(p)
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--format", choices=["csv", "svg"], default="csv")
    p.add_argument("--out", required=True)
    p.set_defaults(run=cmd_plot)
    return root


def _exit_code(exc: IsoframeError) -> int:
    if isinstance(exc, UsageError):
        return EXIT_USAGE
    if isinstance(exc, DomainError):
        return EXIT_DOMAIN
    if isinstance(exc, NumericError):
        return EXIT_NUMERIC
    return EXIT_USAGE


_VALUE_OPTIONS = {
    "--f", "--g", "--g2", "--h", "--interval", "--at", "--p", "--q",
    "--box", "--box2", "--weights", "--predicate", "--let",
}


def _attach_values(argv: Sequence[str]) -> list[str]:
    """Glue ``--interval -1,1`` into ``--interval=-1,1`` so values may start with '-'."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = _parser()
    argv = _attach_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.run(args)
    except IsoframeError as exc:
        stderr.write(f"isoframe: {type(exc).__name__}: {exc}\n")
        return _exit_code(exc)
    except OSError as exc:
        stderr.write(f"isoframe: {exc}\n")
        return EXIT_USAGE
    if args.plain:
        stdout.write(_plain(result.value) + "\n")
    else:
        payload = {
            "value": result.value,
            "class": result.klass,
            "flags": result.flags,
            "diagnostics": result.diagnostics,
        }
        stdout.write(json.dumps(_jsonable(payload), sort_keys=False) + "\n")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
