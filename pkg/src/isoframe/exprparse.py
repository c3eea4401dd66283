"""Parsing of expressions, mapping strings and predicates.

Grammar (precedence low to high; note unary minus binds tighter than ``^``,
so ``-x^2`` is ``(-x)^2``)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := unary ('^' factor)?
    unary  := '-' unary | atom
    atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'

Parsed trees are compiled to a Python lambda over ``math``; the generated
source only ever contains numbers, the variable names, and whitelisted
``math`` functions.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Mapping as MappingType, Sequence

from .errors import (
    DomainViolation,
    ExprSyntaxError,
    InvalidParam,
    UnknownIdentifier,
)
from .mappings import Mapping, catalog, compose
from .numerics import INF, REALS, Interval, RealFn

# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Name:
    ident: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple


CONSTANTS = {"pi": math.pi, "e": math.e}

# name -> python source template for one argument
FUNCTIONS = {
    "sin": "math.sin({})",
    "cos": "math.cos({})",
    "tan": "math.tan({})",
    "ln": "math.log({})",
    "log10": "math.log10({})",
    "exp": "math.exp({})",
    "sqrt": "math.sqrt({})",
    "abs": "abs({})",
    "sinh": "math.sinh({})",
    "cosh": "math.cosh({})",
    "sign": "_sign({})",
}
# pow(a, b) is accepted as a spelling of a^b
_BINARY_FUNCTIONS = {"pow"}

_LN10 = math.log(10.0)


# ---------------------------------------------------------------------------
# tokens

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|&&|<=|>=|[-+*/^(),<>|])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tok = m.group()
            out.append(Token(kind, "^" if tok == "**" else tok, pos))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


_ATOM_START = ("number", "identifier", "'('", "'-'")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, *texts: str) -> bool:
        return self.tok.kind in ("op", "ident") and self.tok.text in texts

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind != "op":
            self.fail([f"'{text}'"])
        return self.advance()

    def fail(self, expected):
        t = self.tok
        what = "end of input" if t.kind == "end" else repr(t.text)
        raise ExprSyntaxError(f"unexpected {what}", t.pos, expected)

    def finish(self, expected=("operator", "end of input")):
        if self.tok.kind != "end":
            self.fail(expected)

    # grammar
    def expr(self):
        node = self.term()
        while self.at("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.at("*", "/"):
            op = self.advance().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        base = self.unary()
        if self.at("^"):
            self.advance()
            return BinOp("^", base, self.factor())
        return base

    def unary(self):
        if self.at("-"):
            self.advance()
            return Neg(self.unary())
        return self.atom()

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(float(t.text))
        if t.kind == "ident":
            self.advance()
            if not self.at("("):
                return Name(t.text)
            self.advance()
            args = [self.expr()]
            while self.at(","):
                self.advance()
                args.append(self.expr())
            self.expect(")")
            return self.call(t, args)
        if self.at("("):
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.fail(_ATOM_START)

    def call(self, t: Token, args):
        if t.text in _BINARY_FUNCTIONS:
            if len(args) != 2:
                raise ExprSyntaxError(f"{t.text} takes 2 arguments, got {len(args)}", t.pos)
            return BinOp("^", args[0], args[1])
        if t.text not in FUNCTIONS:
            raise UnknownIdentifier(
                f"unknown function {t.text!r} at position {t.pos}; "
                f"known: {', '.join(sorted(FUNCTIONS) + sorted(_BINARY_FUNCTIONS))}"
            )
        if len(args) != 1:
            raise ExprSyntaxError(f"{t.text} takes 1 argument, got {len(args)}", t.pos)
        return Call(t.text, (args[0],))


def parse_tree(text: str):
    p = _Parser(text)
    if p.tok.kind == "end":
        p.fail(_ATOM_START)
    node = p.expr()
    p.finish()
    return node


# ---------------------------------------------------------------------------
# pretty printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _fmt_num(v: float) -> str:
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def pretty(node) -> str:
    """Canonical text that parses back to an equivalent tree."""
    if isinstance(node, Num):
        return _fmt_num(node.value)
    if isinstance(node, Name):
        return node.ident
    if isinstance(node, Call):
        return f"{node.fn}({', '.join(pretty(a) for a in node.args)})"
    if isinstance(node, Neg):
        inner = pretty(node.arg)
        if isinstance(node.arg, (BinOp,)) or (isinstance(node.arg, Num) and node.arg.value < 0):
            inner = f"({inner})"
        return f"-{inner}"
    left, right = pretty(node.left), pretty(node.right)
    if node.op == "^":
        # the base is a unary: anything binary needs parentheses
        if isinstance(node.left, BinOp):
            left = f"({left})"
        if isinstance(node.right, BinOp) and node.right.op != "^":
            right = f"({right})"
        return f"{left}^{right}"
    prec = _PREC[node.op]
    if isinstance(node.left, BinOp) and node.left.op != "^" and _PREC[node.left.op] < prec:
        left = f"({left})"
    if isinstance(node.right, BinOp) and node.right.op != "^" and _PREC[node.right.op] <= prec:
        right = f"({right})"
    return f"{left} {node.op} {right}"


# ---------------------------------------------------------------------------
# constant folding builders used by the differentiator

def _num(node) -> float | None:
    return node.value if isinstance(node, Num) else None


def _fold(v: float):
    return Num(v) if math.isfinite(v) else None


def add(a, b):
    va, vb = _num(a), _num(b)
    if va == 0:
        return b
    if vb == 0:
        return a
    if va is not None and vb is not None and _fold(va + vb):
        return Num(va + vb)
    return BinOp("+", a, b)


def sub(a, b):
    va, vb = _num(a), _num(b)
    if vb == 0:
        return a
    if va == 0:
        return neg(b)
    if va is not None and vb is not None and _fold(va - vb):
        return Num(va - vb)
    return BinOp("-", a, b)


def neg(a):
    if isinstance(a, Num):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def mul(a, b):
    va, vb = _num(a), _num(b)
    if va == 0 or vb == 0:
        return Num(0.0)
    if va == 1:
        return b
    if vb == 1:
        return a
    if va == -1:
        return neg(b)
    if vb == -1:
        return neg(a)
    if va is not None and vb is not None and _fold(va * vb):
        return Num(va * vb)
    return BinOp("*", a, b)


def div(a, b):
    va, vb = _num(a), _num(b)
    if va == 0 and vb != 0:
        return Num(0.0)
    if vb == 1:
        return a
    if va is not None and vb not in (None, 0.0) and _fold(va / vb):
        return Num(va / vb)
    return BinOp("/", a, b)


def power(a, b):
    vb = _num(b)
    if vb == 0:
        return Num(1.0)
    if vb == 1:
        return a
    return BinOp("^", a, b)


def _depends(node, var: str) -> bool:
    if isinstance(node, Num):
        return False
    if isinstance(node, Name):
        return node.ident == var
    if isinstance(node, Neg):
        return _depends(node.arg, var)
    if isinstance(node, Call):
        return any(_depends(a, var) for a in node.args)
    return _depends(node.left, var) or _depends(node.right, var)


def _outer_rule(fn: str, u):
    """d/du of fn(u)."""
    return {
        "sin": lambda: Call("cos", (u,)),
        "cos": lambda: neg(Call("sin", (u,))),
        "tan": lambda: div(Num(1.0), power(Call("cos", (u,)), Num(2.0))),
        "ln": lambda: div(Num(1.0), u),
        "log10": lambda: div(Num(1.0), mul(u, Num(_LN10))),
        "exp": lambda: Call("exp", (u,)),
        "sqrt": lambda: div(Num(0.5), Call("sqrt", (u,))),
        "abs": lambda: Call("sign", (u,)),
        "sinh": lambda: Call("cosh", (u,)),
        "cosh": lambda: Call("sinh", (u,)),
        "sign": lambda: Num(0.0),
    }[fn]()


def differentiate(node, var: str = "x"):
    if not _depends(node, var):
        return Num(0.0)
    if isinstance(node, Name):
        return Num(1.0)
    if isinstance(node, Neg):
        return neg(differentiate(node.arg, var))
    if isinstance(node, Call):
        (u,) = node.args
        return mul(_outer_rule(node.fn, u), differentiate(u, var))
    a, b = node.left, node.right
    da, db = differentiate(a, var), differentiate(b, var)
    if node.op == "+":
        return add(da, db)
    if node.op == "-":
        return sub(da, db)
    if node.op == "*":
        return add(mul(da, b), mul(a, db))
    if node.op == "/":
        return div(sub(mul(da, b), mul(a, db)), power(b, Num(2.0)))
    # power
    if not _depends(b, var):
        c = _num(b)
        lowered = Num(c - 1.0) if c is not None else sub(b, Num(1.0))
        return mul(mul(b, power(a, lowered)), da)
    if not _depends(a, var):
        return mul(mul(node, Call("ln", (a,))), db)
    return mul(node, add(mul(db, Call("ln", (a,))), div(mul(b, da), a)))


# ---------------------------------------------------------------------------
# compilation


def _sign(v: float) -> float:
    return (v > 0) - (v < 0)


_NAMESPACE = {"__builtins__": {}, "math": math, "abs": abs, "_sign": _sign, "_pow": math.pow}


def _resolve_bindings(bindings: MappingType[str, float] | None, variables: Sequence[str]) -> dict:
    env = dict(CONSTANTS)
    for k, v in (bindings or {}).items():
        if k in FUNCTIONS or k in _BINARY_FUNCTIONS or k in variables:
            raise InvalidParam(f"cannot bind {k!r}: it names a function or variable")
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", k):
            raise InvalidParam(f"invalid binding name {k!r}")
        env[k] = float(v)
    return env


def _source(node, env: dict, variables: Sequence[str]) -> str:
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Name):
        if node.ident in variables:
            return node.ident
        if node.ident in env:
            return f"({env[node.ident]!r})"
        raise UnknownIdentifier(
            f"unknown identifier {node.ident!r}; variables: {', '.join(variables)}; "
            f"constants: {', '.join(sorted(env))}"
        )
    if isinstance(node, Neg):
        return f"(-{_source(node.arg, env, variables)})"
    if isinstance(node, Call):
        return FUNCTIONS[node.fn].format(_source(node.args[0], env, variables))
    left, right = _source(node.left, env, variables), _source(node.right, env, variables)
    if node.op == "^":
        return f"_pow({left}, {right})"
    return f"({left} {node.op} {right})"


def compile_tree(node, bindings=None, variables: Sequence[str] = ("x",)) -> Callable:
    env = _resolve_bindings(bindings, variables)
    src = f"lambda {', '.join(variables)}: {_source(node, env, variables)}"
    return eval(src, dict(_NAMESPACE))  # noqa: S307 - source built from a validated tree


# ---------------------------------------------------------------------------
# domain inference


def _affine_coeffs(node, env: dict, var: str):
    """(a, b) when node == a*var + b with constant a, b; otherwise None."""
    if isinstance(node, Num):
        return 0.0, node.value
    if isinstance(node, Name):
        if node.ident == var:
            return 1.0, 0.0
        return (0.0, env[node.ident]) if node.ident in env else None
    if isinstance(node, Neg):
        c = _affine_coeffs(node.arg, env, var)
        return None if c is None else (-c[0], -c[1])
    if isinstance(node, Call):
        return None
    l, r = _affine_coeffs(node.left, env, var), _affine_coeffs(node.right, env, var)
    if l is None or r is None:
        return None
    if node.op == "+":
        return l[0] + r[0], l[1] + r[1]
    if node.op == "-":
        return l[0] - r[0], l[1] - r[1]
    if node.op == "*":
        if l[0] == 0:
            return l[1] * r[0], l[1] * r[1]
        if r[0] == 0:
            return r[1] * l[0], r[1] * l[1]
        return None
    if node.op == "/" and r[0] == 0 and r[1] != 0:
        return l[0] / r[1], l[1] / r[1]
    return None


def _constant_value(node, env):
    c = _affine_coeffs(node, env, "\0")
    return c[1] if c is not None and c[0] == 0 else None


def _constraints(node, env, var, out):
    if isinstance(node, (Num, Name)):
        return
    if isinstance(node, Neg):
        _constraints(node.arg, env, var, out)
        return
    if isinstance(node, Call):
        (u,) = node.args
        _constraints(u, env, var, out)
        kind = {"ln": "pos", "log10": "pos", "sqrt": "nonneg"}.get(node.fn)
        if kind:
            out.append((kind, u))
        return
    _constraints(node.left, env, var, out)
    _constraints(node.right, env, var, out)
    if node.op == "/":
        out.append(("nonzero", node.right))
    elif node.op == "^":
        c = _constant_value(node.right, env)
        if c is None:
            out.append(("pos", node.left))
        elif not float(c).is_integer():
            out.append(("nonneg" if c > 0 else "pos", node.left))
        elif c < 0:
            out.append(("nonzero", node.left))


@dataclass(frozen=True)
class DomainInfo:
    interval: Interval | None
    excluded: tuple[float, ...] = ()


def infer_domain(node, bindings=None, var: str = "x") -> DomainInfo:
    """Largest interval allowed by affine arguments of ln/log10/sqrt/^ and denominators.

    Constraints on non-affine sub-expressions are not inferred; they surface
    at evaluation time as domain errors.
    """
    env = _resolve_bindings(bindings, (var,))
    cons: list = []
    _constraints(node, env, var, cons)
    iv: Interval | None = REALS
    excluded = []
    for kind, arg in cons:
        coeffs = _affine_coeffs(arg, env, var)
        if coeffs is None:
            continue
        a, b = coeffs
        if a == 0:
            ok = {"pos": b > 0, "nonneg": b >= 0, "nonzero": b != 0}[kind]
            if not ok:
                return DomainInfo(None)
            continue
        root = -b / a + 0.0
        if kind == "nonzero":
            excluded.append(root)
            continue
        closed = kind == "nonneg"
        part = Interval(root, INF, not closed, True) if a > 0 else Interval(-INF, root, True, not closed)
        iv = iv.intersect(part) if iv is not None else None
        if iv is None:
            return DomainInfo(None)
    return DomainInfo(iv, tuple(sorted(set(excluded))))


def _apply_exclusions(iv: Interval, excluded: Sequence[float]) -> Interval:
    lo_open = iv.lo_open or iv.lo in excluded
    hi_open = iv.hi_open or iv.hi in excluded
    return Interval(iv.lo, iv.hi, lo_open, hi_open)


# ---------------------------------------------------------------------------
# public entry points


@dataclass(frozen=True)
class Expression:
    text: str
    tree: object
    fn: RealFn
    derivative_tree: object
    excluded: tuple[float, ...] = field(default=())

    def pretty(self) -> str:
        return pretty(self.tree)


def parse_function(
    text: str, bindings=None, domain: Interval | None = None, var: str = "x"
) -> Expression:
    tree = parse_tree(text)
    evaluator = compile_tree(tree, bindings, (var,))
    dtree = differentiate(tree, var)
    derivative = compile_tree(dtree, bindings, (var,))
    info = infer_domain(tree, bindings, var)
    iv = info.interval
    if iv is not None and domain is not None:
        iv = iv.intersect(domain)
    if iv is None:
        raise DomainViolation(f"{text!r} is defined nowhere on {domain or REALS}")
    iv = _apply_exclusions(iv, info.excluded)
    fn = RealFn(evaluator, iv, derivative, text.strip())
    return Expression(text, tree, fn, dtree, info.excluded)


def parse_expr(text: str, bindings=None, domain: Interval | None = None) -> RealFn:
    """Parse an expression in ``x`` into a RealFn with a symbolic derivative."""
    return parse_function(text, bindings, domain).fn


def parse_constant(text: str, bindings=None) -> float:
    """A variable-free expression; ``inf``/``-inf`` are accepted as well."""
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity", "+infinity"):
        return INF
    if t in ("-inf", "-infinity"):
        return -INF
    tree = parse_tree(text)
    value = compile_tree(tree, bindings, ())()
    if isinstance(value, complex):
        raise DomainViolation(f"{text!r} is not real")
    return float(value)


def parse_mapping(text: str, bindings=None) -> Mapping:
    """``name``, ``name(p, ...)``, or a chain ``a|b|c`` applied left to right."""
    p = _Parser(text)
    result = None
    while True:
        t = p.tok
        if t.kind != "ident":
            p.fail(["mapping name"])
        p.advance()
        params = []
        if p.at("("):
            p.advance()
            params.append(p.expr())
            while p.at(","):
                p.advance()
                params.append(p.expr())
            p.expect(")")
        values = [float(compile_tree(q, bindings, ())()) for q in params]
        m = catalog(t.text, values)
        result = m if result is None else compose(m, result)
        if p.at("|"):
            p.advance()
            continue
        p.finish(("'|'", "end of input"))
        return result


_RELOPS = {"<": "<", "<=": "<=", ">": ">", ">=": ">="}


def parse_predicate(text: str, bindings=None, variables: Sequence[str] = ("x", "y")) -> Callable[..., bool]:
    """Comparisons such as ``x + y < 2`` joined by ``and``, ``&&`` or ``,``; chains like ``0 < x < 1`` work."""
    p = _Parser(text)
    env = _resolve_bindings(bindings, variables)
    clauses = []
    while True:
        parts = [_source(p.expr(), env, variables)]
        if not p.at(*_RELOPS):
            p.fail(["comparison operator"])
        while p.at(*_RELOPS):
            parts.append(_RELOPS[p.advance().text])
            parts.append(_source(p.expr(), env, variables))
        clauses.append("(" + " ".join(parts) + ")")
        if p.at("and", "&&", ","):
            p.advance()
            continue
        p.finish(("'and'", "comparison operator", "end of input"))
        break
    src = f"lambda {', '.join(variables)}: {' and '.join(clauses)}"
    compiled = eval(src, dict(_NAMESPACE))  # noqa: S307 - source built from a validated tree

    def member(*args):
        try:
            return bool(compiled(*args))
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise DomainViolation(f"predicate undefined at {args}: {exc}") from None

    return member


__all__ = [
    "parse_tree",
    "parse_expr",
    "parse_function",
    "parse_constant",
    "parse_mapping",
    "parse_predicate",
    "pretty",
    "differentiate",
    "compile_tree",
    "infer_domain",
    "tokenize",
    "Expression",
    "DomainInfo",
    "FUNCTIONS",
    "CONSTANTS",
]
