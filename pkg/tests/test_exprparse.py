import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from isoframe.errors import DomainViolation, ExprSyntaxError, InvalidParam, UnknownIdentifier, UnknownMapping
from isoframe.exprparse import (
    BinOp,
    Call,
    Name,
    Neg,
    Num,
    compile_tree,
    differentiate,
    infer_domain,
    parse_constant,
    parse_expr,
    parse_function,
    parse_mapping,
    parse_predicate,
    parse_tree,
    pretty,
)
from isoframe.numerics import INF, Interval, fd_derivative


class TestParseExpr:
    def test_polynomial_and_derivative(self):
        f = parse_expr("x^2 + 1")
        assert f(3.0) == 10.0 and f.deriv(3.0) == 6.0
        assert f.domain == Interval.reals()

    def test_sinc_excludes_zero(self):
        f = parse_function("sin(x)/x")
        assert f.excluded == (0.0,)
        assert f.fn(0.5) == pytest.approx(math.sin(0.5) / 0.5)
        g = parse_expr("sin(x)/x", domain=Interval(0.0, 2.0))
        assert g.domain == Interval(0.0, 2.0, True, False)

    def test_bindings(self):
        f = parse_expr("k*(x-c)", {"k": 1, "c": 1})
        assert f(3.0) == 2.0 and f.deriv(3.0) == 1.0
        with pytest.raises(UnknownIdentifier):
            parse_expr("k*x")

    def test_precedence(self):
        assert parse_expr("2+3*x^2")(2.0) == 14.0
        assert parse_expr("2^3^2")(0.0) == 512.0
        assert parse_expr("-x^2")(3.0) == 9.0
        assert parse_expr("-(x^2)")(3.0) == -9.0
        assert parse_expr("x**2")(3.0) == 9.0
        assert parse_expr("pow(x, 3)")(2.0) == 8.0
        assert parse_expr("8/2/2")(0.0) == 2.0
        assert parse_expr("1-2-3")(0.0) == -4.0

    def test_constants_and_functions(self):
        assert parse_expr("pi + e")(0.0) == pytest.approx(math.pi + math.e)
        for name, fn in [("sin", math.sin), ("cos", math.cos), ("tan", math.tan), ("exp", math.exp),
                         ("sinh", math.sinh), ("cosh", math.cosh), ("abs", abs)]:
            assert parse_expr(f"{name}(x)")(0.7) == pytest.approx(fn(0.7), rel=1e-15)
        assert parse_expr("ln(x)")(2.0) == math.log(2.0)
        assert parse_expr("log10(x)")(100.0) == pytest.approx(2.0)
        assert parse_expr("sqrt(x)")(4.0) == 2.0

    def test_inferred_domains(self):
        assert parse_expr("ln(x)").domain == Interval(0.0, INF, True, True)
        assert parse_expr("sqrt(2*x - 2)").domain == Interval(1.0, INF, False, True)
        assert parse_expr("ln(3 - x)").domain == Interval(-INF, 3.0, True, True)
        assert parse_expr("x^0.5").domain == Interval(0.0, INF, False, True)
        assert parse_expr("ln(x)", domain=Interval(-1.0, 2.0)).domain == Interval(0.0, 2.0, True, False)
        with pytest.raises(DomainViolation):
            parse_expr("ln(x)", domain=Interval(-3.0, -1.0))
        info = infer_domain(parse_tree("1/(x-1) + 1/(x+2)"))
        assert info.excluded == (-2.0, 1.0)

    def test_evaluation_errors_surface_as_domain_violations(self):
        f = parse_expr("ln(sin(x))")
        with pytest.raises(DomainViolation):
            f(4.0)

    def test_symbolic_derivatives_match_finite_differences(self):
        rng = random.Random(1)
        cases = ["x^3 - 2*x", "sin(x)*exp(x)", "ln(x)/x", "sqrt(x)*cosh(x)", "tan(x)^2",
                 "x^x", "2^x", "log10(x)", "abs(x)*x", "sinh(x)/(1+x^2)", "cos(x^2)"]
        for text in cases:
            f = parse_expr(text, domain=Interval(0.2, 1.4))
            for _ in range(20):
                x = rng.uniform(0.25, 1.35)
                assert f.deriv(x) == pytest.approx(fd_derivative(f, x), rel=1e-7, abs=1e-9), text

    def test_derivative_folds_constants(self):
        assert pretty(differentiate(parse_tree("3*x + 5"))) == "3"
        assert pretty(differentiate(parse_tree("x^2"))) == "2 * x"
        assert differentiate(parse_tree("pi")) == Num(0.0)


NEGATIVE_CORPUS = [
    ("", 0),
    ("(x + 1", 6),
    ("x + 1)", 5),
    ("x + * 2", 4),
    ("x * / 2", 4),
    ("sin()", 4),
    ("sin(x,)", 6),
    ("pow(x)", 0),
    ("2 x", 2),
    ("x ^", 3),
    ("(", 1),
    (")", 0),
    ("x $ 2", 2),
    ("sin(x", 5),
    ("1..2", 2),
]


@pytest.mark.parametrize("text,pos", NEGATIVE_CORPUS)
def test_negative_corpus(text, pos):
    with pytest.raises(ExprSyntaxError) as info:
        parse_expr(text)
    assert info.value.position == pos
    assert f"position {pos}" in str(info.value)


def test_unknown_identifiers():
    with pytest.raises(UnknownIdentifier):
        parse_expr("foo(x)")
    with pytest.raises(UnknownIdentifier):
        parse_expr("y + 1")


def test_expected_tokens_are_reported():
    with pytest.raises(ExprSyntaxError) as info:
        parse_expr("x +")
    assert info.value.expected
    assert "expected" in str(info.value)


# ---------------------------------------------------------------------------
# round trip

LEAVES = st.one_of(
    st.builds(Num, st.floats(-5, 5, allow_nan=False).map(lambda v: round(v, 3))),
    st.just(Name("x")),
    st.sampled_from([Name("pi"), Name("e")]),
)


def extend(children):
    return st.one_of(
        st.builds(Neg, children),
        st.builds(BinOp, st.sampled_from(["+", "-", "*", "/", "^"]), children, children),
        st.builds(lambda fn, a: Call(fn, (a,)),
                  st.sampled_from(["sin", "cos", "exp", "abs", "sqrt", "ln", "tan", "sinh"]), children),
    )


TREES = st.recursive(LEAVES, extend, max_leaves=12)


def _eval(fn, x):
    try:
        v = fn(x)
    except (ValueError, ZeroDivisionError, OverflowError):
        return None
    if isinstance(v, complex) or not math.isfinite(v):
        return None
    return v


@settings(max_examples=300, deadline=None)
@given(TREES)
def test_pretty_round_trip(tree):
    text = pretty(tree)
    back = parse_tree(text)
    f, g = compile_tree(tree), compile_tree(back)
    rng = random.Random(text)
    for _ in range(100):
        x = rng.uniform(-3, 3)
        a, b = _eval(f, x), _eval(g, x)
        assert (a is None) == (b is None), (text, x)
        if a is not None:
            assert b == pytest.approx(a, rel=1e-12, abs=1e-12), (text, x)
    # parsed trees are a fixed point of print-then-parse
    assert parse_tree(pretty(back)) == back


def test_pretty_examples():
    for text in ["x^2 + 1", "-x^2", "(x - 1)/(x + 1)", "2^(3^x)", "sin(x)*cos(x)", "-(x + 1)"]:
        t = parse_tree(text)
        assert parse_tree(pretty(t)) == t


# ---------------------------------------------------------------------------
# constants, mappings, predicates


def test_parse_constant():
    assert parse_constant("2*pi") == pytest.approx(2 * math.pi)
    assert parse_constant("-inf") == -INF and parse_constant("inf") == INF
    assert parse_constant("k/2", {"k": 3}) == 1.5
    with pytest.raises(UnknownIdentifier):
        parse_constant("x + 1")


class TestParseMapping:
    def test_catalog_lookup(self):
        ln = parse_mapping("ln")
        assert ln.name == "ln" and ln(math.e) == pytest.approx(1.0)
        sq = parse_mapping("pow(2)")
        assert sq.domain == Interval(0.0, INF, False, True)
        assert parse_mapping("pow(3)").domain == Interval.reals()

    def test_chain(self):
        m = parse_mapping("affine(2,1)|ln")
        assert m(1.0) == pytest.approx(math.log(3.0))
        assert m.inverse(math.log(3.0)) == pytest.approx(1.0)
        assert m.domain == Interval(-0.5, INF, True, True)

    def test_parameter_expressions(self):
        m = parse_mapping("affine(k, -1/2)", {"k": 4})
        assert m(1.0) == 3.5

    def test_errors(self):
        with pytest.raises(UnknownMapping):
            parse_mapping("nope")
        with pytest.raises(InvalidParam):
            parse_mapping("pow(0)")
        with pytest.raises(ExprSyntaxError):
            parse_mapping("ln|")
        with pytest.raises(ExprSyntaxError):
            parse_mapping("affine(2,")


class TestParsePredicate:
    def test_comparisons(self):
        p = parse_predicate("x + y < 2 and x > 0 and y > 0")
        assert p(0.5, 0.5) and not p(1.5, 1.0) and not p(-0.1, 0.1)
        chain = parse_predicate("0 < x < 1 && y >= x")
        assert chain(0.5, 0.5) and not chain(1.5, 2.0)
        assert parse_predicate("x > 1, y <= 2")(2.0, 2.0)

    def test_one_dimensional(self):
        p = parse_predicate("1 <= x <= 2", variables=("x",))
        assert p(1.5) and not p(2.5)

    def test_domain_errors(self):
        p = parse_predicate("ln(x) > 0", variables=("x",))
        with pytest.raises(DomainViolation):
            p(-1.0)

    def test_syntax(self):
        with pytest.raises(ExprSyntaxError):
            parse_predicate("x + y")
        with pytest.raises(ExprSyntaxError):
            parse_predicate("x < 1 and")
