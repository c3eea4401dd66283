import math

import pytest
from hypothesis import given, settings, strategies as st

from isoframe.differential import elasticity
from isoframe.errors import DomainViolation, RangeViolation
from isoframe.integral import elastic_integral, geometric_integral, iso_integral_1, iso_integral_2
from isoframe.mappings import catalog, function_mapping
from isoframe.numerics import Interval, RealFn, integrate

ID, LN, EXP = catalog("id"), catalog("ln"), catalog("exp")
X = RealFn(lambda x: x, derivative=lambda x: 1.0)


def test_type_one_examples():
    assert iso_integral_1(X, Interval(0.0, 1.0, True), LN) == pytest.approx(1 / math.e, rel=1e-9)
    assert iso_integral_1(X, (0.0, 2.0), ID) == pytest.approx(2.0)
    sin = RealFn(math.sin)
    got = geometric_integral(sin, Interval(0.0, math.pi, True, True))
    assert got == pytest.approx(2 ** -math.pi, rel=1e-9)


def test_type_two_examples():
    f = RealFn(lambda x: x / (x - 1))
    assert iso_integral_2(f, (2.0, 3.0), LN) == pytest.approx(2.0, rel=1e-12)
    assert iso_integral_2(RealFn(math.cos), (0.0, 1.0), ID) == pytest.approx(math.sin(1.0))
    assert iso_integral_2(X, (1.0, 2.0), EXP) == pytest.approx(2.0, rel=1e-12)


def test_type_two_numeric_generator_uses_image_space():
    g = function_mapping(RealFn(math.exp, Interval(0.0, 3.0)), name="exp-numeric")
    assert not g.analytic
    assert iso_integral_2(X, (1.0, 2.0), g) == pytest.approx(2.0, rel=1e-9)


def test_type_two_orientation():
    recip = catalog("recip")
    # ∫ x² d(1/x) over [1,2] is -(2-1) = -1; recip's image excludes it
    with pytest.raises(RangeViolation):
        iso_integral_2(RealFn(lambda x: x * x), (1.0, 2.0), recip)
    neg = catalog("neg")
    # g decreasing: raw integral is ∫ f·(-1) dx, then mapped back through -u
    assert iso_integral_2(X, (0.0, 2.0), neg) == pytest.approx(2.0)


def test_elastic_integral_examples():
    assert elastic_integral(RealFn(lambda x: x / (x - 1)), (2.0, 3.0)) == pytest.approx(2.0, rel=1e-9)
    p, a, b = 1.7, 0.5, 3.0
    assert elastic_integral(RealFn(lambda x: p), (a, b)) == pytest.approx((b / a) ** p, rel=1e-12)
    assert elastic_integral(X, (1.0, 2.0)) == pytest.approx(math.e, rel=1e-12)
    with pytest.raises(DomainViolation):
        elastic_integral(X, (-1.0, 2.0))


def test_elastic_matches_type_two_with_ln():
    f = RealFn(lambda x: math.sin(x) + 2)
    assert elastic_integral(f, (0.5, 4.0)) == pytest.approx(iso_integral_2(f, (0.5, 4.0), LN), rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(0.1, 3.0), st.sampled_from(range(4)))
def test_multiplying_property(a, width, which):
    b = a + width
    family = [
        (lambda x: x**2 + 1, lambda x: 2 * x),
        (lambda x: math.exp(math.sin(x)), lambda x: math.cos(x) * math.exp(math.sin(x))),
        (lambda x: 3 * x**0.7, lambda x: 2.1 * x**-0.3),
        (lambda x: math.cosh(x), math.sinh),
    ]
    fn, d = family[which]
    F = RealFn(fn, derivative=d)
    elast = RealFn(lambda x: elasticity(F, x))
    assert elastic_integral(elast, (a, b)) == pytest.approx(F(b) / F(a), rel=1e-7)


def test_identity_mappings_reduce_to_plain_integral():
    f = RealFn(lambda x: x**3 - x)
    want = integrate(f, (-1.0, 2.5))
    assert iso_integral_1(f, (-1.0, 2.5), ID) == pytest.approx(want, abs=1e-12)
    assert iso_integral_2(f, (-1.0, 2.5), ID) == pytest.approx(want, abs=1e-12)
