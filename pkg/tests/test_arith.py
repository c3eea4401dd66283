import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from isoframe.arith import iso_add, iso_div1, iso_div2, iso_mul, iso_sub
from isoframe.errors import DivisorZero, DomainViolation, InvalidParam, RangeViolation
from isoframe.mappings import catalog

LN, SQ, RECIP, DB, ID = (catalog("ln"), catalog("pow", [2]), catalog("recip"), catalog("db"),
                         catalog("id"))


def test_add_examples():
    assert iso_add([1, 2], SQ) == pytest.approx(math.sqrt(5), abs=1e-12)
    assert iso_add([2, 2], RECIP) == pytest.approx(1.0)
    assert iso_add([60, 60], DB) == pytest.approx(10 * math.log10(2e6), abs=1e-9)


def test_sub_examples():
    assert iso_sub(6, [3], LN) == pytest.approx(2.0)
    assert iso_sub(math.sqrt(5), [2], SQ) == pytest.approx(1.0)
    assert iso_sub(10 * math.log10(2e6), [60], DB) == pytest.approx(60.0, abs=1e-9)


def test_mul_and_div():
    assert iso_mul(2, 3, LN) == pytest.approx(8.0)
    assert iso_mul(9, 0.5, LN) == pytest.approx(3.0)
    assert iso_mul(1.7, 1, RECIP) == pytest.approx(1.7)
    assert iso_div1(8, 3, LN) == pytest.approx(2.0)
    assert iso_div1(16, 2, SQ) == pytest.approx(math.sqrt(128))
    assert iso_div2(8, 2, LN) == pytest.approx(3.0)
    assert iso_div2(9, 3, SQ) == pytest.approx(9.0)
    assert iso_div2(5.0, 5.0, RECIP) == 1.0


def test_errors():
    with pytest.raises(DivisorZero):
        iso_div1(2, 0, LN)
    with pytest.raises(DivisorZero):
        iso_div2(2, 1, LN)
    with pytest.raises(RangeViolation):
        iso_sub(1, [2], SQ)
    with pytest.raises(DomainViolation):
        iso_add([-1, 2], LN)
    with pytest.raises(InvalidParam):
        iso_add([1], LN)


POSITIVE_MAPS = ["ln", "recip", "exp", "sinh", "cube", "log10", "id"]


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(POSITIVE_MAPS), st.floats(0.1, 5), st.floats(0.1, 5))
def test_isomorphism_law_and_inverse(name, a, b):
    g = catalog(name)
    try:
        s = iso_add([a, b], g)
    except RangeViolation:
        assume(False)
    assert g(s) == pytest.approx(g(a) + g(b), rel=1e-9, abs=1e-9)
    assert iso_sub(s, [b], g) == pytest.approx(a, rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(["ln", "exp", "sinh", "cube", "id"]),
       st.floats(0.1, 3), st.floats(0.1, 3), st.floats(0.1, 3))
def test_commutative_associative(name, a, b, c):
    g = catalog(name)
    ab = iso_add([a, b], g)
    assert ab == pytest.approx(iso_add([b, a], g), rel=1e-12)
    left = iso_add([ab, c], g)
    right = iso_add([a, iso_add([b, c], g)], g)
    assert left == pytest.approx(right, rel=1e-9)
    assert left == pytest.approx(iso_add([a, b, c], g), rel=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(-3, 3).filter(lambda t: abs(t) > 1e-3))
def test_identity_generator_is_plain_arithmetic(a, b, t):
    assert iso_add([a, b], ID) == a + b
    assert iso_sub(a, [b], ID) == a - b
    assert iso_mul(a, t, ID) == a * t
    assert iso_div1(a, t, ID) == a / t
