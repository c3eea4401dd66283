import math
import random

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from isoframe.errors import (
    DivergentImproper,
    DomainViolation,
    InvalidParam,
    NonMonotoneDetected,
    NotBracketed,
)
from isoframe.mappings import CATALOG_NAMES, catalog
from isoframe.numerics import (
    INF,
    Interval,
    QuadConfig,
    RealFn,
    fd_derivative,
    integrate,
    invert_monotone,
    monotonicity,
)


class TestInterval:
    def test_infinite_ends_are_open(self):
        iv = Interval(0.0, INF, False, False)
        assert iv.hi_open and not iv.lo_open

    def test_rejects_reversed(self):
        with pytest.raises(InvalidParam):
            Interval(2.0, 1.0)

    def test_degenerate_point(self):
        iv = Interval(1.0, 1.0)
        assert iv.is_degenerate and 1.0 in iv

    def test_contains_respects_openness(self):
        iv = Interval(0.0, 1.0, True, False)
        assert 0.0 not in iv and 1.0 in iv and 0.5 in iv

    def test_intersect(self):
        a, b = Interval(0.0, 2.0), Interval(1.0, 3.0, True, True)
        assert a.intersect(b) == Interval(1.0, 2.0, True, False)
        assert Interval(0, 1).intersect(Interval(2, 3)) is None

    def test_window_of_half_line(self):
        lo, hi = Interval(1.0, INF, True, True).window()
        assert lo == 1.0 and hi == 21.0

    def test_grid_stays_inside(self):
        iv = Interval(0.0, 1.0, True, True)
        pts = iv.grid(50)
        assert len(pts) == 50 and all(p in iv for p in pts)
        assert pts == sorted(pts)


class TestIntegrate:
    def test_polynomial(self):
        assert integrate(lambda x: x, (0.0, 1.0)) == pytest.approx(0.5, abs=1e-14)

    def test_log_sin_improper(self):
        iv = Interval(0.0, math.pi, True, True)
        assert integrate(math.log, Interval(0, 1, True)) == pytest.approx(-1.0, abs=1e-9)
        got = integrate(lambda x: math.log(math.sin(x)), iv)
        assert got == pytest.approx(-math.pi * math.log(2.0), abs=1e-9)

    def test_elasticity_integrand(self):
        got = integrate(lambda x: (x / (x - 1)) / x, (2.0, 3.0))
        assert got == pytest.approx(math.log(2.0), rel=1e-12)

    def test_endpoint_singularity(self):
        got = integrate(lambda x: 1 / math.sqrt(x), Interval(0.0, 1.0, True, False))
        assert got == pytest.approx(2.0, abs=1e-8)

    def test_infinite_range(self):
        got = integrate(lambda x: math.exp(-x * x), Interval.reals())
        assert got == pytest.approx(math.sqrt(math.pi), rel=1e-9)
        got = integrate(lambda x: math.exp(-x), Interval(0.0, INF, False, True))
        assert got == pytest.approx(1.0, rel=1e-9)
        got = integrate(lambda x: math.exp(x), Interval(-INF, 0.0, True, False))
        assert got == pytest.approx(1.0, rel=1e-9)

    def test_divergent(self):
        with pytest.raises(DivergentImproper):
            integrate(lambda x: 1 / x, Interval(0.0, 1.0, True, False))

    def test_interior_failure(self):
        with pytest.raises(DomainViolation):
            integrate(lambda x: math.log(x), (-1.0, 1.0))

    def test_against_mpmath(self):
        for f, mf, a, b in [
            (math.atan, mpmath.atan, 0.0, 3.0),
            (lambda x: math.exp(math.sin(x)), lambda x: mpmath.exp(mpmath.sin(x)), -1.0, 4.0),
            (lambda x: 1 / (1 + x**4), lambda x: 1 / (1 + x**4), 0.0, 10.0),
        ]:
            assert integrate(f, (a, b)) == pytest.approx(float(mpmath.quad(mf, [a, b])), rel=1e-11)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(-5, 5), st.floats(-5, 5))
    def test_orientation_is_exact_antisymmetry(self, a, b):
        f = lambda x: math.cos(x) + x * x  # noqa: E731
        assert integrate(f, (a, b)) == -integrate(f, (b, a))

    def test_config_validation(self):
        with pytest.raises(InvalidParam):
            QuadConfig(abs_tol=0)
        with pytest.raises(InvalidParam):
            QuadConfig(max_depth=0)
        assert QuadConfig().shrink_sequence()[0] == 1e-2
        assert len(QuadConfig().shrink_sequence()) == 11


class TestInvertMonotone:
    def test_exp(self):
        assert invert_monotone(math.exp, math.e, (0.0, 3.0)) == pytest.approx(1.0, abs=1e-15)

    def test_cube(self):
        assert invert_monotone(lambda x: x**3, 8.0, (0.0, 3.0)) == pytest.approx(2.0, abs=1e-15)

    def test_against_bisection_oracle(self):
        f = lambda x: x + math.sin(x)  # noqa: E731
        lo, hi = 0.0, 3.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            lo, hi = (mid, hi) if f(mid) < 2.0 else (lo, mid)
        assert invert_monotone(f, 2.0, (0.0, 3.0)) == pytest.approx(0.5 * (lo + hi), abs=1e-12)

    def test_not_bracketed(self):
        with pytest.raises(NotBracketed):
            invert_monotone(math.exp, 100.0, (0.0, 1.0))

    def test_non_monotone(self):
        with pytest.raises(NonMonotoneDetected):
            invert_monotone(math.sin, 0.5, (0.0, 3.0))

    def test_round_trip_catalog(self):
        rng = random.Random(3)
        for name in CATALOG_NAMES:
            if name in ("pow", "affine"):
                continue
            m = catalog(name)
            lo, hi = m.domain.window()
            lo, hi = max(lo, -8.0), min(hi, 8.0)
            for _ in range(100):
                x = rng.uniform(lo, hi)
                if x not in m.domain:
                    continue
                a, b = max(lo, x - 1.0), min(hi, x + 1.0)
                a = a if a in m.domain else x
                b = b if b in m.domain else x
                if a == b:
                    continue
                got = invert_monotone(m.forward, m(x), (a, b))
                assert got == pytest.approx(x, abs=1e-9 * max(1.0, abs(x))), name


class TestFiniteDifference:
    def test_examples(self):
        assert abs(fd_derivative(lambda x: x * x, 3.0) - 6.0) <= 1e-8
        assert fd_derivative(math.log, 2.0) == pytest.approx(0.5, rel=1e-9)
        assert fd_derivative(math.exp, 1.0) == pytest.approx(math.e, rel=1e-9)

    def test_one_sided_at_closed_end(self):
        f = RealFn(math.sqrt, Interval(1.0, 4.0))
        assert f.deriv(1.0) == pytest.approx(0.5, rel=1e-7)
        assert f.deriv(4.0) == pytest.approx(0.25, rel=1e-7)

    def test_matches_analytic_catalog_derivatives(self):
        rng = random.Random(5)
        for name in CATALOG_NAMES:
            m = catalog(name, [2] if name == "pow" else [3, 1] if name == "affine" else [])
            lo, hi = m.domain.window()
            lo, hi = max(lo, -5.0), min(hi, 5.0)
            for _ in range(100):
                x = rng.uniform(lo, hi)
                if x not in m.domain or (lo == 0 and x < 1e-3):
                    continue
                want = m.deriv(x)
                got = fd_derivative(m.forward, x)
                assert got == pytest.approx(want, rel=1e-7, abs=1e-9), (name, x)


class TestMonotonicity:
    def test_classes(self):
        assert monotonicity([1, 2, 3]) == "increasing"
        assert monotonicity([3, 2, 1]) == "decreasing"
        assert monotonicity([1, 1, 1]) == "constant"
        assert monotonicity([1, 2, 1]) == "indeterminate"
