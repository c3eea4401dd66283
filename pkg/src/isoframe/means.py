"""Isomorphic means of numbers and of functions, plus related bivariate means."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    DegenerateFrame,
    DivergentImproper,
    DomainViolation,
    InvalidParam,
    NoRoot,
    NotBracketed,
    NotInvertible,
    RangeViolation,
    SingularGenerator,
)
from .mappings import Frame2D, Mapping
from .numerics import (
    EVAL_FAILURES,
    Interval,
    QuadConfig,
    RealFn,
    integrate,
    invert_monotone,
    monotonicity,
    oriented_interval,
)

LE, GE, EQ, INDETERMINATE = "<=", ">=", "=", "indeterminate"


@dataclass(frozen=True)
class Weights:
    """Positive weights, normalised to sum to one on construction."""

    p: tuple[float, ...]

    def __post_init__(self):
        p = tuple(float(v) for v in self.p)
        if not p or any(not (v > 0 and math.isfinite(v)) for v in p):
            raise InvalidParam("weights must be positive finite numbers")
        total = math.fsum(p)
        object.__setattr__(self, "p", tuple(v / total for v in p))

    @classmethod
    def equal(cls, n: int) -> Weights:
        return cls((1.0,) * n)

    def __len__(self):
        return len(self.p)


class MeanClassTag(enum.Enum):
    NUMBERS = "Numbers"
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"
    VI = "VI"
    VII = "VII"
    COMPOSITE_V = "CompositeV"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class FunctionMean:
    value: float
    tag: MeanClassTag
    generalized: bool = False
    outside_range: bool = False
    improper: bool = False

    def __float__(self):
        return self.value


def mean_numbers(xs: Sequence[float], w, g: Mapping) -> float:
    """Weighted isomorphic mean g⁻¹(Σ pᵢ g(xᵢ)); ``w=None`` means equal weights."""
    if len(xs) < 2:
        raise InvalidParam("a mean needs at least two numbers")
    if w is None:
        w = Weights.equal(len(xs))
    elif not isinstance(w, Weights):
        w = Weights(tuple(w))
    if len(w) != len(xs):
        raise InvalidParam(f"{len(w)} weights given for {len(xs)} numbers")
    s = math.fsum(p * g(x) for p, x in zip(w.p, xs))
    if not g.codomain.contains(s):
        raise RangeViolation(f"weighted image sum {s!r} is outside {g.codomain}")
    return g.inverse(s)


# ---------------------------------------------------------------------------
# class detection


def _affine_on(m: Mapping, points: Sequence[float]) -> bool:
    if m.affine:
        return True
    pts = [p for p in points if m.domain.contains(p)]
    if len(pts) < 3:
        return False
    try:
        ds = [m.deriv(p) for p in pts]
    except EVAL_FAILURES + (DomainViolation,):
        return False
    scale = max(abs(d) for d in ds)
    return scale > 0 and max(ds) - min(ds) <= 1e-9 * scale


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= 1e-9 * max(1.0, abs(a), abs(b))


def mean_class(f: RealFn, fr: Frame2D, iv: Interval) -> MeanClassTag:
    """Sub-class of the mean of ``f`` in ``fr`` read off the mappings (sampled)."""
    g, h = fr.g, fr.h
    xs = iv.grid(9) if not iv.is_degenerate else [iv.lo]
    ys = [f(x) for x in xs]
    g_affine, h_affine = _affine_on(g, xs), _affine_on(h, ys)
    if g_affine and h_affine:
        return MeanClassTag.VI
    if g_affine:
        return MeanClassTag.I
    if h_affine:
        return MeanClassTag.II
    try:
        if all(_close(g(x), y) and _close(h(y), x) for x, y in zip(xs, ys)):
            return MeanClassTag.VII
    except (DomainViolation, RangeViolation):
        pass
    shared = [y for y in xs + ys if g.domain.contains(y) and h.domain.contains(y)]
    if g.name == h.name or (len(shared) >= 3 and all(_close(g(y), h(y)) for y in shared)):
        return MeanClassTag.III
    if all(_close(x, y) for x, y in zip(xs, ys)):
        return MeanClassTag.V
    return MeanClassTag.IV


# ---------------------------------------------------------------------------
# means of a function


def _raw_integral(f: RealFn, iv: Interval, fr: Frame2D, cfg: QuadConfig) -> float:
    """∫ h(f(g⁻¹(u))) du over g(iv), oriented from g(lo) to g(hi)."""
    g, h = fr.g, fr.h
    if g.analytic:
        return integrate(lambda x: h.forward(f(x)) * g.deriv(x), iv, cfg)
    return integrate(lambda u: h.forward(f(g.inverse(u))), g.image(iv), cfg) * g.direction


def _moving_ends(iv: Interval):
    """Parametrised approach of each open end: (x(eps), dx/deps, side) factories."""
    ends = []
    width = iv.width if iv.is_finite else None
    if iv.lo_open:
        if math.isinf(iv.lo):
            s = max(1.0, abs(iv.hi)) if math.isfinite(iv.hi) else 1.0
            ends.append((lambda e, s=s: -s / e, lambda e, s=s: s / (e * e), -1))
        else:
            w = width or max(1.0, abs(iv.lo))
            ends.append((lambda e, w=w: iv.lo + e * w, lambda e, w=w: w, -1))
    if iv.hi_open:
        if math.isinf(iv.hi):
            s = max(1.0, abs(iv.lo)) if math.isfinite(iv.lo) else 1.0
            ends.append((lambda e, s=s: s / e, lambda e, s=s: -s / (e * e), 1))
        else:
            w = width or max(1.0, abs(iv.hi))
            ends.append((lambda e, w=w: iv.hi - e * w, lambda e, w=w: -w, 1))
    return ends


def _divergent_span_limit(f: RealFn, iv: Interval, fr: Frame2D, cfg: QuadConfig) -> float:
    """Limit of N(eps)/D(eps) when the image span D diverges.

    N and D are the numerator integral and g-span over the shrunken
    interval. Because |D| -> inf, the limit equals that of N'(eps)/D'(eps),
    which needs only endpoint values: a weighted average of h(f) at the
    moving ends, weighted by how fast each end stretches the span.
    """
    g, h = fr.g, fr.h
    ends = _moving_ends(iv)
    ratios: list[float] = []
    estimates: list[float] = []
    best = None  # (agreement, estimate)
    for eps in cfg.shrink_sequence():
        num = den = 0.0
        for pos, speed, side in ends:
            x = pos(eps)
            stretch = side * g.deriv(x) * speed(eps)
            num += h.forward(f(x)) * stretch
            den += stretch
        if den == 0:
            raise DegenerateFrame("image span stopped growing while shrinking towards the ends")
        ratios.append(num / den)
        estimate = ratios[-1]
        if len(ratios) >= 3:
            # the error shrinks geometrically with eps; remove the leading term
            step, prev_step = ratios[-1] - ratios[-2], ratios[-2] - ratios[-3]
            if prev_step:
                q = step / prev_step
                if 0.0 < q < 0.95:
                    estimate += step * q / (1.0 - q)
        estimates.append(estimate)
        if len(estimates) < 2:
            continue
        agreement = abs(estimates[-1] - estimates[-2])
        if agreement <= cfg.tolerance(estimate):
            return estimate
        if best is None or agreement < best[0]:
            best = (agreement, estimate)
        elif agreement > 10 * best[0]:
            break  # round-off near the ends now dominates
    # Accept a limit capped by floating-point resolution, not one that drifts.
    if best is not None and best[0] <= math.sqrt(cfg.rel_tol) * max(1.0, abs(best[1])):
        return best[1]
    raise DivergentImproper("mean over an unbounded image did not settle")


def _near_end_points(iv: Interval, cfg: QuadConfig) -> list[float]:
    pts = []
    for pos, _speed, _side in _moving_ends(iv):
        pts.extend(pos(e) for e in cfg.shrink_sequence())
    return pts


def _unbounded(f: RealFn, iv: Interval, cfg: QuadConfig) -> bool:
    try:
        mid = f(iv.grid(1)[0])
    except DomainViolation:
        return False
    for pos, _speed, _side in _moving_ends(iv):
        try:
            mags = [abs(f(pos(e))) for e in cfg.shrink_sequence()]
        except DomainViolation:
            continue
        tail = mags[-4:]
        if all(b >= a for a, b in zip(tail, tail[1:])) and tail[-1] > 1e6 * max(1.0, abs(mid)):
            return True
    return False


def _outside_range(f: RealFn, iv: Interval, y: float, cfg: QuadConfig) -> bool:
    """True only when ``y`` provably falls into a gap of the range of ``f``."""
    candidates = sorted(set(iv.grid(257) + _near_end_points(iv, cfg)
                            + [p for p in (iv.lo, iv.hi) if iv.contains(p)]))
    xs, ys = [], []
    for x in candidates:
        try:
            ys.append(f(x))
        except DomainViolation:
            continue
        xs.append(x)
    tol = 1e-9 * max(1.0, abs(y))
    if any(abs(v - y) <= tol for v in ys):
        return False
    straddles = [(i, i + 1) for i in range(len(xs) - 1) if (ys[i] - y) * (ys[i + 1] - y) < 0]
    if not straddles:
        return False
    for i, j in straddles:
        lo, hi, f_lo = xs[i], xs[j], ys[i] - y
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            f_mid = f(mid) - y
            if abs(f_mid) <= tol:
                return False
            if (f_mid > 0) == (f_lo > 0):
                lo, f_lo = mid, f_mid
            else:
                hi = mid
        if abs(f(lo) - f(hi)) <= tol:
            return False
    return True


def mean_function(f: RealFn, iv, fr: Frame2D, cfg: QuadConfig | None = None) -> FunctionMean:
    """Isomorphic mean of ``f`` over ``iv`` in the frame ``fr``.

    ``iv`` is an :class:`Interval` or an ``(a, b)`` pair in either order.
    Open and unbounded ends are handled as limits over shrinking intervals.
    """
    cfg = cfg or QuadConfig()
    interval, sign = oriented_interval(iv)
    g, h = fr.g, fr.h
    tag = mean_class(f, fr, interval)
    if interval.is_degenerate:
        return FunctionMean(f(interval.lo), tag)
    if not g.domain.contains_interval(interval):
        raise DomainViolation(f"{interval} is not inside the domain {g.domain} of {g.name}")

    improper = not (interval.is_proper and interval.is_finite)
    g_lo, g_hi = g.limit(interval.lo), g.limit(interval.hi)
    if math.isfinite(g_lo) and math.isfinite(g_hi):
        span = g_hi - g_lo
        if span == 0:
            raise DegenerateFrame(f"{g.name} collapses {interval} to a point")
        raw = _raw_integral(f, interval, fr, cfg)
        if sign < 0:
            raw, span = -raw, -span
        m_phi = raw / span
    else:
        m_phi = _divergent_span_limit(f, interval, fr, cfg)

    if not (math.isfinite(m_phi) and h.codomain.contains(m_phi)):
        raise RangeViolation(f"mean image {m_phi!r} is outside the image {h.codomain} of {h.name}")
    value = h.inverse(m_phi)
    generalized = improper and _unbounded(f, interval, cfg)
    outside = _outside_range(f, interval, value, cfg)
    return FunctionMean(value, tag, generalized, outside, improper)


def composite_mean_v(f: RealFn, fr: Frame2D, iv, cfg: QuadConfig | None = None) -> FunctionMean:
    """f⁻¹ of the mean of ``f``: the mean of x under the frame (g, h∘f), for monotone f."""
    inner = mean_function(f, iv, fr, cfg)
    interval, _ = oriented_interval(iv)
    try:
        x = invert_monotone(f, inner.value, interval)
    except NotBracketed:
        raise RangeViolation("mean value is not attained by f on the interval") from None
    return FunctionMean(x, MeanClassTag.COMPOSITE_V, inner.generalized, inner.outside_range,
                        inner.improper)


def mean_function_oracle(f: RealFn, iv, fr: Frame2D, n: int) -> float:
    """Riemann-sum estimate with ``n`` equal cells of g(iv), tagged at midpoints."""
    if n < 1:
        raise InvalidParam("partition count must be positive")
    interval, sign = oriented_interval(iv)
    if not (interval.is_proper and interval.is_finite):
        raise InvalidParam("the partition oracle needs a closed bounded interval")
    g, h = fr.g, fr.h
    a, b = (interval.lo, interval.hi) if sign > 0 else (interval.hi, interval.lo)
    u0, u1 = g(a), g(b)
    du = (u1 - u0) / n
    total = math.fsum(h(f(g.inverse(u0 + (i + 0.5) * du))) for i in range(n))
    return h.inverse(total / n)


# ---------------------------------------------------------------------------
# bivariate means

_BRANCH_TOL = 1e-12


def stolarsky_general(p: float, q: float, a: float, b: float) -> float:
    """The unbranched quasi-Stolarsky formula, evaluated without cancellation.

    With L = ln(b/a) and E(t) = expm1(t·L)/t the mean is
    a·(E(p+q)/E(p))^(1/q).
    """
    lam = math.log(b / a)

    def e(t):
        return math.expm1(t * lam) / t

    return a * math.exp((math.log(abs(e(p + q))) - math.log(abs(e(p)))) / q)


def quasi_stolarsky(p: float, q: float, a: float, b: float) -> float:
    """Q_{p,q}(a, b): class-V mean generated by x^p and y^q, with its limit branches."""
    if not (a > 0 and b > 0):
        raise DomainViolation("quasi-Stolarsky means need positive arguments")
    if a == b:
        return a
    p_zero, q_zero = abs(p) < _BRANCH_TOL, abs(q) < _BRANCH_TOL
    la, lb = math.log(a), math.log(b)
    if p_zero and q_zero:
        return math.sqrt(a * b)
    if p_zero:
        return ((b**q - a**q) / (q * (lb - la))) ** (1.0 / q)
    if q_zero:
        return math.exp((b**p * lb - a**p * la) / (b**p - a**p) - 1.0 / p)
    if abs(p + q) < _BRANCH_TOL:
        return ((b**p - a**p) / (p * (lb - la))) ** (1.0 / p)
    if abs(p - q) < _BRANCH_TOL:
        return ((a**p + b**p) / 2.0) ** (1.0 / p)
    return stolarsky_general(p, q, a, b)


def cauchy_mean(f: RealFn, g: RealFn, x1: float, x2: float) -> float:
    """The point t between x1 and x2 with f'(t)/g'(t) = Δf/Δg."""
    if x1 == x2:
        return x1
    lo, hi = min(x1, x2), max(x1, x2)
    dg = g(x2) - g(x1)
    if dg == 0:
        raise SingularGenerator("g takes equal values at both points")
    target = (f(x2) - f(x1)) / dg

    def ratio(t):
        gp = g.deriv(t)
        if gp == 0:
            raise SingularGenerator(f"g' vanishes at {t!r}")
        return f.deriv(t) / gp

    inner = Interval(lo, hi, True, True)
    samples = [ratio(t) for t in inner.grid(256)]
    if monotonicity(samples) not in ("increasing", "decreasing"):
        raise NotInvertible("f'/g' is not strictly monotone on the interval")
    bracket = [lo, hi]
    for k, end in enumerate((lo, hi)):
        try:
            ratio(end)
        except (DomainViolation, SingularGenerator, *EVAL_FAILURES):
            bracket[k] = math.nextafter(end, hi if k == 0 else lo)
    rf = RealFn(ratio, Interval(bracket[0], bracket[1]))
    try:
        return invert_monotone(rf, target, bracket, check=False)
    except NotBracketed:
        raise NoRoot("f'/g' does not reach the difference quotient inside the interval") from None


# ---------------------------------------------------------------------------
# comparison


def derivative_ratio_trend(g: Mapping, h: Mapping, iv: Interval, n: int = 512) -> str:
    """Monotonicity of h'/g' sampled on ``n`` interior points."""
    values = []
    for x in iv.grid(n):
        gp = g.deriv(x)
        if gp == 0:
            raise SingularGenerator(f"{g.name}' vanishes at {x!r}")
        values.append(h.deriv(x) / gp)
    deadband = 1e-12 if (g.analytic and h.analytic) else 1e-7
    return monotonicity(values, deadband)


def odd_rule(trend: str, g_increasing: bool, h_increasing: bool) -> str:
    """Inequality implied by the trend of the ratio and the directions of g and h."""
    if trend == "constant":
        return EQ
    if trend == "indeterminate":
        return INDETERMINATE
    increasing = [trend == "increasing", g_increasing, h_increasing].count(True)
    return LE if increasing % 2 == 1 else GE


def compare_means(g: Mapping, h: Mapping, iv: Interval) -> str:
    """Order of the g-mean and the h-mean for every tuple drawn from ``iv``.

    ``"<="`` means mean_g ≤ mean_h, ``">="`` the reverse, ``"="`` equality,
    and ``"indeterminate"`` when h'/g' is not monotone.
    """
    for m in (g, h):
        if not m.domain.contains_interval(iv):
            raise DomainViolation(f"{iv} is not inside the domain {m.domain} of {m.name}")
    return odd_rule(derivative_ratio_trend(g, h, iv), g.increasing, h.increasing)


__all__ = [
    "LE",
    "GE",
    "EQ",
    "INDETERMINATE",
    "Weights",
    "MeanClassTag",
    "FunctionMean",
    "mean_numbers",
    "mean_class",
    "mean_function",
    "composite_mean_v",
    "mean_function_oracle",
    "quasi_stolarsky",
    "stolarsky_general",
    "cauchy_mean",
    "compare_means",
    "derivative_ratio_trend",
    "odd_rule",
]
