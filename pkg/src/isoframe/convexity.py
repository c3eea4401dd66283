"""DVI-convexity: classification by the derivative criteria, randomized verification,
and isomorphic convex sets."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .differential import dual_derivative
from .errors import DomainViolation, IndeterminateMonotonicity, InvalidParam
from .means import EQ, GE, LE, mean_numbers, odd_rule
from .mappings import Frame2D, Mapping
from .numerics import Interval, RealFn, monotonicity

DEFAULT_SEED = 0xC0FFEE
DEFAULT_TRIALS = 10_000

INC, DEC = "increasing", "decreasing"

# (trend of (h∘f)'/g', direction of g, direction of h)
#   -> (inequality f(mean_g) vs mean_h(f), convexity of the transported function)
CONVEXITY_TABLE = {
    (INC, INC, INC): (LE, "to_lower"),
    (INC, INC, DEC): (GE, "to_lower"),
    (INC, DEC, INC): (GE, "to_upper"),
    (INC, DEC, DEC): (LE, "to_upper"),
    (DEC, INC, INC): (GE, "to_upper"),
    (DEC, INC, DEC): (LE, "to_upper"),
    (DEC, DEC, INC): (LE, "to_lower"),
    (DEC, DEC, DEC): (GE, "to_lower"),
}


@dataclass(frozen=True)
class ConvexityVerdict:
    """Outcome of the derivative criterion.

    ``geometric_direction`` describes the graph of f drawn on the
    dual-isomorphic axes (``to_lower`` exactly when the inequality is ≤);
    ``aux_direction`` describes the transported function h∘f∘g⁻¹ on
    ordinary Cartesian axes. They differ whenever h is decreasing, because
    a decreasing h flips the vertical axis.
    """

    kind: str
    inequality: str
    geometric_direction: str
    aux_direction: str
    evidence: tuple[str, str, str]
    strict: bool = False


def _direction(m: Mapping) -> str:
    return INC if m.increasing else DEC


def classify_dvi_convexity(f: RealFn, fr: Frame2D, iv: Interval, n: int = 512) -> ConvexityVerdict:
    xs = iv.grid(n)
    ratios = [dual_derivative(f, fr, x) for x in xs]
    analytic = f.has_derivative and fr.g.analytic and fr.h.analytic
    deadband = 1e-12 if analytic else 1e-7
    trend = monotonicity(ratios, deadband)
    evidence = (trend, _direction(fr.g), _direction(fr.h))
    if trend == "constant":
        return ConvexityVerdict("Affine", EQ, "straight", "straight", evidence)
    if trend == "indeterminate":
        return ConvexityVerdict("Indeterminate", "none", "none", "none", evidence)
    inequality, aux = CONVEXITY_TABLE[evidence]
    assert inequality == odd_rule(trend, fr.g.increasing, fr.h.increasing)
    strict = all(
        abs(b - a) > deadband * max(abs(a), abs(b)) for a, b in zip(ratios, ratios[1:])
    )
    if inequality == LE:
        return ConvexityVerdict("DVIConvex", LE, "to_lower", aux, evidence, strict)
    return ConvexityVerdict("DVIConcave", GE, "to_upper", aux, evidence, strict)


@dataclass(frozen=True)
class Counterexample:
    x1: float
    x2: float
    lam: float
    lhs: float
    rhs: float


@dataclass(frozen=True)
class InequalityCheck:
    passed: bool
    inequality: str
    trials: int
    counterexample: Counterexample | None = None


def _draw(rng: random.Random, lo: float, hi: float, accept: Callable[[float], bool]) -> float:
    for _ in range(10_000):
        x = rng.uniform(lo, hi)
        if accept(x):
            return x
    raise InvalidParam(f"no admissible sample found in [{lo}, {hi}]")


def _draw_lambda(rng: random.Random) -> float:
    lam = rng.random()
    while lam == 0.0:
        lam = rng.random()
    return lam


def _holds(inequality: str, lhs: float, rhs: float, deadband: float) -> bool:
    slack = deadband * max(1.0, abs(lhs), abs(rhs))
    if inequality == LE:
        return lhs <= rhs + slack
    if inequality == GE:
        return lhs >= rhs - slack
    return abs(lhs - rhs) <= slack


def verify_dvi_inequality(
    f: RealFn,
    fr: Frame2D,
    iv: Interval,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    verdict: ConvexityVerdict | None = None,
    deadband: float = 1e-10,
) -> InequalityCheck:
    """Randomized check of f(mean_g(x1, x2)) against mean_h(f(x1), f(x2))."""
    verdict = verdict or classify_dvi_convexity(f, fr, iv)
    claim = verdict.inequality
    if claim == "none":
        return InequalityCheck(False, claim, 0)
    rng = random.Random(seed)
    lo, hi = iv.window()
    for t in range(trials):
        x1 = _draw(rng, lo, hi, iv.contains)
        x2 = _draw(rng, lo, hi, iv.contains)
        lam = _draw_lambda(rng)
        weights = (lam, 1.0 - lam) if lam < 1.0 else (0.5, 0.5)
        lhs = f(mean_numbers([x1, x2], weights, fr.g))
        rhs = mean_numbers([f(x1), f(x2)], weights, fr.h)
        if not _holds(claim, lhs, rhs, deadband):
            return InequalityCheck(False, claim, t + 1, Counterexample(x1, x2, lam, lhs, rhs))
    return InequalityCheck(True, claim, trials)


@dataclass(frozen=True)
class SetCheck:
    passed: bool
    trials: int
    counterexample: tuple | None = None


def _sampler(rng, box: Sequence[Interval], member, mappings: Sequence[Mapping]):
    windows = [b.window() for b in box]

    def admissible(point):
        for coord, b, m in zip(point, box, mappings):
            if not (b.contains(coord) and m.domain.contains(coord)):
                return False
        try:
            return bool(member(*point))
        except DomainViolation:
            return False

    def draw():
        for _ in range(100_000):
            point = tuple(rng.uniform(lo, hi) for lo, hi in windows)
            if admissible(point):
                return point
        raise InvalidParam("the set looks empty inside the sampling box")

    return draw


def _check_set(member, mappings, box, trials, seed) -> SetCheck:
    rng = random.Random(seed)
    draw = _sampler(rng, box, member, mappings)
    for t in range(trials):
        p1, p2 = draw(), draw()
        lam = _draw_lambda(rng)
        weights = (lam, 1.0 - lam) if lam < 1.0 else (0.5, 0.5)
        try:
            p = tuple(mean_numbers([a, b], weights, m) for a, b, m in zip(p1, p2, mappings))
            inside = bool(member(*p))
        except DomainViolation:
            p, inside = None, False
        if not inside:
            return SetCheck(False, t + 1, (p1, p2, lam, p))
    return SetCheck(True, trials)


def is_convex_set_1d(
    member: Callable[[float], bool],
    g: Mapping,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    box: Interval | None = None,
) -> SetCheck:
    """Is the set closed under g-means of its members? Sampled from ``box`` (default: g's domain)."""
    return _check_set(member, (g,), (box or g.domain,), trials, seed)


def is_convex_set_2d(
    member: Callable[[float, float], bool],
    g1: Mapping,
    g2: Mapping,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    box: tuple[Interval, Interval] | None = None,
) -> SetCheck:
    """Coordinatewise version: (mean_g1 of x, mean_g2 of y) must stay in the set."""
    box = box or (g1.domain, g2.domain)
    return _check_set(member, (g1, g2), box, trials, seed)


@dataclass(frozen=True)
class BuildCheck:
    inequality: str
    lhs: float
    rhs: float
    holds: bool


def build_inequality_check(f: RealFn, iv: Interval, xs: Sequence[float]) -> BuildCheck:
    """Compare n·f(∏xᵢ) with Σ f(xᵢⁿ), the direction set by the trend of x·f'(x)."""
    n = len(xs)
    if n < 2:
        raise InvalidParam("need at least two numbers")
    if iv.lo < 0 or (iv.lo == 0 and not iv.lo_open):
        raise DomainViolation(f"{iv} must lie in (0, inf)")
    powers = [x**n for x in xs]
    if any(x <= 0 for x in xs) or not all(iv.contains(p) for p in powers):
        raise DomainViolation(f"every x**{n} must lie in {iv}")
    trend = monotonicity([x * f.deriv(x) for x in iv.grid(512)],
                         1e-12 if f.has_derivative else 1e-7)
    if trend == "indeterminate":
        raise IndeterminateMonotonicity("x·f'(x) is not monotone on the interval")
    inequality = {"increasing": LE, "decreasing": GE, "constant": EQ}[trend]
    lhs = n * f(math.prod(xs))
    rhs = math.fsum(f(p) for p in powers)
    return BuildCheck(inequality, lhs, rhs, _holds(inequality, lhs, rhs, 1e-10))


__all__ = [
    "CONVEXITY_TABLE",
    "ConvexityVerdict",
    "classify_dvi_convexity",
    "verify_dvi_inequality",
    "InequalityCheck",
    "Counterexample",
    "is_convex_set_1d",
    "is_convex_set_2d",
    "SetCheck",
    "build_inequality_check",
    "BuildCheck",
    "DEFAULT_SEED",
    "DEFAULT_TRIALS",
]
