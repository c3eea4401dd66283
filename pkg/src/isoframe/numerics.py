"""Numerical kernels: intervals, real functions, quadrature, inversion, differences."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import (
    DivergentImproper,
    DomainViolation,
    InvalidParam,
    NonConvergent,
    NonMonotoneDetected,
    NotBracketed,
)

INF = math.inf

# Failures raised by math routines when an argument is outside their domain.
EVAL_FAILURES = (ValueError, ZeroDivisionError, OverflowError, TypeError)


@dataclass(frozen=True)
class Interval:
    """Interval on the extended real line with open/closed flags.

    Infinite endpoints are always open; a degenerate interval ``[a, a]``
    is closed on both sides.
    """

    lo: float
    hi: float
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise InvalidParam("interval endpoint is NaN")
        if lo > hi:
            raise InvalidParam(f"interval lower end {lo} exceeds upper end {hi}")
        if lo == hi and (self.lo_open or self.hi_open):
            raise InvalidParam("a point interval must be closed")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "lo_open", bool(self.lo_open) or math.isinf(lo))
        object.__setattr__(self, "hi_open", bool(self.hi_open) or math.isinf(hi))

    @classmethod
    def closed(cls, lo, hi):
        return cls(lo, hi)

    @classmethod
    def open(cls, lo, hi):
        return cls(lo, hi, True, True)

    @classmethod
    def reals(cls):
        return cls(-INF, INF)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def is_proper(self) -> bool:
        """Closed and bounded."""
        return not (self.lo_open or self.hi_open)

    def contains(self, x: float) -> bool:
        if math.isnan(x):
            return False
        above = x > self.lo if self.lo_open else x >= self.lo
        below = x < self.hi if self.hi_open else x <= self.hi
        return above and below

    __contains__ = contains

    def contains_interval(self, other: Interval) -> bool:
        if other.lo < self.lo or (other.lo == self.lo and self.lo_open and not other.lo_open):
            return False
        if other.hi > self.hi or (other.hi == self.hi and self.hi_open and not other.hi_open):
            return False
        return True

    def intersect(self, other: Interval) -> Interval | None:
        if self.lo > other.lo:
            lo, lo_open = self.lo, self.lo_open
        elif self.lo < other.lo:
            lo, lo_open = other.lo, other.lo_open
        else:
            lo, lo_open = self.lo, self.lo_open or other.lo_open
        if self.hi < other.hi:
            hi, hi_open = self.hi, self.hi_open
        elif self.hi > other.hi:
            hi, hi_open = other.hi, other.hi_open
        else:
            hi, hi_open = self.hi, self.hi_open or other.hi_open
        if lo > hi or (lo == hi and (lo_open or hi_open)):
            return None
        return Interval(lo, hi, lo_open, hi_open)

    def window(self, span: float = 20.0) -> tuple[float, float]:
        """Finite stand-in used when an unbounded interval has to be sampled."""
        lo, hi = self.lo, self.hi
        if math.isinf(lo) and math.isinf(hi):
            return -span, span
        if math.isinf(hi):
            return lo, lo + span * max(1.0, abs(lo))
        if math.isinf(lo):
            return hi - span * max(1.0, abs(hi)), hi
        return lo, hi

    def grid(self, n: int, span: float = 20.0) -> list[float]:
        """n interior sample points, evenly spaced over the (windowed) interval."""
        lo, hi = self.window(span)
        if lo == hi:
            return [lo] * n
        return [lo + (i + 0.5) / n * (hi - lo) for i in range(n)]

    def __str__(self):
        left = "(" if self.lo_open else "["
        right = ")" if self.hi_open else "]"
        return f"{left}{_fmt(self.lo)}, {_fmt(self.hi)}{right}"


def _fmt(v: float) -> str:
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


REALS = Interval.reals()
POSITIVE = Interval(0.0, INF, True, True)


@dataclass(frozen=True)
class RealFn:
    """A real function of one variable with a domain and optional analytic derivative."""

    func: Callable[[float], float]
    domain: Interval = REALS
    derivative: Callable[[float], float] | None = None
    label: str = "f"

    def __call__(self, x: float) -> float:
        if not self.domain.contains(x):
            raise DomainViolation(f"{self.label}: {x!r} outside domain {self.domain}")
        try:
            y = float(self.func(x))
        except EVAL_FAILURES as exc:
            raise DomainViolation(f"{self.label} undefined at {x!r}: {exc}") from None
        if not math.isfinite(y):
            raise DomainViolation(f"{self.label} is not finite at {x!r}")
        return y

    @property
    def has_derivative(self) -> bool:
        return self.derivative is not None

    def deriv(self, x: float) -> float:
        """Analytic derivative when known, otherwise a finite-difference estimate."""
        if self.derivative is not None:
            if not self.domain.contains(x):
                raise DomainViolation(f"{self.label}': {x!r} outside domain {self.domain}")
            try:
                d = float(self.derivative(x))
            except EVAL_FAILURES as exc:
                raise DomainViolation(f"{self.label}' undefined at {x!r}: {exc}") from None
            if math.isnan(d):
                raise DomainViolation(f"{self.label}' undefined at {x!r}")
            return d
        return fd_derivative(self, x)


def as_realfn(f) -> RealFn:
    if isinstance(f, RealFn):
        return f
    if callable(f):
        return RealFn(f)
    raise TypeError(f"cannot use {f!r} as a real function")


@dataclass(frozen=True)
class QuadConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_depth: int = 60
    shrink_start: float = 1e-2
    shrink_ratio: float = 1e-1
    shrink_floor: float = 1e-12
    max_panels: int = 20000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise InvalidParam("quadrature tolerances must be positive")
        if self.max_depth < 1:
            raise InvalidParam("max_depth must be at least 1")
        if not (0 < self.shrink_ratio < 1 and 0 < self.shrink_floor <= self.shrink_start < 0.5):
            raise InvalidParam("bad improper shrink schedule")

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))

    def shrink_sequence(self) -> list[float]:
        eps, out = self.shrink_start, []
        while eps >= self.shrink_floor * (1 - 1e-9):
            out.append(eps)
            eps *= self.shrink_ratio
        return out


# Gauss-Kronrod 7-15 nodes on [-1, 1]; the Gauss nodes are every other Kronrod node.
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


def _gk15(f, a: float, b: float) -> tuple[float, float]:
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(center)
    kronrod = fc * _WGK[7]
    gauss = fc * _WG[3]
    for j in range(7):
        dx = half * _XGK[j]
        pair = f(center - dx) + f(center + dx)
        kronrod += _WGK[j] * pair
        if j % 2 == 1:
            gauss += _WG[j // 2] * pair
    return kronrod * half, abs((kronrod - gauss) * half)


def _adaptive(f, a: float, b: float, cfg: QuadConfig) -> float:
    """Globally adaptive bisection of the panel with the largest error estimate."""
    if a == b:
        return 0.0
    est, err = _gk15(f, a, b)
    heap = [(-err, a, b, est, 0)]
    total, total_err = est, err
    while total_err > cfg.tolerance(total):
        if len(heap) >= cfg.max_panels:
            raise NonConvergent(f"quadrature exceeded {cfg.max_panels} panels on [{a}, {b}]")
        neg_err, lo, hi, pest, depth = heapq.heappop(heap)
        if depth >= cfg.max_depth:
            raise NonConvergent(f"quadrature depth {cfg.max_depth} exhausted near [{lo}, {hi}]")
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            raise NonConvergent(f"quadrature panel collapsed at {lo}")
        e1, r1 = _gk15(f, lo, mid)
        e2, r2 = _gk15(f, mid, hi)
        total += e1 + e2 - pest
        total_err += r1 + r2 + neg_err
        heapq.heappush(heap, (-r1, lo, mid, e1, depth + 1))
        heapq.heappush(heap, (-r2, mid, hi, e2, depth + 1))
    # re-sum to shed the drift of the running update
    return math.fsum(item[3] for item in heap)


def _guarded(f) -> Callable[[float], float]:
    def wrapped(x):
        try:
            y = float(f(x))
        except DomainViolation:
            raise
        except EVAL_FAILURES as exc:
            raise DomainViolation(f"integrand undefined at {x!r}: {exc}") from None
        if not math.isfinite(y):
            raise DomainViolation(f"integrand not finite at {x!r}")
        return y

    return wrapped


def _toward_endpoint(f, edge: float, inner: float, cfg: QuadConfig) -> float:
    """Signed integral from ``inner`` to an open endpoint ``edge``.

    The piece next to the endpoint is integrated on a sequence of shrinking
    rings; each new ring is an increment of the running estimate, and a
    geometric tail fitted to the last two increments extrapolates the limit.
    """
    span = inner - edge
    eps = cfg.shrink_sequence()
    total = _adaptive(f, edge + eps[0] * span, inner, cfg)
    total = -total  # now runs from inner towards the edge
    prev_estimate = None
    last_piece = None
    for outer_eps, inner_eps in zip(eps, eps[1:]):
        piece = -_adaptive(f, edge + inner_eps * span, edge + outer_eps * span, cfg)
        total += piece
        tail = 0.0
        if last_piece:
            ratio = piece / last_piece
            if 0.0 < ratio < 0.95:
                tail = piece * ratio / (1.0 - ratio)
        estimate = total + tail
        tol = cfg.tolerance(estimate)
        if abs(piece) <= 0.1 * tol:
            return estimate
        if prev_estimate is not None and abs(estimate - prev_estimate) <= tol:
            return estimate
        prev_estimate, last_piece = estimate, piece
    raise DivergentImproper(
        f"improper integral near {edge!r} did not stabilise by eps={cfg.shrink_floor:g}"
    )


def _compactify(f, a, b, lo_open, hi_open):
    """Map an unbounded range of integration onto a bounded one."""
    if math.isinf(a) and math.isinf(b):
        def g(t):
            d = 1.0 - t * t
            return f(t / d) * (1.0 + t * t) / (d * d)
        return g, -1.0, 1.0, True, True
    if math.isinf(b):
        def g(t):
            d = 1.0 - t
            return f(a + t / d) / (d * d)
        return g, 0.0, 1.0, lo_open, True
    def g(t):
        d = 1.0 - t
        return f(b - t / d) / (d * d)
    return g, 0.0, 1.0, hi_open, True


def oriented_interval(iv) -> tuple[Interval, float]:
    """Normalise an :class:`Interval` or an ``(a, b)`` pair to ``(interval, sign)``.

    A pair with ``a > b`` gives the sorted interval and sign -1.
    """
    if isinstance(iv, Interval):
        return iv, 1.0
    a, b = (float(v) for v in iv)
    if a > b:
        return Interval(b, a), -1.0
    return Interval(a, b), 1.0


def _oriented(iv) -> tuple[float, float, bool, bool, float]:
    if isinstance(iv, Interval):
        return iv.lo, iv.hi, iv.lo_open, iv.hi_open, 1.0
    a, b = (float(v) for v in iv)
    lo_open, hi_open = math.isinf(a), math.isinf(b)
    if a > b:
        return b, a, hi_open, lo_open, -1.0
    return a, b, lo_open, hi_open, 1.0


def integrate(f, iv, cfg: QuadConfig | None = None) -> float:
    """Signed integral of ``f`` over ``iv``.

    ``iv`` is an :class:`Interval` or an ``(a, b)`` pair; a pair with
    ``a > b`` integrates against the orientation and returns the negated
    value. Open and unbounded ends are treated as limits.
    """
    cfg = cfg or QuadConfig()
    a, b, lo_open, hi_open, sign = _oriented(iv)
    if a == b:
        return 0.0
    g = _guarded(f)
    if math.isinf(a) or math.isinf(b):
        g, a, b, lo_open, hi_open = _compactify(g, a, b, lo_open, hi_open)
    if not (lo_open or hi_open):
        return sign * _adaptive(g, a, b, cfg)
    if lo_open and hi_open:
        mid = 0.5 * (a + b)
        value = -_toward_endpoint(g, a, mid, cfg) + _toward_endpoint(g, b, mid, cfg)
    elif lo_open:
        value = -_toward_endpoint(g, a, b, cfg)
    else:
        value = _toward_endpoint(g, b, a, cfg)
    return sign * value


def invert_monotone(
    f,
    target: float,
    bracket: Interval | Sequence[float],
    tol: float = 0.0,
    check: bool = True,
) -> float:
    """Solve ``f(x) = target`` for strictly monotone ``f`` on a finite bracket.

    Bisection narrows the bracket, then Illinois-style secant steps polish
    the root. With ``tol = 0`` iteration runs until the bracket collapses.
    """
    if isinstance(bracket, Interval):
        lo, hi = bracket.lo, bracket.hi
        if bracket.lo_open:
            lo = math.nextafter(lo, hi)
        if bracket.hi_open:
            hi = math.nextafter(hi, lo)
    else:
        lo, hi = sorted(float(v) for v in bracket)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise NotBracketed("inversion bracket must be finite")
    f_lo, f_hi = f(lo) - target, f(hi) - target
    if check:
        _assert_strictly_monotone(f, lo, hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise NotBracketed(f"target {target!r} not between f({lo!r}) and f({hi!r})")

    # bisection down to a small fraction of the bracket
    width0 = hi - lo
    while hi - lo > 1e-3 * width0:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid) - target
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid

    side = 0
    for _ in range(200):
        if abs(f_lo) <= tol:
            return lo
        if abs(f_hi) <= tol:
            return hi
        x = hi - f_hi * (hi - lo) / (f_hi - f_lo)
        if not (lo < x < hi):
            x = 0.5 * (lo + hi)
        if x == lo or x == hi:
            break
        fx = f(x) - target
        if fx == 0.0:
            return x
        if (fx > 0) == (f_lo > 0):
            lo, f_lo = x, fx
            if side == -1:
                f_hi *= 0.5
            side = -1
        else:
            hi, f_hi = x, fx
            if side == 1:
                f_lo *= 0.5
            side = 1
        if hi - lo <= 4 * math.ulp(max(abs(lo), abs(hi))):
            break
    return lo if abs(f_lo) <= abs(f_hi) else hi


def _assert_strictly_monotone(f, lo: float, hi: float, n: int = 64) -> None:
    xs = [lo + (hi - lo) * i / (n - 1) for i in range(n - 1)] + [hi]
    ys = [f(x) for x in xs]
    diffs = [b - a for a, b in zip(ys, ys[1:])]
    if not (all(d > 0 for d in diffs) or all(d < 0 for d in diffs)):
        raise NonMonotoneDetected(f"function is not strictly monotone on [{lo}, {hi}]")


def fd_derivative(f, x: float, h0: float | None = None, side: int = 0) -> float:
    """Finite-difference derivative with Richardson extrapolation.

    ``side = 0`` uses central differences; ``+1``/``-1`` use one-sided
    differences into the right/left neighbourhood. A :class:`RealFn` at a
    closed end of its domain switches to the one-sided form automatically,
    and the step is kept inside the domain.
    """
    h = h0 if h0 is not None else 1e-4 * max(1.0, abs(x))
    if h <= 0:
        raise InvalidParam("finite-difference step must be positive")
    domain = f.domain if isinstance(f, RealFn) else None
    if domain is not None:
        if not domain.contains(x):
            raise DomainViolation(f"derivative requested at {x!r} outside {domain}")
        room_lo, room_hi = x - domain.lo, domain.hi - x
        if side == 0 and room_lo == 0:
            side = 1
        elif side == 0 and room_hi == 0:
            side = -1
        room = {0: min(room_lo, room_hi), 1: room_hi, -1: room_lo}[side]
        if room <= 0:
            raise DomainViolation(f"no room for a difference stencil at {x!r}")
        h = min(h, 0.5 * room)

    try:
        if side == 0:
            def diff(step):
                return (f(x + step) - f(x - step)) / (2 * step)
            factor = 4.0
        else:
            fx = f(x)
            def diff(step):
                return (f(x + side * step) - fx) / (side * step)
            factor = 2.0

        table: list[list[float]] = []
        prev = None
        for i in range(12):
            row = [diff(h / 2**i)]
            for j in range(1, i + 1):
                scale = factor**j
                row.append(row[j - 1] + (row[j - 1] - table[i - 1][j - 1]) / (scale - 1))
            table.append(row)
            est = row[-1]
            if prev is not None and abs(est - prev) <= 1e-8 * abs(est) + 1e-15:
                return est
            prev = est
    except EVAL_FAILURES as exc:
        raise DomainViolation(f"derivative stencil undefined near {x!r}: {exc}") from None
    raise NonConvergent(f"finite differences did not settle at {x!r}")


def monotonicity(values: Sequence[float], deadband: float = 1e-12) -> str:
    """Classify a sampled sequence as increasing, decreasing, constant or indeterminate.

    Successive differences within ``deadband`` (relative to the local
    magnitude) count as flat; any pair of opposite strict signs makes the
    sequence indeterminate.
    """
    up = down = False
    for a, b in zip(values, values[1:]):
        d = b - a
        if abs(d) <= deadband * max(abs(a), abs(b), 1e-300):
            continue
        if d > 0:
            up = True
        else:
            down = True
        if up and down:
            return "indeterminate"
    if up:
        return "increasing"
    if down:
        return "decreasing"
    return "constant"


__all__ = [
    "INF",
    "Interval",
    "REALS",
    "POSITIVE",
    "RealFn",
    "as_realfn",
    "QuadConfig",
    "integrate",
    "oriented_interval",
    "invert_monotone",
    "fd_derivative",
    "monotonicity",
]
