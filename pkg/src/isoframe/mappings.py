"""Dimensional mappings: strictly monotone bijections and the frames built from them."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

from .errors import (
    BondingViolation,
    DomainMismatch,
    DomainViolation,
    InvalidParam,
    NonMonotoneDetected,
    RangeViolation,
    UnknownMapping,
)
from .numerics import (
    EVAL_FAILURES,
    INF,
    POSITIVE,
    REALS,
    Interval,
    RealFn,
    fd_derivative,
    invert_monotone,
)


def _num(v: float) -> str:
    """Compact parameter text for mapping names: 2.0 -> '2'."""
    v = float(v)
    return str(int(v)) if v.is_integer() and abs(v) < 1e15 else repr(v)


@dataclass(frozen=True)
class Mapping:
    """A strictly monotone bijection ``domain -> codomain``.

    ``direction`` is +1 for increasing and -1 for decreasing mappings.
    ``derivative_fn`` may be ``None``, in which case derivatives fall back
    to finite differences. ``affine`` records mappings of the form
    ``k*x + C`` built from the identity.
    """

    name: str
    forward_fn: Callable[[float], float]
    inverse_fn: Callable[[float], float]
    derivative_fn: Callable[[float], float] | None
    domain: Interval
    codomain: Interval
    direction: int
    affine: bool = False

    def __repr__(self):
        return f"Mapping({self.name}: {self.domain} -> {self.codomain})"

    @property
    def increasing(self) -> bool:
        return self.direction > 0

    @property
    def analytic(self) -> bool:
        return self.derivative_fn is not None

    def __call__(self, x: float) -> float:
        return self.forward(x)

    def forward(self, x: float) -> float:
        if not self.domain.contains(x):
            raise DomainViolation(f"{self.name}: {x!r} outside domain {self.domain}")
        try:
            u = float(self.forward_fn(x))
        except EVAL_FAILURES as exc:
            raise DomainViolation(f"{self.name} undefined at {x!r}: {exc}") from None
        if math.isnan(u):
            raise DomainViolation(f"{self.name} undefined at {x!r}")
        return u

    def inverse(self, u: float) -> float:
        if not self.codomain.contains(u):
            raise RangeViolation(f"{u!r} outside the image {self.codomain} of {self.name}")
        try:
            x = float(self.inverse_fn(u))
        except EVAL_FAILURES as exc:
            raise RangeViolation(f"{self.name} cannot be inverted at {u!r}: {exc}") from None
        # keep round-off from pushing the preimage out of the domain
        d = self.domain
        if x < d.lo or (x == d.lo and d.lo_open):
            x = math.nextafter(d.lo, INF) if d.lo_open else d.lo
        elif x > d.hi or (x == d.hi and d.hi_open):
            x = math.nextafter(d.hi, -INF) if d.hi_open else d.hi
        return x

    def deriv(self, x: float) -> float:
        if not self.domain.contains(x):
            raise DomainViolation(f"{self.name}': {x!r} outside domain {self.domain}")
        if self.derivative_fn is None:
            return fd_derivative(self.as_realfn(), x)
        try:
            return float(self.derivative_fn(x))
        except EVAL_FAILURES as exc:
            raise DomainViolation(f"{self.name}' undefined at {x!r}: {exc}") from None

    def as_realfn(self) -> RealFn:
        return RealFn(self.forward_fn, self.domain, self.derivative_fn, self.name)

    def inv(self) -> Mapping:
        """The inverse bijection as a mapping in its own right."""
        fwd, deriv = self.inverse_fn, self.derivative_fn
        inv_deriv = None
        if deriv is not None:
            inv_deriv = lambda u: 1.0 / deriv(fwd(u))  # noqa: E731
        return Mapping(
            name=f"inv({self.name})",
            forward_fn=fwd,
            inverse_fn=self.forward_fn,
            derivative_fn=inv_deriv,
            domain=self.codomain,
            codomain=self.domain,
            direction=self.direction,
            affine=self.affine,
        )

    def limit(self, x: float) -> float:
        """Value at ``x``, or the limiting image value at an excluded domain end."""
        d = self.domain
        if d.contains(x):
            return self.forward(x)
        lo_end, hi_end = (self.codomain.lo, self.codomain.hi)
        if not self.increasing:
            lo_end, hi_end = hi_end, lo_end
        if x == d.lo:
            return lo_end
        if x == d.hi:
            return hi_end
        raise DomainViolation(f"{self.name}: {x!r} outside domain {d}")

    def _inverse_limit(self, u: float) -> float:
        c = self.codomain
        if c.contains(u):
            return self.inverse(u)
        lo_end, hi_end = self.domain.lo, self.domain.hi
        if not self.increasing:
            lo_end, hi_end = hi_end, lo_end
        if u == c.lo:
            return lo_end
        if u == c.hi:
            return hi_end
        raise RangeViolation(f"{u!r} outside the image {c} of {self.name}")

    def image(self, iv: Interval) -> Interval:
        if not self.domain.contains_interval(iv):
            raise DomainViolation(f"{iv} is not inside the domain {self.domain} of {self.name}")
        a, b = self.limit(iv.lo), self.limit(iv.hi)
        if self.increasing:
            return Interval(a, b, iv.lo_open, iv.hi_open)
        return Interval(b, a, iv.hi_open, iv.lo_open)

    def preimage(self, iv: Interval) -> Interval:
        part = iv.intersect(self.codomain)
        if part is None:
            raise DomainMismatch(f"{iv} does not meet the image {self.codomain} of {self.name}")
        a, b = self._inverse_limit(part.lo), self._inverse_limit(part.hi)
        if self.increasing:
            return Interval(a, b, part.lo_open, part.hi_open)
        return Interval(b, a, part.hi_open, part.lo_open)

    def restrict(self, iv: Interval) -> Mapping:
        part = iv.intersect(self.domain)
        if part is None:
            raise DomainMismatch(f"{iv} does not meet the domain {self.domain} of {self.name}")
        return replace(self, domain=part, codomain=self.image(part))

    def validate(self, n: int = 1000, span: float = 20.0) -> None:
        """Sampled check of strict monotonicity and of the inverse round trip."""
        xs = self.domain.grid(n, span)
        us = [self.forward(x) for x in xs]
        for (x0, u0), (x1, u1) in zip(zip(xs, us), zip(xs[1:], us[1:])):
            if (u1 - u0) * self.direction <= 0 and x1 != x0:
                raise NonMonotoneDetected(f"{self.name} is not strictly monotone near {x0!r}")
        for x, u in zip(xs, us):
            back = self.inverse(u)
            if abs(back - x) > 1e-9 * max(1.0, abs(x)):
                raise NonMonotoneDetected(f"{self.name}: inverse round trip fails at {x!r}")


@dataclass(frozen=True)
class Frame2D:
    """Isomorphic frame: ``g`` acts on the independent variable, ``h`` on the dependent one."""

    g: Mapping
    h: Mapping

    def inv(self) -> Frame2D:
        return Frame2D(self.g.inv(), self.h.inv())


# ---------------------------------------------------------------------------
# catalog


def _mapping(name, fwd, inv, der, domain, codomain, direction, affine=False):
    return Mapping(name, fwd, inv, der, domain, codomain, direction, affine)


def _affine(k: float, c: float, name: str | None = None) -> Mapping:
    if k == 0 or not math.isfinite(k) or not math.isfinite(c):
        raise InvalidParam("affine scale must be a non-zero finite number")
    return _mapping(
        name or f"affine({_num(k)},{_num(c)})",
        lambda x: k * x + c,
        lambda u: (u - c) / k,
        lambda x: k,
        REALS,
        REALS,
        1 if k > 0 else -1,
        affine=True,
    )


def _pow(p: float, branch: float = 1.0) -> Mapping:
    if p == 0 or not math.isfinite(p):
        raise InvalidParam("pow exponent must be a non-zero finite number")
    if branch not in (1.0, -1.0):
        raise InvalidParam("pow branch must be +1 or -1")
    name = f"pow({_num(p)})" if branch > 0 else f"pow({_num(p)},-1)"
    integer = float(p).is_integer()
    if p == 1:
        return _affine(1.0, 0.0, name)
    if integer and p > 0 and int(p) % 2 == 1:
        return _mapping(
            name,
            lambda x: x**p,
            lambda u: math.copysign(abs(u) ** (1.0 / p), u),
            lambda x: p * x ** (p - 1),
            REALS,
            REALS,
            1,
        )
    if integer and p > 0:
        if branch > 0:
            half = Interval(0.0, INF, False, True)
            return _mapping(
                name, lambda x: x**p, lambda u: u ** (1.0 / p), lambda x: p * x ** (p - 1),
                half, half, 1,
            )
        return _mapping(
            name,
            lambda x: x**p,
            lambda u: -(u ** (1.0 / p)),
            lambda x: p * x ** (p - 1),
            Interval(-INF, 0.0, True, False),
            Interval(0.0, INF, False, True),
            -1,
        )
    if branch < 0:
        raise InvalidParam("a negative branch only exists for even integer exponents")
    return _mapping(
        name,
        lambda x: x**p,
        lambda u: u ** (1.0 / p),
        lambda x: p * x ** (p - 1),
        POSITIVE,
        POSITIVE,
        1 if p > 0 else -1,
    )


_LN10 = math.log(10.0)
_QUARTER = Interval(0.0, math.pi / 2)
_UNIT = Interval(0.0, 1.0)

_FIXED = {
    "id": lambda: _affine(1.0, 0.0, "id"),
    "ln": lambda: _mapping("ln", math.log, math.exp, lambda x: 1.0 / x, POSITIVE, REALS, 1),
    "log10": lambda: _mapping(
        "log10", math.log10, lambda u: 10.0**u, lambda x: 1.0 / (x * _LN10), POSITIVE, REALS, 1
    ),
    "exp": lambda: _mapping("exp", math.exp, math.log, math.exp, REALS, POSITIVE, 1),
    "exp10": lambda: _mapping(
        "exp10", lambda x: 10.0**x, math.log10, lambda x: _LN10 * 10.0**x, REALS, POSITIVE, 1
    ),
    "recip": lambda: _mapping(
        "recip", lambda x: 1.0 / x, lambda u: 1.0 / u, lambda x: -1.0 / (x * x),
        POSITIVE, POSITIVE, -1,
    ),
    "sinh": lambda: _mapping("sinh", math.sinh, math.asinh, math.cosh, REALS, REALS, 1),
    "cosh": lambda: _mapping(
        "cosh", math.cosh, math.acosh, math.sinh,
        Interval(0.0, INF, False, True), Interval(1.0, INF, False, True), 1,
    ),
    "cube": lambda: replace(_pow(3.0), name="cube"),
    "neg": lambda: _affine(-1.0, 0.0, "neg"),
    "db": lambda: _mapping(
        "db",
        lambda a: 10.0 ** (0.1 * a),
        lambda r: 10.0 * math.log10(r),
        lambda a: 0.1 * _LN10 * 10.0 ** (0.1 * a),
        REALS,
        POSITIVE,
        1,
    ),
    "sin": lambda: _mapping("sin", math.sin, math.asin, math.cos, _QUARTER, _UNIT, 1),
    "cos": lambda: _mapping(
        "cos", math.cos, lambda u: math.acos(u), lambda x: -math.sin(x), _QUARTER, _UNIT, -1
    ),
}

_PARAMETRIC = {"pow": (1, 2), "affine": (2, 2)}

CATALOG_NAMES = tuple(sorted(set(_FIXED) | set(_PARAMETRIC)))


def catalog(name: str, params: Sequence[float] = ()) -> Mapping:
    """Look up a built-in mapping, e.g. ``catalog("pow", [2])``."""
    params = [float(p) for p in params]
    if name in _FIXED:
        if params:
            raise InvalidParam(f"mapping {name!r} takes no parameters")
        return _FIXED[name]()
    if name in _PARAMETRIC:
        lo, hi = _PARAMETRIC[name]
        if not lo <= len(params) <= hi:
            raise InvalidParam(f"mapping {name!r} takes {lo}..{hi} parameters, got {len(params)}")
        if name == "pow":
            return _pow(*params)
        return _affine(*params)
    raise UnknownMapping(f"unknown mapping {name!r}; known: {', '.join(CATALOG_NAMES)}")


IDENTITY = catalog("id")


# ---------------------------------------------------------------------------
# constructions


def compose(outer: Mapping, inner: Mapping) -> Mapping:
    """``outer ∘ inner``, restricted to where the composition is defined."""
    overlap = inner.codomain.intersect(outer.domain)
    if overlap is None or overlap.is_degenerate:
        raise DomainMismatch(
            f"image {inner.codomain} of {inner.name} misses the domain {outer.domain} of {outer.name}"
        )
    domain = inner.preimage(overlap)
    f_out, f_in = outer.forward_fn, inner.forward_fn
    i_out, i_in = outer.inverse_fn, inner.inverse_fn
    derivative = None
    if outer.derivative_fn is not None and inner.derivative_fn is not None:
        d_out, d_in = outer.derivative_fn, inner.derivative_fn
        derivative = lambda x: d_out(f_in(x)) * d_in(x)  # noqa: E731
    return Mapping(
        name=f"{inner.name}|{outer.name}",
        forward_fn=lambda x: f_out(f_in(x)),
        inverse_fn=lambda u: i_in(i_out(u)),
        derivative_fn=derivative,
        domain=domain,
        codomain=outer.image(overlap),
        direction=outer.direction * inner.direction,
        affine=outer.affine and inner.affine,
    )


def v_scaleshift(m: Mapping, k: float, c: float) -> Mapping:
    """Vertical scale-shift ``x -> k*m(x) + C``."""
    if k == 0:
        raise InvalidParam("scale k must be non-zero")
    if k == 1 and c == 0:
        return m
    return compose(_affine(k, c), m)


def _scaled_interval(iv: Interval, k: float, c: float) -> Interval:
    a, b = k * iv.lo + c, k * iv.hi + c
    if k > 0:
        return Interval(a, b, iv.lo_open, iv.hi_open)
    return Interval(b, a, iv.hi_open, iv.lo_open)


def h_scaleshift(f, k: float, c: float):
    """Horizontal scale-shift ``u -> f((u - C)/k)`` on the domain ``k*D + C``.

    Accepts a :class:`RealFn` or a :class:`Mapping` and returns the same kind.
    """
    if k == 0:
        raise InvalidParam("scale k must be non-zero")
    if isinstance(f, Mapping):
        fwd, inv, der = f.forward_fn, f.inverse_fn, f.derivative_fn
        derivative = None if der is None else (lambda u: der((u - c) / k) / k)
        return Mapping(
            name=f"hshift({f.name},{_num(k)},{_num(c)})",
            forward_fn=lambda u: fwd((u - c) / k),
            inverse_fn=lambda y: k * inv(y) + c,
            derivative_fn=derivative,
            domain=_scaled_interval(f.domain, k, c),
            codomain=f.codomain,
            direction=f.direction * (1 if k > 0 else -1),
        )
    func, der = f.func, f.derivative
    derivative = None if der is None else (lambda u: der((u - c) / k) / k)
    return RealFn(
        lambda u: func((u - c) / k),
        _scaled_interval(f.domain, k, c),
        derivative,
        f"{f.label}((u-{_num(c)})/{_num(k)})",
    )


def function_mapping(f: RealFn, domain: Interval | None = None, name: str | None = None) -> Mapping:
    """Treat a strictly monotone real function on a bounded interval as a mapping.

    The inverse is numeric; the derivative is the function's own (analytic
    when the function carries one).
    """
    dom = domain if domain is not None else f.domain
    dom = dom.intersect(f.domain) if dom is not f.domain else dom
    if dom is None or not dom.is_finite or dom.is_degenerate:
        raise InvalidParam("a function mapping needs a bounded, non-degenerate domain")
    lo_x = dom.lo if not dom.lo_open else math.nextafter(dom.lo, dom.hi)
    hi_x = dom.hi if not dom.hi_open else math.nextafter(dom.hi, dom.lo)
    f_lo, f_hi = f(lo_x), f(hi_x)
    direction = 1 if f_hi > f_lo else -1
    if direction > 0:
        codomain = Interval(f_lo, f_hi, dom.lo_open, dom.hi_open)
    else:
        codomain = Interval(f_hi, f_lo, dom.hi_open, dom.lo_open)
    bracket = (lo_x, hi_x)

    def inverse(u):
        return invert_monotone(f, u, bracket, check=False)

    m = Mapping(
        name=name or f.label,
        forward_fn=f.func,
        inverse_fn=inverse,
        derivative_fn=f.derivative,
        domain=dom,
        codomain=codomain,
        direction=direction,
    )
    m.validate(n=257)
    return m


def dvi_function(f: RealFn, fr: Frame2D) -> RealFn:
    """The transported function ``h ∘ f ∘ g⁻¹`` on ``E = g(D)``."""
    g, h = fr.g, fr.h
    base = f.domain.intersect(g.domain)
    if base is None:
        raise BondingViolation(f"domain {f.domain} of {f.label} misses the domain of {g.name}")
    for x in base.grid(257):
        y = f(x)
        if not h.domain.contains(y):
            raise BondingViolation(f"{f.label}({x!r}) = {y!r} lies outside the domain {h.domain} of {h.name}")
    image = g.image(base)

    def preimage(u):
        # g⁻¹(g(x)) can overshoot a closed end of the base by an ulp
        x = g.inverse(u)
        for end, is_open in ((base.lo, base.lo_open), (base.hi, base.hi_open)):
            if not is_open and math.isfinite(end) and abs(x - end) <= 1e-12 * max(1.0, abs(end)):
                return end if not base.contains(x) else x
        return x

    def phi(u):
        return h.forward(f(preimage(u)))

    def phi_prime(u):
        x = preimage(u)
        return h.deriv(f(x)) * f.deriv(x) / g.deriv(x)

    derivative = phi_prime if (f.has_derivative and g.analytic and h.analytic) else None
    return RealFn(phi, image, derivative, f"phi({f.label}:{g.name},{h.name})")


__all__ = [
    "Mapping",
    "Frame2D",
    "catalog",
    "CATALOG_NAMES",
    "IDENTITY",
    "compose",
    "v_scaleshift",
    "h_scaleshift",
    "function_mapping",
    "dvi_function",
]
