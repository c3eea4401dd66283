"""Isomorphic integrals of types I and II, and their logarithmic instances."""

from __future__ import annotations

from .errors import DomainViolation
from .mappings import Mapping, catalog
from .numerics import Interval, QuadConfig, RealFn, integrate, oriented_interval

_LN = catalog("ln")


def iso_integral_1(f: RealFn, iv, h: Mapping, cfg: QuadConfig | None = None) -> float:
    """h⁻¹(∫ h(f(x)) dx)."""
    raw = integrate(lambda x: h.forward(f(x)), iv, cfg)
    return h.inverse(raw)


def iso_integral_2(f: RealFn, iv, g: Mapping, cfg: QuadConfig | None = None) -> float:
    """g⁻¹(∫ f dg).

    Integrated as ∫ f(x) g'(x) dx when g has an analytic derivative,
    otherwise as ∫ f(g⁻¹(u)) du over the image interval.
    """
    interval, sign = oriented_interval(iv)
    if g.analytic:
        raw = integrate(lambda x: f(x) * g.deriv(x), interval, cfg)
    else:
        raw = integrate(lambda u: f(g.inverse(u)), g.image(interval), cfg) * g.direction
    return g.inverse(sign * raw)


def geometric_integral(f: RealFn, iv, cfg: QuadConfig | None = None) -> float:
    """exp(∫ ln f(x) dx)."""
    return iso_integral_1(f, iv, _LN, cfg)


def elastic_integral(f: RealFn, iv, cfg: QuadConfig | None = None) -> float:
    """exp(∫ f(x)/x dx); integrating an elasticity recovers F(b)/F(a)."""
    interval, _ = oriented_interval(iv)
    if interval.lo < 0 or (interval.lo == 0 and not interval.lo_open):
        raise DomainViolation(f"elastic integral needs a positive interval, got {interval}")
    return iso_integral_2(f, iv, _LN, cfg)


__all__ = ["iso_integral_1", "iso_integral_2", "geometric_integral", "elastic_integral"]
