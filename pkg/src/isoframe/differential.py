"""Dual-isomorphic derivatives, elasticity and number-axis densities."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import NonPositiveValue, SingularGenerator
from .mappings import Frame2D, Mapping, catalog
from .numerics import RealFn, fd_derivative


class Singular(enum.Enum):
    SINGULAR = "SINGULAR"

    def __str__(self):
        return self.value


SINGULAR = Singular.SINGULAR

# a finite-difference derivative this small is treated as a vanishing one
_FD_ZERO = 1e-10


@dataclass(frozen=True)
class DensityReport:
    point: tuple[float, ...]
    density: float | Singular
    mapping_derivative: float

    @property
    def singular(self) -> bool:
        return self.density is SINGULAR


def _vanishes(d: float, analytic: bool) -> bool:
    return d == 0.0 if analytic else abs(d) <= _FD_ZERO


def outer_derivative(f: RealFn, h: Mapping, x: float) -> float:
    """(h∘f)'(x), by the chain rule when both parts are analytic."""
    if f.has_derivative and h.analytic:
        return h.deriv(f(x)) * f.deriv(x)
    composite = RealFn(lambda t: h.forward(f(t)), f.domain, None, f"{h.name}({f.label})")
    return fd_derivative(composite, x)


def dual_derivative(f: RealFn, fr: Frame2D, x: float) -> float:
    """(h∘f)'(x) / g'(x): the slope of the transported graph at ``u = g(x)``."""
    g_prime = fr.g.deriv(x)
    if _vanishes(g_prime, fr.g.analytic):
        raise SingularGenerator(f"{fr.g.name}' vanishes at {x!r}")
    return outer_derivative(f, fr.h, x) / g_prime


_LOG_FRAME = Frame2D(catalog("ln"), catalog("ln"))


def elasticity(f: RealFn, x: float) -> float:
    """x·f'(x)/f(x), evaluated as the dual derivative in the (ln, ln) frame."""
    if f(x) <= 0:
        raise NonPositiveValue(f"elasticity needs a positive value, got {f.label}({x!r}) = {f(x)!r}")
    return dual_derivative(f, _LOG_FRAME, x)


def metrical_derivative(f: RealFn, fr: Frame2D, x: float) -> float:
    """h⁻¹ of the dual derivative; e.g. the exponential derivative exp(f'/f) for (id, ln)."""
    return fr.h.inverse(dual_derivative(f, fr, x))


def axis_density(g: Mapping, x: float) -> DensityReport:
    d = g.deriv(x)
    if _vanishes(d, g.analytic):
        return DensityReport((x,), SINGULAR, d)
    return DensityReport((x,), 1.0 / d, d)


def plane_density(fr: Frame2D, x: float, y: float) -> DensityReport:
    dg, dh = fr.g.deriv(x), fr.h.deriv(y)
    jac = abs(dg * dh)
    if _vanishes(dg, fr.g.analytic) or _vanishes(dh, fr.h.analytic):
        return DensityReport((x, y), SINGULAR, jac)
    return DensityReport((x, y), 1.0 / jac, jac)


__all__ = [
    "SINGULAR",
    "DensityReport",
    "dual_derivative",
    "outer_derivative",
    "elasticity",
    "metrical_derivative",
    "axis_density",
    "plane_density",
]
