"""Isomorphic arithmetic: ordinary arithmetic carried out on g-images and mapped back."""

from __future__ import annotations

import math
from typing import Sequence

from .errors import DivisorZero, InvalidParam, RangeViolation
from .mappings import Mapping


def _pull_back(value: float, g: Mapping) -> float:
    if not math.isfinite(value) or not g.codomain.contains(value):
        raise RangeViolation(f"{value!r} is outside the image {g.codomain} of {g.name}")
    return g.inverse(value)


def iso_add(xs: Sequence[float], g: Mapping) -> float:
    """g⁻¹(Σ g(xᵢ)); with ``g = recip`` this is the parallel-resistor sum."""
    if len(xs) < 2:
        raise InvalidParam("isomorphic addition needs at least two operands")
    return _pull_back(math.fsum(g(x) for x in xs), g)


def iso_sub(a: float, bs: Sequence[float], g: Mapping) -> float:
    if len(bs) < 1:
        raise InvalidParam("isomorphic subtraction needs at least one subtrahend")
    return _pull_back(g(a) - math.fsum(g(b) for b in bs), g)


def iso_mul(a: float, t: float, g: Mapping) -> float:
    return _pull_back(g(a) * t, g)


def iso_div1(a: float, t: float, g: Mapping) -> float:
    if t == 0:
        raise DivisorZero("isomorphic division by zero")
    return _pull_back(g(a) / t, g)


def iso_div2(a: float, b: float, g: Mapping) -> float:
    """Ratio of images g(a)/g(b); the result is a plain number, not mapped back."""
    ga, gb = g(a), g(b)
    if gb == 0:
        raise DivisorZero(f"{g.name}({b!r}) is zero")
    return ga / gb


__all__ = ["iso_add", "iso_sub", "iso_mul", "iso_div1", "iso_div2"]
