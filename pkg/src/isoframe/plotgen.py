"""Transport between the dual-isomorphic plane and its Cartesian aux plane,
plus graph sampling, axis ticks and CSV/SVG output."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from .differential import axis_density
from .errors import BondingViolation, DomainViolation, InvalidParam, IsoframeError
from .mappings import Frame2D, Mapping, dvi_function
from .means import mean_numbers
from .numerics import Interval, RealFn

CONGRUENCE_TOL = 1e-12
_OPEN_END_OFFSET = 1e-9


@dataclass(frozen=True)
class Annotation:
    kind: str
    x: float
    y: float


@dataclass
class PlotSeries:
    label: str
    points: list[tuple[float, float, float, float]]
    annotations: list[Annotation] = field(default_factory=list)
    frame: Frame2D | None = None


def to_aux(fr: Frame2D, x: float, y: float) -> tuple[float, float]:
    return fr.g(x), fr.h(y)


def fixed_proportion(p1: float, p2: float, lam1: float, g: Mapping) -> float:
    """Point dividing [p1, p2] in the ratio lam1 : (1 - lam1) measured on g's axis."""
    if not 0.0 < lam1 < 1.0:
        raise InvalidParam(f"lambda must lie in (0, 1), got {lam1!r}")
    return mean_numbers([p1, p2], (lam1, 1.0 - lam1), g)


@dataclass(frozen=True)
class AxisTicks:
    ticks: list[tuple[float, float]]
    reversed_arrow: bool


def axis_ticks(g: Mapping, marks: Sequence[float]) -> AxisTicks:
    """Position of each mark on the aux axis; a decreasing g reverses the axis arrow."""
    return AxisTicks([(m, g(m)) for m in marks], not g.increasing)


def _finite_span(iv: Interval, g: Mapping) -> tuple[float, float, bool, bool]:
    """A bounded x-range whose image is finite; unbounded pieces fall back to a window."""
    lo, hi = (iv.lo, iv.hi) if iv.is_finite else iv.window()
    lo_open = iv.lo_open and lo == iv.lo
    hi_open = iv.hi_open and hi == iv.hi
    width = hi - lo
    if not math.isfinite(g.limit(lo)):
        lo, lo_open = lo + 1e-6 * width, False
    if not math.isfinite(g.limit(hi)):
        hi, hi_open = hi - 1e-6 * width, False
    return lo, hi, lo_open, hi_open


def graph_series(f: RealFn, fr: Frame2D, iv: Interval, n: int, label: str | None = None) -> PlotSeries:
    """n points of the graph, spaced uniformly on the aux u-axis."""
    if n < 2:
        raise InvalidParam("need at least two samples")
    g, h = fr.g, fr.h
    lo, hi, lo_open, hi_open = _finite_span(iv, g)
    ua, ub = g.limit(lo), g.limit(hi)
    span = ub - ua
    if lo_open:
        ua += _OPEN_END_OFFSET * span
    if hi_open:
        ub -= _OPEN_END_OFFSET * span
    step = (ub - ua) / (n - 1)
    part = f.domain.intersect(iv)
    if part is None:
        raise BondingViolation(f"{iv} misses the domain {f.domain} of {f.label}")
    phi = dvi_function(replace(f, domain=part), fr)
    points, notes = [], []
    for k in range(n):
        u_target = ua + k * step if 0 < k < n - 1 else (ua if k == 0 else ub)
        x = g.inverse(u_target)
        x = min(max(x, lo), hi)
        if not iv.contains(x):
            continue
        y = f(x)
        u = g(x)
        try:
            v = h(y)
        except DomainViolation:
            raise BondingViolation(
                f"{f.label}({x!r}) = {y!r} is outside the domain {h.domain} of {h.name}"
            ) from None
        ref = phi(u)
        if abs(ref - v) > 1e-9 * max(1.0, abs(v)):
            raise BondingViolation(f"graph and transported function disagree at x={x!r}")
        if axis_density(g, x).singular or axis_density(h, y).singular:
            notes.append(Annotation("singular", x, y))
        points.append((x, y, u, v))
    points.sort(key=lambda p: p[2])
    return PlotSeries(label or f.label, points, notes, fr)


def check_congruence(series: PlotSeries, tol: float = CONGRUENCE_TOL) -> None:
    if series.frame is None:
        return
    g, h = series.frame.g, series.frame.h
    for x, y, u, v in series.points:
        if abs(g(x) - u) > tol * max(1.0, abs(u)) or abs(h(y) - v) > tol * max(1.0, abs(v)):
            raise BondingViolation(f"series {series.label!r}: point at x={x!r} is off the graph")


def _fmt(v: float) -> str:
    return format(v, ".12g")


def to_csv(series_list: Sequence[PlotSeries]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", "x", "y", "u", "v"])
    for s in series_list:
        for p in s.points:
            w.writerow([s.label, *(_fmt(c) for c in p)])
    return buf.getvalue()


_W, _H, _PAD = 800, 600, 60
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _svg_num(v: float) -> str:
    return format(v, ".6g")


def _extent(values: Sequence[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    return lo, hi


def _tick_marks(m: Mapping, lo: float, hi: float, count: int = 5):
    """Evenly spaced aux positions labelled by their preimages."""
    marks = []
    for k in range(count):
        u = lo + (hi - lo) * k / (count - 1)
        try:
            marks.append(m.inverse(u))
        except IsoframeError:
            continue
    return axis_ticks(m, marks)


def to_svg(series_list: Sequence[PlotSeries]) -> str:
    us = [p[2] for s in series_list for p in s.points] + [0.0]
    vs = [p[3] for s in series_list for p in s.points] + [0.0]
    u0, u1 = _extent(us)
    v0, v1 = _extent(vs)

    def sx(u):
        return _PAD + (u - u0) / (u1 - u0) * (_W - 2 * _PAD)

    def sy(v):
        return _H - _PAD - (v - v0) / (v1 - v0) * (_H - 2 * _PAD)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<line x1="{_PAD}" y1="{_svg_num(sy(0.0))}" x2="{_W - _PAD}" y2="{_svg_num(sy(0.0))}" stroke="#888"/>',
        f'<line x1="{_svg_num(sx(0.0))}" y1="{_PAD}" x2="{_svg_num(sx(0.0))}" y2="{_H - _PAD}" stroke="#888"/>',
        f'<circle cx="{_svg_num(sx(0.0))}" cy="{_svg_num(sy(0.0))}" r="4" fill="black"/>',
        f'<text x="{_svg_num(sx(0.0) + 6)}" y="{_svg_num(sy(0.0) - 6)}" font-size="12">α</text>',
    ]
    frame = next((s.frame for s in series_list if s.frame is not None), None)
    if frame is not None:
        xt = _tick_marks(frame.g, min(us[:-1]), max(us[:-1]))
        for mark, pos in xt.ticks:
            out.append(
                f'<text x="{_svg_num(sx(pos))}" y="{_H - _PAD + 18}" font-size="11" '
                f'text-anchor="middle">{_svg_num(mark)}</text>'
            )
        yt = _tick_marks(frame.h, min(vs[:-1]), max(vs[:-1]))
        for mark, pos in yt.ticks:
            out.append(
                f'<text x="{_PAD - 6}" y="{_svg_num(sy(pos))}" font-size="11" '
                f'text-anchor="end">{_svg_num(mark)}</text>'
            )
        if xt.reversed_arrow:
            out.append(f'<text x="{_PAD}" y="{_H - 10}" font-size="11">x axis reversed</text>')
        if yt.reversed_arrow:
            out.append(f'<text x="10" y="{_PAD - 10}" font-size="11">y axis reversed</text>')
    for i, s in enumerate(series_list):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(f"{_svg_num(sx(p[2]))},{_svg_num(sy(p[3]))}" for p in s.points)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(
            f'<text x="{_W - _PAD}" y="{_PAD + 16 * i}" font-size="12" fill="{color}" '
            f'text-anchor="end">{escape(s.label)}</text>'
        )
        g, h = (s.frame.g, s.frame.h) if s.frame else (None, None)
        for a in s.annotations:
            if g is None:
                continue
            try:
                u, v = g(a.x), h(a.y)
            except IsoframeError:
                continue
            out.append(
                f'<circle cx="{_svg_num(sx(u))}" cy="{_svg_num(sy(v))}" r="5" '
                f'fill="none" stroke="red"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit(series_list: Sequence[PlotSeries], fmt: str, dest: str | Path | None = None) -> str:
    """Render series as ``csv`` or ``svg``; writes to ``dest`` when given and returns the text."""
    if not series_list:
        raise InvalidParam("nothing to emit: no series")
    for s in series_list:
        if not s.label:
            raise InvalidParam("every series needs a non-empty label")
        if not s.points:
            raise InvalidParam(f"series {s.label!r} has no points")
        check_congruence(s)
    if fmt == "csv":
        text = to_csv(series_list)
    elif fmt == "svg":
        text = to_svg(series_list)
    else:
        raise InvalidParam(f"unknown format {fmt!r}; use csv or svg")
    if dest is not None:
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text


__all__ = [
    "PlotSeries",
    "Annotation",
    "AxisTicks",
    "to_aux",
    "fixed_proportion",
    "axis_ticks",
    "graph_series",
    "check_congruence",
    "emit",
    "to_csv",
    "to_svg",
]
