"""Edgeworth-box geometry and a deterministic SVG rendering of it.

Coordinates are agent A's: origin bottom-left, x = good 1, y = good 2.  Agent
B's origin is the top-right corner, so B's bundle (c1, c2) plots at
``(E1 - c1, E2 - c2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .model import Bundle, EconomyAB, LinearGood2, QuadLog, UtilitySpec, WeightedLog

CURVE_POINTS = 400
EDGE_TOL = 1e-12


def fmt(x: float) -> str:
    """Twelve significant digits, no locale, no negative zero."""
    s = f"{x:.12g}"
    return "0" if s == "-0" else s


@dataclass(frozen=True)
class Curve:
    label: str
    points: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class Marker:
    label: str
    x: float
    y: float


@dataclass(frozen=True)
class EdgeworthSeries:
    box_width: float
    box_height: float
    price: float
    curves: tuple[Curve, ...]
    budget_line: tuple[tuple[float, float], ...]
    markers: tuple[Marker, ...]


def level_set(utility: UtilitySpec, level: float, c2_max: float) -> Callable[[float], float]:
    """``c1 -> c2`` with ``utility(c1, c2) = level``; NaN where no such c2 <= c2_max."""
    if isinstance(utility, WeightedLog):
        lam = utility.lam
        return lambda c1: math.exp((level - lam * math.log(c1)) / (1.0 - lam)) if c1 > 0 else math.nan
    if isinstance(utility, QuadLog) and utility.d > 0:
        d = utility.d
        return lambda c1: math.exp((level - 0.5 * c1 * c1) / d)
    if isinstance(utility, LinearGood2):
        return lambda c1: level

    lo = EDGE_TOL * c2_max

    def solve(c1: float) -> float:
        f = lambda c2: float(utility(c1, c2)) - level
        a, b = f(lo), f(c2_max)
        if not (math.isfinite(a) and math.isfinite(b)) or a * b > 0:
            return math.nan
        return brentq(f, lo, c2_max, xtol=1e-14, rtol=1e-14)

    return solve


def _curve(utility: UtilitySpec, anchor: Bundle, w: float, h: float, label: str,
           flip: bool) -> Curve:
    level = float(utility(anchor.c1, anchor.c2))
    if isinstance(utility, QuadLog) and utility.d == 0:
        # only good 1 matters: the level set is a vertical line
        xs = np.full(CURVE_POINTS, anchor.c1)
        ys = np.linspace(0.0, h, CURVE_POINTS)
    else:
        xs = np.unique(np.append(np.linspace(0.0, w, CURVE_POINTS), anchor.c1))
        inv = level_set(utility, level, h)
        ys = np.array([inv(float(x)) for x in xs])
    pts = []
    for x, y in zip(xs, ys):
        if not math.isfinite(y):
            continue
        if flip:
            x, y = w - x, h - y
        if -EDGE_TOL * w <= x <= w * (1 + EDGE_TOL) and -EDGE_TOL * h <= y <= h * (1 + EDGE_TOL):
            pts.append((min(max(float(x), 0.0), w), min(max(float(y), 0.0), h)))
    return Curve(label, tuple(pts))


def _budget_line(p: float, endow_a, w: float, h: float) -> tuple[tuple[float, float], ...]:
    # c1 + p c2 = m, clipped to the box
    m = endow_a.income(p)
    x0, x1 = max(0.0, m - p * h), min(w, m)
    return ((x0, (m - x0) / p), (x1, (m - x1) / p))


def build_series(econ: EconomyAB, price: float, alloc_a: Bundle, alloc_b: Bundle) -> EdgeworthSeries:
    w, h = econ.total1, econ.total2
    curves = (
        _curve(econ.utilityA, alloc_a, w, h, "A indifference", flip=False),
        _curve(econ.utilityB, alloc_b, w, h, "B indifference", flip=True),
    )
    candidates = [
        Marker("endowment", econ.endowA.good1, econ.endowA.good2),
        Marker("A bundle", alloc_a.c1, alloc_a.c2),
        Marker("B bundle", w - alloc_b.c1, h - alloc_b.c2),
    ]
    # bundles demanded off-equilibrium can lie outside the box
    markers = tuple(mk for mk in candidates
                    if -EDGE_TOL * w <= mk.x <= w * (1 + EDGE_TOL)
                    and -EDGE_TOL * h <= mk.y <= h * (1 + EDGE_TOL))
    return EdgeworthSeries(w, h, price, curves, _budget_line(price, econ.endowA, w, h), markers)


def series_csv(s: EdgeworthSeries) -> str:
    rows = ["series,label,x,y", f"box,box,{fmt(s.box_width)},{fmt(s.box_height)}"]
    for c in s.curves:
        rows += [f"curve,{c.label},{fmt(x)},{fmt(y)}" for x, y in c.points]
    rows += [f"budget,budget line,{fmt(x)},{fmt(y)}" for x, y in s.budget_line]
    rows += [f"marker,{m.label},{fmt(m.x)},{fmt(m.y)}" for m in s.markers]
    return "\n".join(rows) + "\n"


# --------------------------------------------------------------------------
# SVG

_SIZE = 480.0
_PAD = 40.0
_COLORS = {"A indifference": "#1f5fbf", "B indifference": "#2e8b3a"}


def render_svg(s: EdgeworthSeries) -> str:
    scale = _SIZE / max(s.box_width, s.box_height)
    bw, bh = s.box_width * scale, s.box_height * scale
    W, H = bw + 2 * _PAD, bh + 2 * _PAD

    def X(x):
        return fmt(_PAD + x * scale)

    def Y(y):
        return fmt(_PAD + bh - y * scale)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{fmt(W)}" '
        f'height="{fmt(H)}" viewBox="0 0 {fmt(W)} {fmt(H)}">',
        f'<title>Edgeworth box at p = {fmt(s.price)}</title>',
        f'<rect x="{X(0)}" y="{Y(s.box_height)}" width="{fmt(bw)}" height="{fmt(bh)}" '
        'fill="none" stroke="#000" stroke-width="1"/>',
        f'<text x="{X(0)}" y="{fmt(H - 12)}" font-size="12">O_A</text>',
        f'<text x="{X(s.box_width)}" y="{fmt(_PAD - 12)}" font-size="12">O_B</text>',
    ]
    (x0, y0), (x1, y1) = s.budget_line
    out.append(f'<line x1="{X(x0)}" y1="{Y(y0)}" x2="{X(x1)}" y2="{Y(y1)}" '
               'stroke="#c03030" stroke-width="1.5"/>')
    for c in s.curves:
        if not c.points:
            continue
        pts = " ".join(f"{X(x)},{Y(y)}" for x, y in c.points)
        out.append(f'<polyline points="{pts}" fill="none" '
                   f'stroke="{_COLORS.get(c.label, "#444")}" stroke-width="1.5"/>')
    for m in s.markers:
        out.append(f'<circle cx="{X(m.x)}" cy="{Y(m.y)}" r="4" fill="#000"/>')
        out.append(f'<text x="{fmt(_PAD + m.x * scale + 6)}" y="{fmt(_PAD + bh - m.y * scale - 6)}" '
                   f'font-size="11">{m.label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
