import math

import pytest

from nceq.demand import demand
from nceq.edgeworth import build_series, fmt, level_set, render_svg, series_csv
from nceq.equilibrium import classify_quadlog
from nceq.model import CRRA, EconomyAB, Endowment, QuadLog, WeightedLog


def econ(d, uA=None):
    return EconomyAB(Endowment(1, 1), Endowment(0.8, 1), uA or WeightedLog(0.5), QuadLog(d))


def inside(s, x, y):
    return 0 <= x <= s.box_width and 0 <= y <= s.box_height


def test_fmt():
    assert fmt(2.6) == "2.6"
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(-0.0) == "0"


@pytest.mark.parametrize("d", [0.3, 4.0])
def test_series_geometry(d):
    e = econ(d)
    c = classify_quadlog(e)
    s = build_series(e, c.price, c.allocA, c.allocB)
    for curve in s.curves:
        assert curve.points
        assert all(inside(s, x, y) for x, y in curve.points)
    assert all(inside(s, x, y) for x, y in s.budget_line)
    # anchors lie on their curves
    a_pts = dict(s.curves[0].points)
    assert a_pts[c.allocA.c1] == pytest.approx(c.allocA.c2, abs=1e-6)
    bx, by = s.box_width - c.allocB.c1, s.box_height - c.allocB.c2
    assert any(abs(x - bx) < 1e-9 and abs(y - by) < 1e-6 for x, y in s.curves[1].points)


def test_corner_marker_on_edge():
    e = econ(4.0)
    c = classify_quadlog(e)
    s = build_series(e, c.price, c.allocA, c.allocB)
    mk = {m.label: m for m in s.markers}
    assert mk["B bundle"].x == pytest.approx(s.box_width)


def test_budget_line_through_endowment():
    e = econ(4.0)
    c = classify_quadlog(e)
    s = build_series(e, c.price, c.allocA, c.allocB)
    (x0, y0), (x1, y1) = s.budget_line
    slope = (y1 - y0) / (x1 - x0)
    assert slope == pytest.approx(-1 / c.price)
    assert y0 + slope * (1.0 - x0) == pytest.approx(1.0)


def test_off_equilibrium_markers_stay_in_box():
    e = econ(0.9)
    a = demand(e.utilityA, 2.6, e.endowA)[0]
    b = demand(e.utilityB, 2.6, e.endowB)[0]
    s = build_series(e, 2.6, a, b)
    assert all(inside(s, m.x, m.y) for m in s.markers)
    assert "B bundle" not in {m.label for m in s.markers}


def test_level_set_fallback_matches_utility():
    u = CRRA(1, 2, 0.5)
    inv = level_set(u, float(u(1.0, 1.0)), 5.0)
    for c1 in (0.5, 1.0, 1.5):
        assert float(u(c1, inv(c1))) == pytest.approx(float(u(1.0, 1.0)), rel=1e-10)
    assert math.isnan(inv(100.0))


def test_svg_is_deterministic_and_well_formed():
    e = econ(0.3)
    c = classify_quadlog(e)
    s = build_series(e, c.price, c.allocA, c.allocB)
    svg = render_svg(s)
    assert svg == render_svg(build_series(e, c.price, c.allocA, c.allocB))
    assert svg.startswith("<?xml") and svg.rstrip().endswith("</svg>")
    assert svg.count("<polyline") == 2
    csv = series_csv(s)
    assert csv.splitlines()[0] == "series,label,x,y"
