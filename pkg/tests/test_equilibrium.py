import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nceq.equilibrium import (
    analyze,
    classify_bd,
    classify_quadlog,
    interior_income_limit,
    scan_generic,
    z_cor,
    z_int,
)
from nceq.errors import DomainError, UnsupportedEconomy
from nceq.model import CRRA, EconomyAB, Endowment, LinearGood2, Outcome, QuadLog, WeightedLog
from nceq.special import candidate_prices, x_star

pos = st.floats(0.1, 10)


def econ(d, eA=(1, 1), eB=(0.8, 1), uA=None):
    return EconomyAB(Endowment(*eA), Endowment(*eB), uA or WeightedLog(0.5), QuadLog(d))


def test_ref_no_equilibrium_3b():
    c = classify_quadlog(econ(0.9))
    assert c.outcome is Outcome.NONE
    assert c.case == "3b"
    assert c.price is None and c.allocA is None and c.allocB is None
    r = c.report
    assert r.get("m_cor <= x*sqrt(D)").lhs == pytest.approx(3.4)
    assert r.get("m_cor <= x*sqrt(D)").rhs == pytest.approx(x_star() * math.sqrt(0.9))
    assert r.get("Q >= 4D").lhs == pytest.approx(3.853333, rel=1e-6)
    assert r.get("m_int >= x*sqrt(D)").lhs == pytest.approx(1.97607, rel=1e-5)


def test_corner_example():
    c = classify_quadlog(econ(4.0))
    assert c.outcome is Outcome.CORNER
    assert c.price == pytest.approx(2.6)
    assert (c.allocB.c1, c.allocB.c2) == pytest.approx((0.0, 3.4 / 2.6))
    assert (c.allocA.c1, c.allocA.c2) == pytest.approx((1.8, 1.8 / 2.6))


def test_interior_example():
    c = classify_quadlog(econ(0.3))
    assert c.outcome is Outcome.INTERIOR
    assert c.price == pytest.approx(0.52624, abs=5e-5)
    assert c.allocB.c1 == pytest.approx(1.03692, abs=5e-5)
    assert c.allocA.c1 == pytest.approx(0.76312, abs=5e-5)
    assert abs(c.allocA.c1 + c.allocB.c1 - 1.8) <= 1e-9
    assert abs(c.allocA.c2 + c.allocB.c2 - 2.0) <= 1e-9


def test_d_zero_price():
    c = classify_quadlog(econ(0.0))
    assert c.outcome is Outcome.INTERIOR
    assert c.price == pytest.approx(1 / 3)
    assert c.allocB.c2 == 0.0


def test_no_interior_on_the_decreasing_root():
    # the smaller root of F can clear the market only with B at a utility
    # minimum; at sqrt(D) = 1.1535 with unit endowments that is the only root
    c = classify_quadlog(econ(1.1535**2, (1, 1), (1, 1)))
    assert c.outcome is Outcome.NONE
    assert not c.report.get("pi_int <= E1/E2").satisfied


def test_boundary_is_flagged():
    # with e^A = (1, 1), e^B_2 = 1/2: m_cor = 2 e^B_1 + 1/2, set equal to x* sqrt(D)
    d = 4.0
    eB1 = (x_star() * math.sqrt(d) - 0.5) / 2
    e = econ(d, (1, 1), (eB1, 0.5))
    assert e.endowB.income(candidate_prices(e).pi_cor) == pytest.approx(x_star() * 2, rel=1e-14)
    c = classify_quadlog(e)
    assert c.outcome is Outcome.BOUNDARY
    assert c.nominal in (Outcome.CORNER, Outcome.NONE, Outcome.INTERIOR)
    assert c.report.get("m_cor <= x*sqrt(D)").near_boundary


def test_classify_requires_log_agent():
    with pytest.raises(UnsupportedEconomy):
        classify_quadlog(econ(1.0, uA=CRRA(1, 1, 0.5)))


def test_z_functions():
    e = econ(0.9)
    assert z_cor(e, 1.0) == pytest.approx(-0.8)
    assert z_cor(econ(4.0), 2.6) == pytest.approx(0.0, abs=1e-12)
    assert z_int(e, candidate_prices(e).pi_int) != pytest.approx(0.0, abs=1e-6)
    ei = econ(0.3)
    assert z_int(ei, classify_quadlog(ei).price) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(DomainError):
        z_int(econ(100.0), 0.01)


def test_z_int_at_branch_point():
    e = econ(0.9)
    p = 2 * math.sqrt(0.9) - 0.8
    while (0.8 + p) ** 2 < 3.6:
        p = math.nextafter(p, math.inf)
    m = 0.8 + p
    assert z_int(e, p) == pytest.approx((1 + p) / 2 + m / 2 - 1.8, abs=1e-7)


def test_scan_matches_classifier_examples():
    s = scan_generic(econ(0.9), 0.01, 100)
    assert not s.found
    s = scan_generic(econ(4.0), 0.01, 100)
    assert s.roots_corner == pytest.approx((2.6,), rel=1e-9)
    assert s.roots_interior == ()


def test_scan_points_precondition():
    with pytest.raises(ValueError):
        scan_generic(econ(1.0), 0.01, 100, points=100)


def test_bd_examples():
    c = classify_bd(Endowment(2, 1), Endowment(1, 1), 1.0)
    assert c.outcome is Outcome.INTERIOR
    assert c.price * 1.0 == pytest.approx(4 / 3)
    assert c.allocB.c1 == 3.0 and c.allocA.c1 == 0.0
    assert classify_bd(Endowment(2, 1), Endowment(1, 1), 5.0).outcome is Outcome.NONE


def test_bd_requires_increasing_root():
    # e1 = 1.5 < sqrt(3): B's demand at the clearing price is the smaller root
    c = classify_bd(Endowment(1, 1), Endowment(0.5, 1), 3.0)
    assert c.outcome is Outcome.NONE
    assert not c.report.get("e1^2 > D").satisfied


def test_interior_income_limit():
    assert interior_income_limit(econ(0.3)) == pytest.approx(1.3 + 0.6 / 2.6)
    d = 1.0
    e = econ(d, (2 * math.sqrt(d) - 1.0, 1), (0.5, 1))
    assert interior_income_limit(e) == pytest.approx(2 * math.sqrt(d))
    assert interior_income_limit(econ(1e-12)) == pytest.approx(1.3)


def test_analyze_dispatch():
    assert analyze(econ(4.0)).outcome is Outcome.CORNER
    bd = EconomyAB(Endowment(1, 1), Endowment(2, 1), LinearGood2(), QuadLog(1.0))
    assert analyze(bd).price == pytest.approx(4 / 3)
    crra = analyze(econ(4.0, uA=CRRA(1, 1, 0.5)))
    assert crra.outcome is Outcome.CORNER


@settings(max_examples=300, deadline=None)
@given(pos, pos, pos, pos, st.floats(0.01, 100))
def test_exclusive_and_clearing(a1, a2, b1, b2, d):
    e = econ(d, (a1, a2), (b1, b2))
    c = classify_quadlog(e)
    corner = [x for x in c.report.entries if x.name.startswith("m_cor")][0]
    interior_ok = all(x.satisfied for x in c.report.entries[1:]) and len(c.report.entries) == 4
    if not any(x.near_boundary for x in c.report.entries):
        assert not (corner.satisfied and interior_ok)
    if c.outcome in (Outcome.CORNER, Outcome.INTERIOR):
        assert abs(c.allocA.c1 + c.allocB.c1 - e.total1) <= 1e-9 * max(1, e.total1)
        assert abs(c.allocA.c2 + c.allocB.c2 - e.total2) <= 1e-9 * max(1, e.total2)


@settings(max_examples=40, deadline=None)
@given(pos, pos, pos, pos, st.floats(0.01, 100))
def test_classifier_matches_scanner(a1, a2, b1, b2, d):
    e = econ(d, (a1, a2), (b1, b2))
    c = classify_quadlog(e, boundary_rtol=1e-6)
    if c.outcome is Outcome.BOUNDARY:
        return
    pc = candidate_prices(e).pi_cor
    s = scan_generic(e, 1e-3 * pc, 1e3 * pc)
    roots = s.roots_corner + s.roots_interior
    assert (c.price is not None) == bool(roots)
    if roots:
        assert len(roots) == 1
        assert roots[0] == pytest.approx(c.price, rel=1e-6)


def test_corollary_limits_monotone():
    prices = [candidate_prices(econ(0.1, (1, a2))) for a2 in np.geomspace(1, 1e6, 7)]
    cors = [cp.pi_cor for cp in prices]
    ints = [cp.pi_int for cp in prices]
    assert all(x > y for x, y in zip(cors, cors[1:]))
    assert all(x > y for x, y in zip(ints, ints[1:]))
    assert cors[-1] < 1e-5 and ints[-1] < 1e-5
