import pytest

from nceq.equilibrium import classify_quadlog
from nceq.model import (
    CRRA,
    Bundle,
    EconomyAB,
    Endowment,
    LinearGood2,
    QuadLog,
    WeightedLog,
)
from nceq.oracle import brute_force_equilibria, default_price_range, verify_equilibrium


def econ(d, uA=None):
    return EconomyAB(Endowment(1, 1), Endowment(0.8, 1), uA or WeightedLog(0.5), QuadLog(d))


def test_ref_empty():
    assert brute_force_equilibria(econ(0.9), 0.01, 100, 10_000) == []


def test_corner_found():
    eqs = brute_force_equilibria(econ(4.0), 0.01, 100)
    assert len(eqs) == 1
    assert eqs[0].price == pytest.approx(2.6, rel=1e-9)
    assert eqs[0].allocB.c1 == 0.0


def test_interior_found():
    e = econ(0.3)
    eqs = brute_force_equilibria(e, *default_price_range(e))
    assert [x.price for x in eqs] == pytest.approx([classify_quadlog(e).price], rel=1e-9)


def test_bd_economy():
    e = EconomyAB(Endowment(1, 1), Endowment(2, 1), LinearGood2(), QuadLog(1.0))
    eqs = brute_force_equilibria(e, *default_price_range(e))
    assert len(eqs) == 1
    assert eqs[0].price * 1.0 == pytest.approx(4 / 3, rel=1e-9)


def test_crra_agent_matches_scan():
    e = econ(4.0, CRRA(1, 1, 0.5))
    eqs = brute_force_equilibria(e, 0.01, 100)
    assert [x.price for x in eqs] == pytest.approx([1.8], rel=1e-6)


def test_deterministic():
    e = econ(0.3)
    assert brute_force_equilibria(e, 0.01, 100) == brute_force_equilibria(e, 0.01, 100)


def test_points_precondition():
    with pytest.raises(ValueError):
        brute_force_equilibria(econ(1.0), 0.01, 100, 999)


def test_verify_corner_and_perturbation():
    e = econ(4.0)
    c = classify_quadlog(e)
    assert verify_equilibrium(e, c.price, c.allocA, c.allocB).verdict
    bad = Bundle(c.allocB.c1 + 0.01, c.allocB.c2)
    rep = verify_equilibrium(e, c.price, c.allocA, bad)
    assert not rep.verdict
    assert rep.marketClearing1 > 1e-3 and rep.budgetGapB > 1e-3


def test_verify_interior_optimality():
    e = econ(0.3)
    c = classify_quadlog(e)
    rep = verify_equilibrium(e, c.price, c.allocA, c.allocB)
    assert rep.optimalityGapB <= 1e-7
    assert rep.verdict


def test_verify_detects_suboptimal_bundle():
    # B's corner bundle at the interior price is affordable and clears nothing
    e = econ(0.3)
    c = classify_quadlog(e)
    m = e.endowB.income(c.price)
    rep = verify_equilibrium(e, c.price, c.allocA, Bundle(0.0, m / c.price))
    assert rep.optimalityGapB > 1e-3
    assert not rep.verdict
