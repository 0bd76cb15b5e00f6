import math

import numpy as np
import pytest

from nceq.errors import InvalidUtilityParam, NonPositiveEndowment, UnknownUtilityTag
from nceq.model import (
    CRRA,
    Bundle,
    CaraA,
    CaraB,
    Classification,
    Condition,
    DemandSet,
    EconomyAB,
    Endowment,
    Outcome,
    PowerB,
    QuadLog,
    Relation,
    WeightedLog,
    validate_economy,
)


def ref_raw(**over):
    raw = {
        "agentA": {"endowment": [1, 1], "utility": {"type": "weighted_log", "lambda": 0.5}},
        "agentB": {"endowment": [0.8, 1], "utility": {"type": "quad_log", "d": 0.9}},
    }
    raw.update(over)
    return raw


def test_validate_ref_config():
    econ = validate_economy(ref_raw())
    assert econ.endowA == Endowment(1.0, 1.0)
    assert econ.endowB == Endowment(0.8, 1.0)
    assert econ.utilityA == WeightedLog(0.5)
    assert econ.utilityB == QuadLog(0.9)
    assert econ.total1 == pytest.approx(1.8)


def test_validate_is_idempotent():
    econ = validate_economy(ref_raw())
    assert validate_economy(econ) == econ
    assert validate_economy(econ.to_config()) == econ


def test_zero_endowment_rejected_with_path():
    raw = ref_raw()
    raw["agentA"]["endowment"] = [0, 1]
    with pytest.raises(NonPositiveEndowment) as err:
        validate_economy(raw)
    assert err.value.path == "agentA.endowment[0]"


def test_negative_d_rejected():
    raw = ref_raw()
    raw["agentB"]["utility"] = {"type": "quad_log", "d": -1}
    with pytest.raises(InvalidUtilityParam) as err:
        validate_economy(raw)
    assert err.value.path.startswith("agentB.utility")


def test_unknown_tag():
    raw = ref_raw()
    raw["agentA"]["utility"] = {"type": "leontief"}
    with pytest.raises(UnknownUtilityTag):
        validate_economy(raw)


@pytest.mark.parametrize("utility", [
    {"type": "weighted_log", "lambda": 1.0},
    {"type": "weighted_log", "lambda": 0.5, "extra": 1},
    {"type": "crra", "a1": 1, "a2": 1, "alpha": 1.0},
    {"type": "crra", "a1": 1, "a2": 1, "alpha": 0.0},
    {"type": "crra", "a1": -1, "a2": 1, "alpha": 0.5},
    {"type": "cara_a", "alpha1": 0, "alpha2": 1, "gamma": 1},
    {"type": "cara_b", "alpha1": 1, "alpha2": 1, "d": 0},
    {"type": "quad_log"},
    {"type": "power_b", "alpha1": 1.5, "alpha2": 0.5, "d": 1},
    {"type": "quad_log", "d": True},
])
def test_bad_utility_params(utility):
    raw = ref_raw()
    raw["agentB"]["utility"] = utility
    with pytest.raises(InvalidUtilityParam):
        validate_economy(raw)


def test_quadlog_zero_allowed():
    assert QuadLog(0.0).d == 0.0


def test_power_b_accepts_valid():
    u = PowerB(0.5, 1.5, 1.0)
    assert math.isfinite(float(u(1.0, 1.0)))


def test_utilities_vectorise():
    c = np.array([0.5, 1.0, 2.0])
    for u in (WeightedLog(0.3), QuadLog(2.0), CRRA(1, 2, -0.5), CaraA(1, 2, 3), CaraB(1, 2, 3)):
        assert u(c, c).shape == (3,)


def test_log_utilities_are_minus_inf_at_zero():
    assert WeightedLog(0.5)(0.0, 1.0) == -math.inf
    assert QuadLog(1.0)(1.0, 0.0) == -math.inf


def test_demand_set_sorted_and_budget_exhausting():
    ds = DemandSet.on_budget([2.0, 0.0], 2.0, 4.0)
    assert ds.c1 == (0.0, 2.0)
    for b in ds:
        assert b.cost(2.0) == pytest.approx(4.0, rel=1e-12)


def test_demand_set_rejects_duplicates_and_sizes():
    with pytest.raises(ValueError):
        DemandSet((Bundle(1, 1), Bundle(1, 1)))
    with pytest.raises(ValueError):
        DemandSet(())
    with pytest.raises(ValueError):
        DemandSet((Bundle(0, 1), Bundle(1, 1), Bundle(2, 1)))


def test_condition_flags():
    c = Condition.check("x", 1.0, Relation.LE, 2.0)
    assert c.satisfied and not c.near_boundary
    c = Condition.check("x", 1.0 + 1e-12, Relation.LE, 1.0)
    assert not c.satisfied and c.near_boundary


def test_classification_invariants():
    with pytest.raises(ValueError):
        Classification(Outcome.NONE, price=1.0)
    with pytest.raises(ValueError):
        Classification(Outcome.CORNER, 1.0, Bundle(1, 1), Bundle(0.5, 1))
    with pytest.raises(ValueError):
        Classification(Outcome.INTERIOR, 1.0, Bundle(1, 1), Bundle(0.0, 1))


def test_endowment_income():
    assert Endowment(0.8, 1).income(2.6) == pytest.approx(3.4)


def test_economy_totals():
    e = EconomyAB(Endowment(1, 2), Endowment(3, 4), WeightedLog(), QuadLog(1))
    assert (e.total1, e.total2) == (4.0, 6.0)
