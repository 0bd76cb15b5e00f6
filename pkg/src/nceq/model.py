"""Domain values for two-good, two-agent exchange economies.

Prices are always the relative price ``p = p2 / p1`` (good 2 priced in units of
good 1), so an agent's income is ``e1 + p * e2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, ClassVar, Iterator, Mapping, Union

import numpy as np

from .errors import (
    ConfigError,
    InvalidUtilityParam,
    NonPositiveEndowment,
    UnknownUtilityTag,
)

BUDGET_RTOL = 1e-9
BOUNDARY_RTOL = 1e-10


def _finite(name: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidUtilityParam(f"expected a number, got {value!r}", name)
    value = float(value)
    if not math.isfinite(value):
        raise InvalidUtilityParam(f"must be finite, got {value!r}", name)
    return value


@dataclass(frozen=True)
class Endowment:
    good1: float
    good2: float

    def __post_init__(self):
        for i, name in enumerate(("good1", "good2")):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise NonPositiveEndowment(f"expected a positive number, got {v!r}", f"[{i}]")
            if not (v > 0) or not math.isfinite(v):
                raise NonPositiveEndowment(f"must be > 0, got {v!r}", f"[{i}]")
            object.__setattr__(self, name, float(v))

    def income(self, p: float) -> float:
        return self.good1 + p * self.good2


@dataclass(frozen=True)
class Bundle:
    c1: float
    c2: float

    def __post_init__(self):
        if not (self.c1 >= 0 and self.c2 >= 0):
            raise ValueError(f"bundle must be nonnegative, got ({self.c1}, {self.c2})")
        object.__setattr__(self, "c1", float(self.c1))
        object.__setattr__(self, "c2", float(self.c2))

    def cost(self, p: float) -> float:
        return self.c1 + p * self.c2


# --------------------------------------------------------------------------
# utility families
#
# Each family knows its config tag, an integer ``kind`` used by the compiled
# argmax kernel, and how to evaluate itself on numpy arrays.  Boundary points
# where a log or negative power diverges evaluate to -inf.


def _power_term(coef: float, alpha: float, c):
    """coef * c**alpha / alpha, with the c = 0 limit taken explicitly."""
    c = np.asarray(c, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = coef * np.power(c, alpha) / alpha
    if alpha < 0:
        out = np.where(c > 0, out, -np.inf)
    return out


def _log(c):
    with np.errstate(divide="ignore"):
        return np.log(np.asarray(c, dtype=float))


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


@dataclass(frozen=True)
class WeightedLog:
    """lam * ln(c1) + (1 - lam) * ln(c2)."""

    lam: float = 0.5
    tag: ClassVar[str] = "weighted_log"
    kind: ClassVar[int] = 0

    def __post_init__(self):
        lam = _finite("lambda", self.lam)
        if not 0 < lam < 1:
            raise InvalidUtilityParam(f"must lie in (0, 1), got {lam}", "lambda")
        object.__setattr__(self, "lam", lam)

    def __call__(self, c1, c2):
        return _scalar(self.lam * _log(c1) + (1 - self.lam) * _log(c2))

    def params(self) -> tuple[float, ...]:
        return (self.lam,)

    def to_config(self) -> dict:
        return {"type": self.tag, "lambda": self.lam}


@dataclass(frozen=True)
class QuadLog:
    """c1**2 / 2 + d * ln(c2): convex in good 1, concave in good 2."""

    d: float
    tag: ClassVar[str] = "quad_log"
    kind: ClassVar[int] = 1

    def __post_init__(self):
        d = _finite("d", self.d)
        # d = 0 is kept only as the limiting case of the price formulas
        if d < 0:
            raise InvalidUtilityParam(f"must be >= 0, got {d}", "d")
        object.__setattr__(self, "d", d)

    def __call__(self, c1, c2):
        c1 = np.asarray(c1, dtype=float)
        out = 0.5 * c1 * c1
        if self.d > 0:
            out = out + self.d * _log(c2)
        return _scalar(out)

    def params(self) -> tuple[float, ...]:
        return (self.d,)

    def to_config(self) -> dict:
        return {"type": self.tag, "d": self.d}


@dataclass(frozen=True)
class CRRA:
    """a1 * c1**alpha / alpha + a2 * c2**alpha / alpha."""

    a1: float
    a2: float
    alpha: float
    tag: ClassVar[str] = "crra"
    kind: ClassVar[int] = 2

    def __post_init__(self):
        for name in ("a1", "a2"):
            v = _finite(name, getattr(self, name))
            if v <= 0:
                raise InvalidUtilityParam(f"must be > 0, got {v}", name)
            object.__setattr__(self, name, v)
        alpha = _finite("alpha", self.alpha)
        if not alpha < 1 or alpha == 0:
            raise InvalidUtilityParam(f"must satisfy alpha < 1 and alpha != 0, got {alpha}", "alpha")
        object.__setattr__(self, "alpha", alpha)

    def __call__(self, c1, c2):
        return _scalar(_power_term(self.a1, self.alpha, c1) + _power_term(self.a2, self.alpha, c2))

    def params(self) -> tuple[float, ...]:
        return (self.a1, self.a2, self.alpha)

    def to_config(self) -> dict:
        return {"type": self.tag, "a1": self.a1, "a2": self.a2, "alpha": self.alpha}


def _nonzero_pair(obj) -> None:
    for name in ("alpha1", "alpha2"):
        v = _finite(name, getattr(obj, name))
        if v == 0:
            raise InvalidUtilityParam("must be nonzero", name)
        object.__setattr__(obj, name, v)


@dataclass(frozen=True)
class CaraA:
    """-exp(-alpha1 c1) / alpha1 - gamma * exp(-alpha2 c2) / alpha2."""

    alpha1: float
    alpha2: float
    gamma: float
    tag: ClassVar[str] = "cara_a"
    kind: ClassVar[int] = 3

    def __post_init__(self):
        _nonzero_pair(self)
        gamma = _finite("gamma", self.gamma)
        if gamma <= 0:
            raise InvalidUtilityParam(f"must be > 0, got {gamma}", "gamma")
        object.__setattr__(self, "gamma", gamma)

    def __call__(self, c1, c2):
        c1 = np.asarray(c1, dtype=float)
        c2 = np.asarray(c2, dtype=float)
        return _scalar(
            -np.exp(-self.alpha1 * c1) / self.alpha1
            - self.gamma * np.exp(-self.alpha2 * c2) / self.alpha2
        )

    def params(self) -> tuple[float, ...]:
        return (self.alpha1, self.alpha2, self.gamma)

    def to_config(self) -> dict:
        return {"type": self.tag, "alpha1": self.alpha1, "alpha2": self.alpha2, "gamma": self.gamma}


@dataclass(frozen=True)
class CaraB:
    """exp(alpha1 c1) / alpha1 + d * exp(alpha2 c2) / alpha2."""

    alpha1: float
    alpha2: float
    d: float
    tag: ClassVar[str] = "cara_b"
    kind: ClassVar[int] = 4

    def __post_init__(self):
        _nonzero_pair(self)
        d = _finite("d", self.d)
        if d <= 0:
            raise InvalidUtilityParam(f"must be > 0, got {d}", "d")
        object.__setattr__(self, "d", d)

    def __call__(self, c1, c2):
        c1 = np.asarray(c1, dtype=float)
        c2 = np.asarray(c2, dtype=float)
        return _scalar(
            np.exp(self.alpha1 * c1) / self.alpha1 + self.d * np.exp(self.alpha2 * c2) / self.alpha2
        )

    def params(self) -> tuple[float, ...]:
        return (self.alpha1, self.alpha2, self.d)

    def to_config(self) -> dict:
        return {"type": self.tag, "alpha1": self.alpha1, "alpha2": self.alpha2, "d": self.d}


@dataclass(frozen=True)
class LinearGood2:
    """U = c2: the agent only values good 2."""

    tag: ClassVar[str] = "linear_good2"
    kind: ClassVar[int] = 5

    def __call__(self, c1, c2):
        return _scalar(np.asarray(c2, dtype=float) + 0.0 * np.asarray(c1, dtype=float))

    def params(self) -> tuple[float, ...]:
        return ()

    def to_config(self) -> dict:
        return {"type": self.tag}


@dataclass(frozen=True)
class PowerB:
    """c1**alpha1 / alpha1 + d * c2**alpha2 / alpha2 with alpha2 > 1 > alpha1.

    Has no closed-form demand; only the numeric argmax handles it.
    """

    alpha1: float
    alpha2: float
    d: float
    tag: ClassVar[str] = "power_b"
    kind: ClassVar[int] = 6

    def __post_init__(self):
        a1 = _finite("alpha1", self.alpha1)
        a2 = _finite("alpha2", self.alpha2)
        d = _finite("d", self.d)
        if not (a1 < 1 and a1 != 0):
            raise InvalidUtilityParam(f"must satisfy alpha1 < 1, alpha1 != 0, got {a1}", "alpha1")
        if not a2 > 1:
            raise InvalidUtilityParam(f"must be > 1, got {a2}", "alpha2")
        if d <= 0:
            raise InvalidUtilityParam(f"must be > 0, got {d}", "d")
        object.__setattr__(self, "alpha1", a1)
        object.__setattr__(self, "alpha2", a2)
        object.__setattr__(self, "d", d)

    def __call__(self, c1, c2):
        return _scalar(_power_term(1.0, self.alpha1, c1) + _power_term(self.d, self.alpha2, c2))

    def params(self) -> tuple[float, ...]:
        return (self.alpha1, self.alpha2, self.d)

    def to_config(self) -> dict:
        return {"type": self.tag, "alpha1": self.alpha1, "alpha2": self.alpha2, "d": self.d}


UtilitySpec = Union[WeightedLog, QuadLog, CRRA, CaraA, CaraB, LinearGood2, PowerB]

_FAMILIES: dict[str, tuple[type, dict[str, str]]] = {
    # config key -> dataclass field
    "weighted_log": (WeightedLog, {"lambda": "lam"}),
    "quad_log": (QuadLog, {"d": "d"}),
    "crra": (CRRA, {"a1": "a1", "a2": "a2", "alpha": "alpha"}),
    "cara_a": (CaraA, {"alpha1": "alpha1", "alpha2": "alpha2", "gamma": "gamma"}),
    "cara_b": (CaraB, {"alpha1": "alpha1", "alpha2": "alpha2", "d": "d"}),
    "linear_good2": (LinearGood2, {}),
    "power_b": (PowerB, {"alpha1": "alpha1", "alpha2": "alpha2", "d": "d"}),
}


def parse_utility(raw: Any) -> UtilitySpec:
    if not isinstance(raw, Mapping):
        raise UnknownUtilityTag(f"expected an object with a 'type' field, got {raw!r}")
    tag = raw.get("type")
    if tag not in _FAMILIES:
        raise UnknownUtilityTag(
            f"unknown utility type {tag!r}; expected one of {sorted(_FAMILIES)}", "type"
        )
    cls, keys = _FAMILIES[tag]
    kwargs = {}
    for key, attr in keys.items():
        if key not in raw:
            raise InvalidUtilityParam("missing parameter", key)
        kwargs[attr] = raw[key]
    extra = set(raw) - set(keys) - {"type"}
    if extra:
        raise InvalidUtilityParam(f"unexpected parameter(s) {sorted(extra)}", sorted(extra)[0])
    return cls(**kwargs)


@dataclass(frozen=True)
class EconomyAB:
    endowA: Endowment
    endowB: Endowment
    utilityA: UtilitySpec
    utilityB: UtilitySpec

    @property
    def total1(self) -> float:
        return self.endowA.good1 + self.endowB.good1

    @property
    def total2(self) -> float:
        return self.endowA.good2 + self.endowB.good2

    def to_config(self) -> dict:
        return {
            "agentA": {
                "endowment": [self.endowA.good1, self.endowA.good2],
                "utility": self.utilityA.to_config(),
            },
            "agentB": {
                "endowment": [self.endowB.good1, self.endowB.good2],
                "utility": self.utilityB.to_config(),
            },
        }


def _parse_agent(raw: Any, name: str) -> tuple[Endowment, UtilitySpec]:
    if not isinstance(raw, Mapping):
        raise ConfigError("expected an object", name)
    e = raw.get("endowment")
    if not isinstance(e, (list, tuple)) or len(e) != 2:
        raise NonPositiveEndowment("expected a list [e1, e2]", f"{name}.endowment")
    try:
        endow = Endowment(e[0], e[1])
    except ConfigError as exc:
        raise exc.at(f"{name}.endowment") from None
    if "utility" not in raw:
        raise UnknownUtilityTag("missing utility", f"{name}.utility")
    try:
        utility = parse_utility(raw["utility"])
    except ConfigError as exc:
        raise exc.at(f"{name}.utility") from None
    return endow, utility


def validate_economy(raw: Mapping | EconomyAB) -> EconomyAB:
    """Build an :class:`EconomyAB` from a parsed JSON config.

    Raises a :class:`ConfigError` subclass whose ``path`` names the bad field.
    Passing an existing economy re-validates it and returns an equal value.
    """
    if isinstance(raw, EconomyAB):
        raw = raw.to_config()
    if not isinstance(raw, Mapping):
        raise ConfigError("config must be a JSON object")
    for key in ("agentA", "agentB"):
        if key not in raw:
            raise ConfigError("missing agent", key)
    endowA, utilityA = _parse_agent(raw["agentA"], "agentA")
    endowB, utilityB = _parse_agent(raw["agentB"], "agentB")
    return EconomyAB(endowA, endowB, utilityA, utilityB)


# --------------------------------------------------------------------------
# demand sets and classification results


@dataclass(frozen=True)
class DemandSet:
    """One or two optimal bundles, ascending in c1."""

    bundles: tuple[Bundle, ...]

    def __post_init__(self):
        b = tuple(self.bundles)
        if not 1 <= len(b) <= 2:
            raise ValueError(f"a demand set holds 1 or 2 bundles, got {len(b)}")
        if len(b) == 2 and not b[0].c1 < b[1].c1:
            raise ValueError("bundles must be distinct and sorted ascending by c1")
        object.__setattr__(self, "bundles", b)

    @classmethod
    def on_budget(cls, c1_values, p: float, income: float) -> "DemandSet":
        """Bundles that exhaust the budget ``c1 + p c2 = income``."""
        out = []
        for c1 in sorted(float(c) for c in c1_values):
            c1 = min(max(c1, 0.0), income)
            out.append(Bundle(c1, max((income - c1) / p, 0.0)))
        return cls(tuple(out))

    def __len__(self) -> int:
        return len(self.bundles)

    def __iter__(self) -> Iterator[Bundle]:
        return iter(self.bundles)

    def __getitem__(self, i: int) -> Bundle:
        return self.bundles[i]

    @property
    def c1(self) -> tuple[float, ...]:
        return tuple(b.c1 for b in self.bundles)


class Outcome(str, Enum):
    CORNER = "corner"
    INTERIOR = "interior"
    NONE = "none"
    BOUNDARY = "boundary"


class Relation(str, Enum):
    LE = "<="
    GE = ">="
    LT = "<"
    GT = ">"

    def holds(self, lhs: float, rhs: float) -> bool:
        return {
            Relation.LE: lhs <= rhs,
            Relation.GE: lhs >= rhs,
            Relation.LT: lhs < rhs,
            Relation.GT: lhs > rhs,
        }[self]


def near(lhs: float, rhs: float, rtol: float = BOUNDARY_RTOL) -> bool:
    return abs(lhs - rhs) <= rtol * max(1.0, abs(lhs), abs(rhs))


@dataclass(frozen=True)
class Condition:
    name: str
    lhs: float
    rhs: float
    relation: Relation
    satisfied: bool
    near_boundary: bool = False

    @classmethod
    def check(cls, name: str, lhs: float, relation: Relation, rhs: float,
              rtol: float = BOUNDARY_RTOL) -> "Condition":
        return cls(name, float(lhs), float(rhs), relation,
                   relation.holds(lhs, rhs), near(lhs, rhs, rtol))


@dataclass(frozen=True)
class ConditionReport:
    entries: tuple[Condition, ...] = ()

    def __iter__(self) -> Iterator[Condition]:
        return iter(self.entries)

    def get(self, name: str) -> Condition:
        for c in self.entries:
            if c.name == name:
                return c
        raise KeyError(name)


@dataclass(frozen=True)
class Classification:
    """Equilibrium verdict for one economy.

    ``case`` carries the non-existence sub-case (``"3a"``/``"3b"``) or a short
    note; ``nominal`` is the verdict under exact arithmetic when ``outcome`` is
    ``BOUNDARY``.  ``alternatives`` lists further equilibrium prices found by
    the generic scanners.
    """

    outcome: Outcome
    price: float | None = None
    allocA: Bundle | None = None
    allocB: Bundle | None = None
    report: ConditionReport = field(default_factory=ConditionReport)
    case: str | None = None
    nominal: Outcome | None = None
    alternatives: tuple[float, ...] = ()

    def __post_init__(self):
        if self.outcome is Outcome.NONE and (
            self.price is not None or self.allocA is not None or self.allocB is not None
        ):
            raise ValueError("a non-existence verdict carries no price or allocation")
        if self.outcome is Outcome.CORNER and self.allocB is not None and self.allocB.c1 != 0:
            raise ValueError("corner equilibrium requires allocB.c1 == 0")
        if self.outcome is Outcome.INTERIOR and self.allocB is not None and not self.allocB.c1 > 0:
            raise ValueError("interior equilibrium requires allocB.c1 > 0")

    @property
    def has_equilibrium(self) -> bool:
        return self.price is not None
