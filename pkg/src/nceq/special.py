"""Scalar functions behind the quad-log economy's closed forms.

``g`` locates agent B's switch income: B is indifferent between consuming no
good 1 and the interior optimum exactly when ``income / sqrt(D)`` equals the
root ``x_star`` of ``g``.  ``F`` is the quadratic in the relative price whose
smaller root clears the good-1 market at an interior equilibrium.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

from .errors import DomainError, UnsupportedEconomy
from .model import EconomyAB, Endowment, QuadLog

LN2 = math.log(2.0)


def g(x: float) -> float:
    if not x >= 2.0:
        raise DomainError(f"g is defined on [2, inf), got {x!r}")
    if math.isinf(x):
        return math.inf
    r = math.sqrt((x - 2.0) * (x + 2.0))
    u = 4.0 / (x * x)
    # ln(1 - sqrt(1 - u)) == ln(u) - ln(1 + sqrt(1 - u)); sqrt(1 - u) == r / x
    return (x + r) ** 2 / 8.0 + math.log(u) - math.log1p(r / x) - LN2


@functools.lru_cache(maxsize=None)
def x_star(tol: float = 1e-15) -> float:
    """Root of ``g`` on [2, 3] by bisection; ``g(2) < 0 < g(3)``."""
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    lo, hi = 2.0, 3.0
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return min((lo, hi), key=lambda x: abs(g(x)))
        gm = g(mid)
        if abs(gm) <= tol:
            return mid
        if gm < 0:
            lo = mid
        else:
            hi = mid


def switch_income(d: float) -> float:
    """Income at which a quad-log agent with weight ``d`` is indifferent."""
    return x_star() * math.sqrt(d)


def income_at(p: float, endow: Endowment) -> float:
    return endow.good1 + p * endow.good2


def _quadlog_d(econ: EconomyAB) -> float:
    if not isinstance(econ.utilityB, QuadLog):
        raise UnsupportedEconomy("agent B must have quad_log utility")
    return econ.utilityB.d


def quadratic_coefficients(econ: EconomyAB) -> tuple[float, float, float]:
    """(a, b, c) with ``F(X) = a X^2 - 2 b X + c``.

    a and c are written in factored form so that neither subtracts two
    nearly-equal squares when one agent's endowment dominates.
    """
    d = _quadlog_d(econ)
    eA, eB = econ.endowA, econ.endowB
    a = eA.good2 * (eA.good2 + 2.0 * eB.good2)
    b = econ.total1 * econ.total2 + eB.good1 * eB.good2
    c = eA.good1 * (eA.good1 + 2.0 * eB.good1) + 4.0 * d
    return a, b, c


def interior_existence_ratio(econ: EconomyAB) -> float:
    """The left side of ``Q >= 4D``; ``Q >= 4D`` iff the discriminant is >= 0."""
    eA, eB = econ.endowA, econ.endowB
    k = econ.total1 * eB.good2 + econ.total2 * eB.good1
    return k * k / (eA.good2 * (eA.good2 + 2.0 * eB.good2))


def discriminant(econ: EconomyAB) -> float:
    # b^2 - a c collapses to K^2 - 4 a D with K = E1 eB2 + E2 eB1
    d = _quadlog_d(econ)
    eB = econ.endowB
    a, _, _ = quadratic_coefficients(econ)
    k = econ.total1 * eB.good2 + econ.total2 * eB.good1
    return k * k - 4.0 * a * d


def F(econ: EconomyAB, X: float) -> float:
    a, b, c = quadratic_coefficients(econ)
    return (a * X - 2.0 * b) * X + c


def F_prime(econ: EconomyAB, X: float) -> float:
    a, b, _ = quadratic_coefficients(econ)
    return 2.0 * a * X - 2.0 * b


@dataclass(frozen=True)
class CandidatePrices:
    pi_cor: float
    delta: float
    pi_int: float | None
    x_star_price: float

    def __post_init__(self):
        if (self.pi_int is not None) != (self.delta >= 0):
            raise ValueError("pi_int is defined exactly when delta >= 0")


def corner_price(econ: EconomyAB) -> float:
    eA, eB = econ.endowA, econ.endowB
    return (2.0 * eB.good1 + eA.good1) / eA.good2


def smaller_root(a: float, b: float, c: float, delta: float) -> float:
    """Smaller root of ``a X^2 - 2 b X + c`` (b > 0) without cancellation."""
    return c / (b + math.sqrt(max(delta, 0.0)))


def candidate_prices(econ: EconomyAB) -> CandidatePrices:
    a, b, c = quadratic_coefficients(econ)
    delta = discriminant(econ)
    pi_int = smaller_root(a, b, c, delta) if delta >= 0 else None
    return CandidatePrices(
        pi_cor=corner_price(econ),
        delta=delta,
        pi_int=pi_int,
        x_star_price=b / a,
    )
