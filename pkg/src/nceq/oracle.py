"""Brute-force equilibrium search and equilibrium audits.

Everything here runs on the numeric budget-line argmax only.  No closed-form
demand and no classifier logic is used, so agreement with the closed forms is
evidence rather than tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .demand import argmax_arrays
from .model import (
    Bundle,
    Classification,
    Condition,
    ConditionReport,
    EconomyAB,
    Outcome,
    Relation,
)

CLEARING_TOL = 1e-9
BUDGET_TOL = 1e-9
OPTIMALITY_TOL = 1e-7
MERGE_RTOL = 1e-6
SUBDIVISIONS = 32
ROOT_RTOL = 1e-14


@dataclass(frozen=True)
class OracleEquilibrium:
    price: float
    allocA: Bundle
    allocB: Bundle


def default_price_range(econ: EconomyAB) -> tuple[float, float]:
    """A price window built from endowments alone.

    Two decades beyond the extreme ratios of any good-1 holding to any good-2
    holding, which contains every equilibrium of the families handled here.
    """
    e1 = [econ.endowA.good1, econ.endowB.good1]
    e2 = [econ.endowA.good2, econ.endowB.good2]
    return 1e-2 * min(e1) / econ.total2, 1e2 * econ.total1 / min(e2)


class _Excess:
    """Good-1 excess demand for every selection pair, over arrays of prices."""

    def __init__(self, econ: EconomyAB, grid_n: int, iters: int):
        self.econ = econ
        self.grid_n = grid_n
        self.iters = iters

    def demands(self, prices: np.ndarray):
        e = self.econ
        a = argmax_arrays(e.utilityA, prices, e.endowA, self.grid_n, self.iters)
        b = argmax_arrays(e.utilityB, prices, e.endowB, self.grid_n, self.iters)
        return a, b

    def envelope(self, prices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Smallest and largest excess over the selection pairs at each price."""
        (ca, _, na), (cb, _, nb) = self.demands(prices)
        total = self.econ.total1
        mn = np.full(len(prices), np.nan)
        mx = np.full(len(prices), np.nan)
        for i in range(2):
            for j in range(2):
                ok = (na > i) & (nb > j)
                z = ca[:, i] + cb[:, j] - total
                mn = np.where(ok, np.fmin(mn, z), mn)
                mx = np.where(ok, np.fmax(mx, z), mx)
        return mn, mx

    def best_pair(self, p: float) -> tuple[float, float, float]:
        """Selection pair closest to clearing at ``p``: (|excess|, cA1, cB1)."""
        (ca, _, na), (cb, _, nb) = self.demands(np.array([p]))
        total = self.econ.total1
        best = (math.inf, math.nan, math.nan)
        for i in range(int(na[0])):
            for j in range(int(nb[0])):
                z = abs(ca[0, i] + cb[0, j] - total)
                if z < best[0]:
                    best = (z, float(ca[0, i]), float(cb[0, j]))
        return best


def _straddles(mn, mx, i: int, j: int) -> bool:
    # sign change along the low or the high selection branch; comparing one
    # branch against the other would flag every step of a double-valued
    # stretch, which near the switch income spans many neighbouring prices
    if np.isnan(mn[i]) or np.isnan(mn[j]):
        return False
    return mn[i] * mn[j] <= 0 or mx[i] * mx[j] <= 0


def _refine(ex: _Excess, lo: float, hi: float) -> list[float]:
    """Multisection of a straddling interval down to ``ROOT_RTOL`` width."""
    out = []
    stack = [(lo, hi)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo <= ROOT_RTOL * hi:
            out.append((lo, hi))
            continue
        ps = np.geomspace(lo, hi, SUBDIVISIONS + 2)
        ps[0], ps[-1] = lo, hi
        mn, mx = ex.envelope(ps)
        found = [(float(ps[k]), float(ps[k + 1])) for k in range(len(ps) - 1)
                 if _straddles(mn, mx, k, k + 1)]
        # a kink can straddle on both sides of a grid point; keep every piece
        stack.extend(reversed(found))
    return out


def brute_force_equilibria(econ: EconomyAB, p_min: float, p_max: float, points: int = 10_000,
                           tol: float = 1e-9, grid_n: int = 1001,
                           refine_iters: int = 40) -> list[OracleEquilibrium]:
    """All good-1 market-clearing prices on ``[p_min, p_max]`` found by scanning.

    Sign changes of the excess demand (for any selection from the demand
    sets) between neighbouring grid prices are narrowed by multisection; a
    bracket is accepted as a root only if the excess at its ends is within
    ``tol * max(1, E1)``, which rejects the jumps at B's switch income.
    """
    if points < 10_000:
        raise ValueError(f"points must be >= 10^4, got {points}")
    if not 0 < p_min < p_max:
        raise ValueError("need 0 < p_min < p_max")
    ex = _Excess(econ, grid_n, refine_iters)
    grid = np.geomspace(p_min, p_max, points)
    mn, mx = ex.envelope(grid)
    accept = tol * max(1.0, econ.total1)

    brackets = []
    for i in range(points - 1):
        if _straddles(mn, mx, i, i + 1):
            brackets.extend(_refine(ex, float(grid[i]), float(grid[i + 1])))

    roots: list[OracleEquilibrium] = []
    for lo, hi in brackets:
        cands = [ex.best_pair(lo), ex.best_pair(hi)]
        k = 0 if cands[0][0] <= cands[1][0] else 1
        z, ca1, cb1 = cands[k]
        if not z <= accept:
            continue
        p = (lo, hi)[k]
        if roots and abs(p - roots[-1].price) <= MERGE_RTOL * p:
            continue
        roots.append(OracleEquilibrium(p, _on_budget(ca1, p, econ.endowA.income(p)),
                                       _on_budget(cb1, p, econ.endowB.income(p))))
    return roots


def _on_budget(c1: float, p: float, m: float) -> Bundle:
    return Bundle(c1, max(m - c1, 0.0) / p)


def oracle_classification(econ: EconomyAB, eqs: list[OracleEquilibrium]) -> Classification:
    """Wrap oracle equilibria as a classification (lowest price first)."""
    entries = tuple(
        Condition.check(f"clearing at p={e.price:.12g}",
                        abs(e.allocA.c1 + e.allocB.c1 - econ.total1), Relation.LE,
                        CLEARING_TOL * max(1.0, econ.total1))
        for e in eqs
    )
    report = ConditionReport(entries)
    if not eqs:
        return Classification(Outcome.NONE, report=report, case="no root on scanned range")
    e = eqs[0]
    kind = Outcome.CORNER if e.allocB.c1 == 0 else Outcome.INTERIOR
    return Classification(kind, e.price, e.allocA, e.allocB, report,
                          alternatives=tuple(x.price for x in eqs[1:]))


# --------------------------------------------------------------------------
# audits


@dataclass(frozen=True)
class VerificationReport:
    marketClearing1: float
    marketClearing2: float
    budgetGapA: float
    budgetGapB: float
    optimalityGapA: float
    optimalityGapB: float
    verdict: bool


def _max_utility(utility, p: float, endow, grid_n: int) -> float:
    _, u, n = argmax_arrays(utility, np.array([p]), endow, grid_n, 60)
    return float(np.max(u[0, : n[0]])) if n[0] else -math.inf


def verify_equilibrium(econ: EconomyAB, price: float, allocA: Bundle, allocB: Bundle,
                       grid_n: int = 100_000) -> VerificationReport:
    """Audit a claimed equilibrium against the defining conditions.

    Clearing gaps are absolute; budget gaps are relative to income; an
    optimality gap is the numeric maximum utility minus the utility of the
    given bundle (negative when the bundle beats the grid search).
    """
    clear1 = abs(allocA.c1 + allocB.c1 - econ.total1)
    clear2 = abs(allocA.c2 + allocB.c2 - econ.total2)
    gaps = []
    opt = []
    for endow, util, alloc in ((econ.endowA, econ.utilityA, allocA),
                               (econ.endowB, econ.utilityB, allocB)):
        m = endow.income(price)
        gaps.append(abs(alloc.cost(price) - m) / m)
        opt.append(_max_utility(util, price, endow, grid_n) - float(util(alloc.c1, alloc.c2)))
    verdict = (
        clear1 <= CLEARING_TOL and clear2 <= CLEARING_TOL
        and gaps[0] <= BUDGET_TOL and gaps[1] <= BUDGET_TOL
        and opt[0] <= OPTIMALITY_TOL and opt[1] <= OPTIMALITY_TOL
    )
    return VerificationReport(clear1, clear2, gaps[0], gaps[1], opt[0], opt[1], bool(verdict))
