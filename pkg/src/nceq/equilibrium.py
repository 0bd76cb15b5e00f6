"""Equilibrium existence for economies where agent B has quad-log utility.

Any equilibrium price either clears good 1 with B consuming none of it (the
corner branch, valid while B's income stays at or below the switch income
``x* sqrt(D)``) or clears it with B on its interior demand (valid at or above
the switch income).  :func:`classify_quadlog` decides which one holds in
closed form when agent A has equal-weight log utility; :func:`scan_generic`
searches both branches numerically for any single-valued agent A.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .demand import (
    demand,
    demand_linear_good2,
    demand_quadlog,
    demand_weighted_log,
    interior_c1,
)
from .errors import DomainError, MultiValuedAgentA, UnsupportedEconomy
from .model import (
    BOUNDARY_RTOL,
    Bundle,
    Classification,
    Condition,
    ConditionReport,
    DemandSet,
    EconomyAB,
    Endowment,
    LinearGood2,
    Outcome,
    QuadLog,
    Relation,
    WeightedLog,
)
from .oracle import brute_force_equilibria, default_price_range, oracle_classification
from .special import (
    candidate_prices,
    corner_price,
    interior_existence_ratio,
    switch_income,
    x_star,
)

COND_CORNER = "m_cor <= x*sqrt(D)"
COND_DISCRIMINANT = "Q >= 4D"
COND_INTERIOR = "m_int >= x*sqrt(D)"
COND_BRANCH = "pi_int <= E1/E2"


def _quadlog_d(econ: EconomyAB) -> float:
    if not isinstance(econ.utilityB, QuadLog):
        raise UnsupportedEconomy("agent B must have quad_log utility")
    return econ.utilityB.d


def _agent_a_c1(econ: EconomyAB, p: float) -> float:
    ds = demand(econ.utilityA, p, econ.endowA)
    if len(ds) != 1:
        raise MultiValuedAgentA(f"agent A demand is double-valued at p={p}: {ds.c1}")
    return ds[0].c1


def z_cor(econ: EconomyAB, p: float) -> float:
    """Good-1 excess demand when agent B buys none of good 1."""
    return _agent_a_c1(econ, p) - econ.total1


def z_int(econ: EconomyAB, p: float) -> float:
    """Good-1 excess demand with agent B on its interior demand."""
    d = _quadlog_d(econ)
    m = econ.endowB.income(p)
    if m * m < 4.0 * d:
        raise DomainError(f"B's income {m} is below 2*sqrt(D) at p={p}")
    return _agent_a_c1(econ, p) + interior_c1(m, d) - econ.total1


def interior_income_limit(econ: EconomyAB) -> float:
    """Limit of B's income at the interior price as B's good-2 endowment grows."""
    d = _quadlog_d(econ)
    s = econ.endowA.good1 + 2.0 * econ.endowB.good1
    return s / 2.0 + 2.0 * d / s


# --------------------------------------------------------------------------
# closed-form classifier


def _verdict(corner: bool, disc: bool, interior: bool, branch: bool) -> Outcome:
    if corner:
        return Outcome.CORNER
    if disc and interior and branch:
        return Outcome.INTERIOR
    return Outcome.NONE


def _select(ds: DemandSet, other_c1: float, total1: float) -> Bundle:
    # at a double-valued point both bundles are optimal; pick the one that clears
    return min(ds, key=lambda b: abs(other_c1 + b.c1 - total1))


def _allocate(econ: EconomyAB, p: float, lam: float) -> tuple[Bundle, Bundle]:
    a = demand_weighted_log(lam, p, econ.endowA)[0]
    ds, _ = demand_quadlog(econ.utilityB.d, p, econ.endowB)
    return a, _select(ds, a.c1, econ.total1)


def classify_quadlog(econ: EconomyAB, boundary_rtol: float = BOUNDARY_RTOL) -> Classification:
    """Closed-form verdict for log agent A against quad-log agent B.

    Conditions that lie within ``boundary_rtol`` of equality are treated as
    undecided; if flipping them could change the verdict, the outcome is
    ``BOUNDARY`` and ``nominal`` holds the verdict under exact comparison.
    """
    if not (isinstance(econ.utilityA, WeightedLog) and econ.utilityA.lam == 0.5):
        raise UnsupportedEconomy("agent A must have weighted_log utility with lambda = 0.5")
    d = _quadlog_d(econ)
    eA, eB = econ.endowA, econ.endowB

    if d == 0:
        p = eA.good1 / (2.0 * eB.good2 + eA.good2)
        a, b = _allocate(econ, p, 0.5)
        return Classification(Outcome.INTERIOR, p, a, b, ConditionReport(), case="D = 0")

    cp = candidate_prices(econ)
    thr = switch_income(d)
    m_cor = eB.income(cp.pi_cor)
    q = interior_existence_ratio(econ)
    entries = [
        Condition.check(COND_CORNER, m_cor, Relation.LE, thr, boundary_rtol),
        Condition.check(COND_DISCRIMINANT, q, Relation.GE, 4.0 * d, boundary_rtol),
    ]
    # with the discriminant undecided, evaluate the interior price at delta = 0
    pi_int = cp.pi_int
    if pi_int is None and entries[1].near_boundary:
        pi_int = cp.x_star_price
    if pi_int is not None:
        entries.append(Condition.check(COND_INTERIOR, eB.income(pi_int), Relation.GE, thr,
                                       boundary_rtol))
        # F's roots also solve the clearing condition with B on the smaller
        # stationary point (a utility minimum); B is on the larger one iff
        # the price is at most E1/E2
        entries.append(Condition.check(COND_BRANCH, pi_int, Relation.LE,
                                       econ.total1 / econ.total2, boundary_rtol))
    report = ConditionReport(tuple(entries))

    flags = [c.satisfied for c in entries] + [False] * (4 - len(entries))
    nominal = _verdict(*flags)
    choices = [(True, False) if c.near_boundary else (c.satisfied,) for c in entries]
    choices += [(False,)] * (4 - len(entries))
    verdicts = {_verdict(*combo) for combo in itertools.product(*choices)}

    price = None
    if nominal is Outcome.CORNER:
        price = cp.pi_cor
    elif nominal is Outcome.INTERIOR:
        price = pi_int

    case = None
    if nominal is Outcome.NONE:
        case = "3b" if flags[1] else "3a"

    if len(verdicts) > 1:
        a = b = None
        if price is not None:
            a, b = _allocate(econ, price, 0.5)
        return Classification(Outcome.BOUNDARY, price, a, b, report, case=case, nominal=nominal)
    if price is None:
        return Classification(Outcome.NONE, report=report, case=case)
    a, b = _allocate(econ, price, 0.5)
    return Classification(nominal, price, a, b, report)


# --------------------------------------------------------------------------
# economy with a linear (good-2 only) agent D


def classify_bd(eB: Endowment, eD: Endowment, d: float,
                boundary_rtol: float = BOUNDARY_RTOL) -> Classification:
    """Quad-log agent B trading with agent D whose utility is ``c2``.

    D never buys good 1, so B must hold all of it: ``c1_B = e1`` where
    ``e1 = eB1 + eD1``.  The clearing price solves
    ``eB2 X = (eD1 e1 + D) / e1`` and is valid iff ``e1^2 > D`` (B on the
    increasing root) and ``e1 + D / e1 >= x* sqrt(D)`` (B prefers the
    interior bundle at that income).  ``allocA`` holds agent D's bundle.
    """
    if not d > 0:
        raise ValueError(f"D must be positive, got {d}")
    e1 = eB.good1 + eD.good1
    thr = switch_income(d)
    m_b = e1 + d / e1
    entries = (
        Condition.check("e1^2 > D", e1 * e1, Relation.GT, d, boundary_rtol),
        Condition.check("e1 + D/e1 >= x*sqrt(D)", m_b, Relation.GE, thr, boundary_rtol),
    )
    report = ConditionReport(entries)
    ok = all(c.satisfied for c in entries)
    ambiguous = any(c.near_boundary for c in entries) and (
        ok or all(c.satisfied or c.near_boundary for c in entries)
    )
    price = (eD.good1 * e1 + d) / (e1 * eB.good2) if ok else None
    a = b = None
    if price is not None:
        a = demand_linear_good2(price, eD)[0]
        m = eB.income(price)
        b = Bundle(e1, max(m - e1, 0.0) / price)
    if ambiguous:
        return Classification(Outcome.BOUNDARY, price, a, b, report,
                              nominal=Outcome.INTERIOR if ok else Outcome.NONE)
    if not ok:
        return Classification(Outcome.NONE, report=report)
    return Classification(Outcome.INTERIOR, price, a, b, report)


# --------------------------------------------------------------------------
# generic two-branch scanner


@dataclass(frozen=True)
class ScanResult:
    roots_corner: tuple[float, ...]
    roots_interior: tuple[float, ...]
    p_min: float
    p_max: float
    points: int

    @property
    def found(self) -> bool:
        return bool(self.roots_corner or self.roots_interior)


def _bisect(f, lo: float, hi: float, flo: float, rtol: float = 1e-10) -> float:
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _branch_roots(f, grid: np.ndarray) -> list[float]:
    vals = []
    for p in grid:
        try:
            vals.append(f(p))
        except DomainError:
            vals.append(math.nan)
    roots = []
    for i in range(len(grid) - 1):
        a, b = vals[i], vals[i + 1]
        if math.isnan(a) or math.isnan(b):
            continue
        if a == 0:
            roots.append(float(grid[i]))
        elif (a < 0) != (b < 0) and b != 0:
            roots.append(_bisect(f, float(grid[i]), float(grid[i + 1]), a))
    if vals and vals[-1] == 0:
        roots.append(float(grid[-1]))
    return roots


def scan_generic(econ: EconomyAB, p_min: float, p_max: float, points: int = 10_000) -> ScanResult:
    """Scan both market-clearing branches on a log-spaced price grid."""
    d = _quadlog_d(econ)
    if not 0 < p_min < p_max:
        raise ValueError("need 0 < p_min < p_max")
    if points < 10_000:
        raise ValueError(f"points must be >= 10^4, got {points}")
    grid = np.geomspace(p_min, p_max, points)
    eB = econ.endowB
    # include the price where the interior branch becomes defined
    p_dom = (2.0 * math.sqrt(d) - eB.good1) / eB.good2
    if p_min < p_dom < p_max:
        grid = np.unique(np.append(grid, p_dom))
    thr = switch_income(d)
    tol = BOUNDARY_RTOL * max(1.0, thr)

    corner = [r for r in _branch_roots(lambda p: z_cor(econ, p), grid)
              if eB.income(r) <= thr + tol]
    interior = [r for r in _branch_roots(lambda p: z_int(econ, p), grid)
                if eB.income(r) >= thr - tol]
    return ScanResult(tuple(corner), tuple(interior), p_min, p_max, points)


def scan_to_classification(econ: EconomyAB, scan: ScanResult) -> Classification:
    roots = sorted([(r, Outcome.CORNER) for r in scan.roots_corner]
                   + [(r, Outcome.INTERIOR) for r in scan.roots_interior])
    entries = tuple(
        Condition.check(f"{kind.value} root at p={r:.12g}",
                        abs(z_cor(econ, r) if kind is Outcome.CORNER else z_int(econ, r)),
                        Relation.LE, 1e-8)
        for r, kind in roots
    )
    report = ConditionReport(entries)
    if not roots:
        return Classification(Outcome.NONE, report=report, case="no root on scanned range")
    p, kind = roots[0]
    a = demand(econ.utilityA, p, econ.endowA)[0]
    b_set, _ = demand_quadlog(econ.utilityB.d, p, econ.endowB)
    b = min(b_set, key=lambda x: x.c1) if kind is Outcome.CORNER else max(b_set, key=lambda x: x.c1)
    return Classification(kind, p, a, b, report, alternatives=tuple(r for r, _ in roots[1:]))


# --------------------------------------------------------------------------
# dispatch


def analyze(econ: EconomyAB) -> Classification:
    """Classify with the most specific routine available for the economy."""
    uA, uB = econ.utilityA, econ.utilityB
    if isinstance(uB, QuadLog):
        if isinstance(uA, WeightedLog) and uA.lam == 0.5:
            return classify_quadlog(econ)
        if isinstance(uA, LinearGood2) and uB.d > 0:
            return classify_bd(econ.endowB, econ.endowA, uB.d)
        if not isinstance(uA, (QuadLog, LinearGood2)) and uB.d > 0:
            lo, hi = default_price_range(econ)
            return scan_to_classification(econ, scan_generic(econ, lo, hi))
    lo, hi = default_price_range(econ)
    return oracle_classification(econ, brute_force_equilibria(econ, lo, hi, 10_000))
