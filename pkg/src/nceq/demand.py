"""Demand correspondences for every utility family.

All functions take the relative price ``p = p2 / p1`` and an endowment, and
return a :class:`DemandSet` whose bundles exhaust the budget
``c1 + p c2 = e1 + p e2``.  :func:`demand_numeric` is the grid-and-refine
argmax that the closed forms are audited against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _argmax
from .errors import DomainError, InconsistentCase
from .model import (
    BOUNDARY_RTOL,
    CRRA,
    Bundle,
    CaraA,
    CaraB,
    DemandSet,
    Endowment,
    LinearGood2,
    PowerB,
    QuadLog,
    UtilitySpec,
    WeightedLog,
)
from .special import x_star


def _check_price(p: float) -> float:
    if not (p > 0) or not math.isfinite(p):
        raise ValueError(f"relative price must be positive and finite, got {p!r}")
    return float(p)


def _single(c1: float, p: float, m: float) -> DemandSet:
    return DemandSet.on_budget([c1], p, m)


def demand_weighted_log(lam: float, p: float, endow: Endowment) -> DemandSet:
    p = _check_price(p)
    m = endow.income(p)
    return DemandSet((Bundle(lam * m, (1.0 - lam) * m / p),))


# --------------------------------------------------------------------------
# quad-log agent


class Branch(str, Enum):
    ZERO_ONLY = "zero_only"
    DOUBLE = "double"
    INTERIOR_ONLY = "interior_only"


@dataclass(frozen=True)
class QuadLogBranch:
    tag: Branch
    income: float
    threshold: float


def interior_c1(m: float, d: float) -> float:
    """Larger root of ``c1^2 - m c1 + d = 0`` (requires m >= 2 sqrt(d))."""
    s = 2.0 * math.sqrt(d)
    if m < s:
        raise DomainError(f"income {m} below 2*sqrt(D) = {s}")
    return 0.5 * (m + math.sqrt((m - s) * (m + s)))


def quadlog_branch(d: float, m: float) -> QuadLogBranch:
    thr = x_star() * math.sqrt(d)
    if d > 0 and abs(m - thr) <= BOUNDARY_RTOL * max(1.0, m):
        tag = Branch.DOUBLE
    elif m < thr:
        tag = Branch.ZERO_ONLY
    else:
        tag = Branch.INTERIOR_ONLY
    return QuadLogBranch(tag, m, thr)


def demand_quadlog(d: float, p: float, endow: Endowment) -> tuple[DemandSet, QuadLogBranch]:
    p = _check_price(p)
    if d < 0:
        raise ValueError(f"D must be >= 0, got {d}")
    m = endow.income(p)
    br = quadlog_branch(d, m)
    if d == 0:
        # only good 1 has value: spend everything on it
        return DemandSet((Bundle(m, 0.0),)), br
    corner = Bundle(0.0, m / p)
    if br.tag is Branch.ZERO_ONLY:
        return DemandSet((corner,)), br
    c1 = interior_c1(m, d)
    inner = Bundle(c1, max(m - c1, 0.0) / p)
    if br.tag is Branch.DOUBLE:
        return DemandSet((corner, inner)), br
    return DemandSet((inner,)), br


def v_switch(w: float, d: float) -> float:
    """Utility of the interior optimum minus that of the c1 = 0 corner.

    Evaluated at ``p1 = 1``: positive exactly when the interior bundle is
    strictly preferred.
    """
    if not w * w > 4.0 * d:
        raise DomainError(f"need w^2 > 4D, got w={w}, D={d}")
    s = 2.0 * math.sqrt(d)
    r = math.sqrt((w - s) * (w + s))
    big = 0.5 * (w + r)
    small = d / big  # (w - r) / 2 without cancellation
    return 0.5 * big * big + d * math.log(small) - d * math.log(w)


# --------------------------------------------------------------------------
# other families


def demand_crra(a1: float, a2: float, alpha: float, p: float, endow: Endowment) -> DemandSet:
    p = _check_price(p)
    m = endow.income(p)
    k = 1.0 / (1.0 - alpha)
    # share of income on good 1, computed in logs to avoid overflow
    l1 = k * math.log(a1) + alpha * k * math.log(p)
    l2 = k * math.log(a2)
    share = 1.0 / (1.0 + math.exp(l2 - l1)) if l2 - l1 < 700 else 0.0
    return _single(m * share, p, m)


def demand_cara_A(alpha1: float, alpha2: float, gamma: float, p: float,
                  endow: Endowment) -> DemandSet:
    """Piecewise demand of the exponential agent A.

    Raises :class:`InconsistentCase` when no case applies, or when several
    apply with different answers (the formula's cases are exclusive only when
    the budget-line profile is single-peaked).
    """
    p = _check_price(p)
    m = endow.income(p)
    lg = math.log(gamma) - math.log(p)
    hits: list[float] = []
    if alpha2 * m <= p * lg:
        hits.append(0.0)
    if alpha1 * m + lg <= 0:
        hits.append(m)
    denom = alpha2 + p * alpha1
    if denom != 0:
        c1_star = (alpha2 * m - p * lg) / denom
        if 0.0 < c1_star < m:
            hits.append(c1_star)
    if not hits:
        raise InconsistentCase(f"no case applies at p={p}, income={m}")
    if max(hits) - min(hits) > 1e-12 * max(1.0, m):
        raise InconsistentCase(f"cases disagree at p={p}: {hits}")
    return _single(hits[0], p, m)


def demand_cara_B(alpha1: float, alpha2: float, d: float, p: float,
                  endow: Endowment) -> DemandSet:
    """Demand of the exponential agent B, by the sign of alpha1 + alpha2 / p.

    The stationary point solves ``(alpha1 + alpha2/p) c1 = alpha2 m / p + ln(D/p)``.
    A whole-interval solution is reported by its two endpoints.
    """
    p = _check_price(p)
    m = endow.income(p)
    k = alpha1 + alpha2 / p
    rhs = alpha2 * m / p + math.log(d / p)

    def f(c1: float) -> float:
        return math.exp(alpha1 * c1) / alpha1 + d * math.exp(alpha2 * (m - c1) / p) / alpha2

    if abs(k) <= 1e-14 * (abs(alpha1) + abs(alpha2 / p)):
        if abs(rhs) <= 1e-14 * max(1.0, abs(alpha2 * m / p)):
            return DemandSet.on_budget([0.0, m], p, m)
        return _single(m if rhs < 0 else 0.0, p, m)

    c1_star = rhs / k
    if k > 0:
        if c1_star <= 0:
            return _single(m, p, m)
        if c1_star >= m:
            return _single(0.0, p, m)
        f0, fm = f(0.0), f(m)
        if math.isclose(f0, fm, rel_tol=1e-12, abs_tol=1e-12):
            return DemandSet.on_budget([0.0, m], p, m)
        return _single(0.0 if f0 > fm else m, p, m)
    if c1_star <= 0:
        return _single(0.0, p, m)
    if c1_star >= m:
        return _single(m, p, m)
    return _single(c1_star, p, m)


def demand_linear_good2(p: float, endow: Endowment) -> DemandSet:
    p = _check_price(p)
    m = endow.income(p)
    return DemandSet((Bundle(0.0, m / p),))


# --------------------------------------------------------------------------
# numeric argmax


def _kernel_params(utility: UtilitySpec) -> np.ndarray:
    prm = np.zeros(3)
    vals = utility.params()
    prm[: len(vals)] = vals
    return prm


def argmax_arrays(utility: UtilitySpec, prices, endow: Endowment, grid_n: int = 1001,
                  refine_iters: int = 40):
    """Vectorised numeric demand over many prices.

    Returns ``(c1, u, n)``: arrays of shape (P, 2), (P, 2), (P,) holding the
    good-1 demand of each maximizer, its utility, and the number of
    maximizers (1 or 2) at each price.
    """
    if grid_n < 1000:
        raise ValueError(f"grid_n must be >= 1000, got {grid_n}")
    if refine_iters < 20:
        raise ValueError(f"refine_iters must be >= 20, got {refine_iters}")
    prices = np.ascontiguousarray(prices, dtype=float)
    n_p = prices.shape[0]
    c1 = np.full((n_p, 2), np.nan)
    u = np.full((n_p, 2), np.nan)
    n = np.zeros(n_p, dtype=np.int64)
    _argmax.argmax_batch(utility.kind, _kernel_params(utility), prices, endow.good1,
                         endow.good2, int(grid_n), int(refine_iters), c1, u, n)
    return c1, u, n


def demand_numeric(utility: UtilitySpec, p: float, endow: Endowment, grid_n: int = 1001,
                   refine_iters: int = 40) -> DemandSet:
    p = _check_price(p)
    c1, _, n = argmax_arrays(utility, np.array([p]), endow, grid_n, refine_iters)
    if n[0] == 0:
        raise ArithmeticError(f"utility is -inf along the whole budget line at p={p}")
    return DemandSet.on_budget(c1[0, : n[0]], p, endow.income(p))


def utility_value(utility: UtilitySpec, bundle: Bundle) -> float:
    return float(utility(bundle.c1, bundle.c2))


# --------------------------------------------------------------------------
# dispatch


def has_closed_form(utility: UtilitySpec) -> bool:
    return not isinstance(utility, PowerB)


def demand(utility: UtilitySpec, p: float, endow: Endowment) -> DemandSet:
    """Closed-form demand where one exists, numeric argmax otherwise."""
    if isinstance(utility, WeightedLog):
        return demand_weighted_log(utility.lam, p, endow)
    if isinstance(utility, QuadLog):
        return demand_quadlog(utility.d, p, endow)[0]
    if isinstance(utility, CRRA):
        return demand_crra(utility.a1, utility.a2, utility.alpha, p, endow)
    if isinstance(utility, CaraA):
        return demand_cara_A(utility.alpha1, utility.alpha2, utility.gamma, p, endow)
    if isinstance(utility, CaraB):
        return demand_cara_B(utility.alpha1, utility.alpha2, utility.d, p, endow)
    if isinstance(utility, LinearGood2):
        return demand_linear_good2(p, endow)
    return demand_numeric(utility, p, endow)
