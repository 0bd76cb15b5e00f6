"""Compiled budget-line argmax.

For each price the utility is sampled on a uniform grid of
``c1 = t * m``, ``t in [0, 1]`` (``m`` the income), every discrete local
maximum is kept (best ``K`` per price), refined by golden-section search and a
finite-difference Newton polish, and the maximizers within ``UTIL_TOL`` of the
best value are clustered.  At most two clusters are reported per price; if
more survive, the smallest and largest c1 are kept.

Grid values are computed in a separable form ``a * F(t) + b * G(t) + c`` for
the families that allow it (all but the two exponential ones), which is the
same utility written so that the per-price work is two multiply-adds.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

K = 4
UTIL_TOL = 1e-9
CLUSTER_RTOL = 1e-6
INVPHI = 0.6180339887498949
NEG_INF = -np.inf


@njit(cache=True)
def _pow_term(coef, alpha, c):
    if c <= 0.0:
        if alpha < 0.0:
            return NEG_INF
        return 0.0
    return coef * c ** alpha / alpha


@njit(cache=True)
def point_utility(kind, prm, c1, c2):
    if kind == 0:
        if c1 <= 0.0 or c2 <= 0.0:
            return NEG_INF
        return prm[0] * math.log(c1) + (1.0 - prm[0]) * math.log(c2)
    elif kind == 1:
        if prm[0] == 0.0:
            return 0.5 * c1 * c1
        if c2 <= 0.0:
            return NEG_INF
        return 0.5 * c1 * c1 + prm[0] * math.log(c2)
    elif kind == 2:
        return _pow_term(prm[0], prm[2], c1) + _pow_term(prm[1], prm[2], c2)
    elif kind == 3:
        return -math.exp(-prm[0] * c1) / prm[0] - prm[2] * math.exp(-prm[1] * c2) / prm[1]
    elif kind == 4:
        return math.exp(prm[0] * c1) / prm[0] + prm[2] * math.exp(prm[1] * c2) / prm[1]
    elif kind == 5:
        return c2
    else:
        return _pow_term(1.0, prm[0], c1) + _pow_term(prm[2], prm[1], c2)


@njit(cache=True)
def _grid_terms(kind, prm, t):
    n = t.shape[0]
    F = np.zeros(n)
    G = np.zeros(n)
    for j in range(n):
        tj = t[j]
        sj = 1.0 - tj
        if kind == 0:
            F[j] = math.log(tj) if tj > 0.0 else NEG_INF
            G[j] = math.log(sj) if sj > 0.0 else NEG_INF
        elif kind == 1:
            F[j] = tj * tj
            G[j] = math.log(sj) if sj > 0.0 else NEG_INF
        elif kind == 2:
            F[j] = tj ** prm[2] if tj > 0.0 else (np.inf if prm[2] < 0.0 else 0.0)
            G[j] = sj ** prm[2] if sj > 0.0 else (np.inf if prm[2] < 0.0 else 0.0)
        elif kind == 5:
            G[j] = sj
        elif kind == 6:
            F[j] = tj ** prm[0] if tj > 0.0 else (np.inf if prm[0] < 0.0 else 0.0)
            G[j] = sj ** prm[1]
    return F, G


@njit(cache=True)
def _grid_coefficients(kind, prm, m, p):
    # returns (a, b, c) such that U(t m, (1 - t) m / p) = a F(t) + b G(t) + c
    if kind == 0:
        lam = prm[0]
        return lam, 1.0 - lam, lam * math.log(m) + (1.0 - lam) * math.log(m / p)
    elif kind == 1:
        d = prm[0]
        if d == 0.0:
            return 0.5 * m * m, 0.0, 0.0
        return 0.5 * m * m, d, d * math.log(m / p)
    elif kind == 2:
        al = prm[2]
        return prm[0] * m ** al / al, prm[1] * (m / p) ** al / al, 0.0
    elif kind == 5:
        return 0.0, m / p, 0.0
    else:
        return m ** prm[0] / prm[0], prm[2] * (m / p) ** prm[1] / prm[1], 0.0


@njit(cache=True)
def _budget_value(kind, prm, x, m, p):
    return point_utility(kind, prm, x, max(m - x, 0.0) / p)


@njit(cache=True)
def _refine(kind, prm, lo, hi, m, p, iters):
    a = lo
    b = hi
    x1 = b - INVPHI * (b - a)
    x2 = a + INVPHI * (b - a)
    f1 = _budget_value(kind, prm, x1, m, p)
    f2 = _budget_value(kind, prm, x2, m, p)
    for _ in range(iters):
        if f1 < f2:
            a = x1
            x1 = x2
            f1 = f2
            x2 = a + INVPHI * (b - a)
            f2 = _budget_value(kind, prm, x2, m, p)
        else:
            b = x2
            x2 = x1
            f2 = f1
            x1 = b - INVPHI * (b - a)
            f1 = _budget_value(kind, prm, x1, m, p)
    if f1 >= f2:
        x, fx = x1, f1
    else:
        x, fx = x2, f2

    # finite-difference Newton polish: golden section alone stalls at
    # ~sqrt(eps) relative accuracy in x
    for _ in range(3):
        h = 1e-3 * min(x, m - x)
        if not (h > 0.0) or not math.isfinite(fx):
            break
        fp = _budget_value(kind, prm, x + h, m, p)
        fm = _budget_value(kind, prm, x - h, m, p)
        fpp = _budget_value(kind, prm, x + 2.0 * h, m, p)
        fmm = _budget_value(kind, prm, x - 2.0 * h, m, p)
        d1 = (fmm - 8.0 * fm + 8.0 * fp - fpp) / (12.0 * h)
        d2 = (fp - 2.0 * fx + fm) / (h * h)
        if not (d2 < 0.0) or not math.isfinite(d2) or not math.isfinite(d1):
            break
        step = -d1 / d2
        xn = x + step
        if not (lo <= xn <= hi):
            break
        fn = _budget_value(kind, prm, xn, m, p)
        # value comparisons are noise at this scale; only reject real losses
        if fn >= fx - 1e-12 * (1.0 + abs(fx)):
            x, fx = xn, fn
        else:
            break
        if abs(step) <= 1e-15 * m:
            break

    if lo == 0.0:
        f0 = _budget_value(kind, prm, 0.0, m, p)
        if f0 >= fx:
            x, fx = 0.0, f0
    if hi == m:
        fm_ = _budget_value(kind, prm, m, m, p)
        if fm_ >= fx:
            x, fx = m, fm_
    return x, fx


@njit(cache=True)
def argmax_batch(kind, prm, prices, e1, e2, grid_n, iters, out_c1, out_u, out_n):
    t = np.empty(grid_n)
    for j in range(grid_n):
        t[j] = j / (grid_n - 1.0)
    t[grid_n - 1] = 1.0
    separable = kind != 3 and kind != 4
    F, G = _grid_terms(kind, prm, t)
    u = np.empty(grid_n)
    cj = np.empty(K, dtype=np.int64)
    cu = np.empty(K)
    rx = np.empty(K)
    rf = np.empty(K)
    order = np.empty(K, dtype=np.int64)

    for i in range(prices.shape[0]):
        p = prices[i]
        m = e1 + p * e2
        if separable:
            a, b, c = _grid_coefficients(kind, prm, m, p)
            for j in range(grid_n):
                v = c
                if a != 0.0:
                    v += a * F[j]
                if b != 0.0:
                    v += b * G[j]
                u[j] = v
        else:
            for j in range(grid_n):
                u[j] = _budget_value(kind, prm, t[j] * m, m, p)

        # best K discrete local maxima
        nc = 0
        for j in range(grid_n):
            v = u[j]
            if not (v > NEG_INF) or v != v:
                continue
            if j > 0 and u[j - 1] > v:
                continue
            if j < grid_n - 1 and u[j + 1] > v:
                continue
            if nc < K:
                cj[nc] = j
                cu[nc] = v
                nc += 1
            else:
                w = 0
                for k in range(1, K):
                    if cu[k] < cu[w]:
                        w = k
                if v > cu[w]:
                    cj[w] = j
                    cu[w] = v

        if nc == 0:
            out_n[i] = 0
            continue

        best = NEG_INF
        for k in range(nc):
            j = cj[k]
            lo = 0.0 if j == 0 else t[j - 1] * m
            hi = m if j == grid_n - 1 else t[j + 1] * m
            x, fx = _refine(kind, prm, lo, hi, m, p, iters)
            rx[k] = x
            rf[k] = fx
            if fx > best:
                best = fx

        # survivors sorted by c1
        ns = 0
        for k in range(nc):
            if rf[k] >= best - UTIL_TOL:
                order[ns] = k
                ns += 1
        for a_ in range(1, ns):
            key = order[a_]
            b_ = a_ - 1
            while b_ >= 0 and rx[order[b_]] > rx[key]:
                order[b_ + 1] = order[b_]
                b_ -= 1
            order[b_ + 1] = key

        # cluster
        cl_x = np.empty(K)
        cl_f = np.empty(K)
        ncl = 0
        for s in range(ns):
            k = order[s]
            if ncl > 0 and rx[k] - cl_x[ncl - 1] <= CLUSTER_RTOL * m:
                if rf[k] > cl_f[ncl - 1]:
                    cl_x[ncl - 1] = rx[k]
                    cl_f[ncl - 1] = rf[k]
            else:
                cl_x[ncl] = rx[k]
                cl_f[ncl] = rf[k]
                ncl += 1
        out_c1[i, 0] = cl_x[0]
        out_u[i, 0] = cl_f[0]
        if ncl >= 2:
            out_c1[i, 1] = cl_x[ncl - 1]
            out_u[i, 1] = cl_f[ncl - 1]
            out_n[i] = 2
        else:
            out_n[i] = 1
