"""Compiled inner loops for the Huber and Tukey location estimators.

All routines take the sample in nondecreasing order.
"""

import numpy as np
from numba import njit

_GOLDEN = 0.6180339887498949


@njit(cache=True)
def tukey_objective(ys, mu, s, c):
    """Exact sum of Tukey rho((y - mu) / s) over the sample."""
    cs = c * s
    rho_star = c * c / 6.0
    n = ys.shape[0]
    lo = np.searchsorted(ys, mu - cs)
    hi = np.searchsorted(ys, mu + cs)
    acc = 0.0
    for i in range(lo, hi):
        t = (ys[i] - mu) / cs
        t = t * t
        if t < 1.0:
            w = 1.0 - t
            acc += 1.0 - w * w * w
        else:
            acc += 1.0
    return rho_star * (acc + (n - (hi - lo)))


@njit(cache=True)
def _tukey_score(ys, mu, s, c):
    # sum psi(u) and sum psi'(u) for u = (y - mu) / s
    cs = c * s
    lo = np.searchsorted(ys, mu - cs)
    hi = np.searchsorted(ys, mu + cs)
    g = 0.0
    dg = 0.0
    inv_c2 = 1.0 / (c * c)
    for i in range(lo, hi):
        u = (ys[i] - mu) / s
        t = u * u * inv_c2
        if t < 1.0:
            w = 1.0 - t
            g += u * w * w
            dg += w * (1.0 - 5.0 * t)
    return g, dg


@njit(cache=True)
def tukey_grid(ys, s, c, grid_size):
    """Tukey objective divided by rho_star on a uniform grid over [min, max].

    Window power sums come from local prefix sums recomputed for each chunk
    of grid points one window half-width wide, centred on the chunk, so the
    binomial expansion only ever sees arguments of order one.
    """
    n = ys.shape[0]
    lo_y = ys[0]
    hi_y = ys[n - 1]
    cs = c * s
    grid = np.empty(grid_size)
    vals = np.empty(grid_size)
    step = (hi_y - lo_y) / (grid_size - 1)
    for g in range(grid_size):
        grid[g] = lo_y + step * g
    grid[grid_size - 1] = hi_y

    pref = np.zeros((7, n + 1))
    center = 0.0
    base = 0
    have_chunk = False
    binom = np.array([[1.0, 0, 0, 0, 0, 0, 0],
                      [1.0, 2, 1, 0, 0, 0, 0],
                      [1.0, 4, 6, 4, 1, 0, 0],
                      [1.0, 6, 15, 20, 15, 6, 1]])
    for g in range(grid_size):
        mu = grid[g]
        if (not have_chunk) or mu - center > 0.5 * cs:
            have_chunk = True
            center = mu + 0.5 * cs
            base = np.searchsorted(ys, center - 1.5 * cs)
            top = np.searchsorted(ys, center + 1.5 * cs, side="right")
            for i in range(top - base):
                z = (ys[base + i] - center) / cs
                zp = 1.0
                for j in range(7):
                    pref[j, i + 1] = pref[j, i] + zp
                    zp *= z
        lo = np.searchsorted(ys, mu - cs) - base
        hi = np.searchsorted(ys, mu + cs) - base
        d = (mu - center) / cs
        sums = np.empty(7)
        for j in range(7):
            sums[j] = pref[j, hi] - pref[j, lo]
        # sum (z - d)^p for p = 2, 4, 6
        m = np.zeros(4)
        for k in range(1, 4):
            p = 2 * k
            acc = 0.0
            nd = 1.0
            for j in range(p, -1, -1):
                acc += binom[k, j] * nd * sums[j]
                nd *= -d
            m[k] = acc
        inside = hi - lo
        vals[g] = (n - inside) + 3.0 * m[1] - 3.0 * m[2] + m[3]
    return grid, vals


@njit(cache=True)
def _golden(ys, s, c, a, b, width):
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1 = tukey_objective(ys, x1, s, c)
    f2 = tukey_objective(ys, x2, s, c)
    while b - a > width:
        if f1 <= f2:
            b = x2
            x2 = x1
            f2 = f1
            x1 = b - _GOLDEN * (b - a)
            f1 = tukey_objective(ys, x1, s, c)
        else:
            a = x1
            x1 = x2
            f1 = f2
            x2 = a + _GOLDEN * (b - a)
            f2 = tukey_objective(ys, x2, s, c)
    return 0.5 * (a + b)


@njit(cache=True)
def tukey_minimize(ys, s, c, grid_size, n_keep, width):
    """Global minimizer of the Tukey objective.

    Grid scan, golden-section refinement of the ``n_keep`` best grid points
    to bracket ``width``, then Newton steps on the score equation to remove
    the rounding floor of comparing objective values.  Returns
    ``(mu, objective, converged)``; among exactly tied minima the smallest
    ``mu`` wins.
    """
    n = ys.shape[0]
    if ys[n - 1] == ys[0]:
        return ys[0], 0.0, True
    grid, vals = tukey_grid(ys, s, c, grid_size)
    order = np.argsort(vals, kind="mergesort")
    h = grid[1] - grid[0]
    k = min(n_keep, grid_size)
    cand = np.empty(k)
    obj = np.empty(k)
    ok = np.empty(k, dtype=np.bool_)
    for r in range(k):
        g = order[r]
        a = max(grid[g] - h, ys[0])
        b = min(grid[g] + h, ys[n - 1])
        mu = _golden(ys, s, c, a, b, width)
        f = tukey_objective(ys, mu, s, c)
        conv = False
        for _ in range(30):
            sc, dsc = _tukey_score(ys, mu, s, c)
            if dsc <= 0.0:
                break
            nxt = mu + s * sc / dsc
            if nxt < a or nxt > b:
                break
            fn = tukey_objective(ys, nxt, s, c)
            if fn > f * (1.0 + 1e-14) + 1e-300:
                break
            stepsize = abs(nxt - mu)
            mu = nxt
            f = fn
            if stepsize <= 1e-14 * (1.0 + abs(mu)):
                conv = True
                break
        if not conv:
            sc, dsc = _tukey_score(ys, mu, s, c)
            conv = abs(sc) <= 1e-8 * n or dsc <= 0.0
        cand[r] = mu
        obj[r] = f
        ok[r] = conv
    best = 0
    for r in range(1, k):
        if obj[r] < obj[best] or (obj[r] == obj[best] and cand[r] < cand[best]):
            best = r
    return cand[best], obj[best], ok[best]


@njit(cache=True)
def huber_irls(y, s, c, start, tol, maxiter):
    """Iteratively reweighted mean for the Huber objective.

    Returns ``(mu, iterations, converged)``.
    """
    mu = start
    n = y.shape[0]
    for it in range(1, maxiter + 1):
        num = 0.0
        den = 0.0
        for i in range(n):
            r = abs(y[i] - mu) / s
            w = 1.0 if r <= c else c / r
            num += w * y[i]
            den += w
        nxt = num / den
        if abs(nxt - mu) < tol:
            return nxt, it, True
        mu = nxt
    return mu, maxiter, False
