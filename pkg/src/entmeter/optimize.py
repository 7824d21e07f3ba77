"""Batched Nelder-Mead minimizer.

Runs many independent low-dimensional problems in lock step so the
per-iteration Python overhead is shared.  Each problem follows the
textbook reflect / expand / contract / shrink rules and is frozen once
its simplex has collapsed, so its trajectory does not depend on which
other problems share the batch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

ALPHA, GAMMA, BETA, DELTA = 1.0, 2.0, 0.5, 0.5


@dataclass
class BatchResult:
    x: np.ndarray          # (n, k) best point per problem
    fun: np.ndarray        # (n,) best value per problem
    iterations: np.ndarray  # (n,) iterations spent per problem
    converged: np.ndarray  # (n,) simplex collapsed below tolerance


def nelder_mead_batch(
    func: Callable[[np.ndarray, np.ndarray], np.ndarray],
    x0: np.ndarray,
    step,
    max_iter: int = 200,
    xatol: float = 1e-8,
    fatol: float = 1e-12,
) -> BatchResult:
    """Minimize ``func`` independently for every row of ``x0``.

    ``func(points, problem)`` maps an ``(m, k)`` array of points and the
    ``(m,)`` problem index of each point to ``(m,)`` values.  The starting
    point is a simplex vertex, so the returned value never exceeds the
    value at ``x0``.
    """
    x0 = np.atleast_2d(np.asarray(x0, dtype=float))
    n, k = x0.shape
    step = np.broadcast_to(np.asarray(step, dtype=float), (k,))

    simplex = np.repeat(x0[:, None, :], k + 1, axis=1)
    for i in range(k):
        simplex[:, i + 1, i] += step[i]
    fs = func(simplex.reshape(-1, k), np.repeat(np.arange(n), k + 1)).reshape(n, k + 1)

    iters = np.zeros(n, dtype=int)
    done = np.zeros(n, dtype=bool)

    for _ in range(max_iter):
        order = np.argsort(fs, axis=1, kind="stable")
        simplex = np.take_along_axis(simplex, order[:, :, None], axis=1)
        fs = np.take_along_axis(fs, order, axis=1)

        spread = np.max(np.abs(simplex[:, 1:, :] - simplex[:, :1, :]), axis=(1, 2))
        fspread = np.max(np.abs(fs[:, 1:] - fs[:, :1]), axis=1)
        done |= (spread <= xatol) | ((fspread <= fatol) & (spread <= 1e3 * xatol))
        act = np.flatnonzero(~done)
        if act.size == 0:
            break
        iters[act] += 1

        s, f = simplex[act], fs[act]
        worst, fworst, fsecond, fbest = s[:, -1], f[:, -1], f[:, -2], f[:, 0]
        c = s[:, :-1].mean(axis=1)
        xr = c + ALPHA * (c - worst)
        xe = c + GAMMA * (xr - c)
        xoc = c + BETA * (xr - c)
        xic = c + BETA * (worst - c)
        m = act.size
        vals = func(np.concatenate([xr, xe, xoc, xic]), np.tile(act, 4)).reshape(4, m)
        fr, fe, foc, fic = vals

        new_x = np.empty_like(worst)
        new_f = np.empty_like(fworst)
        shrink = np.zeros(m, dtype=bool)

        expand = fr < fbest
        use_e = expand & (fe < fr)
        new_x[expand] = np.where(use_e[expand, None], xe[expand], xr[expand])
        new_f[expand] = np.where(use_e[expand], fe[expand], fr[expand])

        reflect = ~expand & (fr < fsecond)
        new_x[reflect], new_f[reflect] = xr[reflect], fr[reflect]

        outside = ~expand & ~reflect & (fr < fworst)
        ok = outside & (foc <= fr)
        new_x[ok], new_f[ok] = xoc[ok], foc[ok]
        shrink |= outside & ~ok

        inside = ~expand & ~reflect & ~outside
        ok = inside & (fic < fworst)
        new_x[ok], new_f[ok] = xic[ok], fic[ok]
        shrink |= inside & ~ok

        keep = ~shrink
        s[keep, -1] = new_x[keep]
        f[keep, -1] = new_f[keep]
        if shrink.any():
            sh = np.flatnonzero(shrink)
            best = s[sh, :1]
            moved = best + DELTA * (s[sh, 1:] - best)
            s[sh, 1:] = moved
            f[sh, 1:] = func(moved.reshape(-1, k), np.repeat(act[sh], k)).reshape(sh.size, k)
        simplex[act], fs[act] = s, f

    ibest = np.argmin(fs, axis=1)
    rows = np.arange(n)
    return BatchResult(simplex[rows, ibest], fs[rows, ibest], iters, done)
