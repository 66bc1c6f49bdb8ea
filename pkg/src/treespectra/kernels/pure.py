"""Pure NumPy/Python implementations of the hot kernels.

These mirror the compiled module ``treespectra.kernels._core`` operation by
operation (same formulas, same evaluation order) so that both backends
produce bit-identical results.
"""

import math


def jacobi_sweep(a, v, thresh, late):
    """One cyclic Jacobi sweep over the upper triangle of symmetric ``a``.

    Rotations are applied in row-major order (0,1), (0,2), ..., (n-2,n-1).
    ``a`` is diagonalised in place (symmetry is maintained) and ``v``
    accumulates the rotations as columns.  Returns the number of rotations
    applied.

    Two classical threshold rules keep the tail of convergence from
    stalling on roundoff: entries with ``|a[p,q]| <= thresh`` are left
    alone (the caller passes a positive ``thresh`` only during the first
    few sweeps), and when ``late`` is set, entries already negligible
    against both of their diagonal neighbours are zeroed outright instead
    of rotated — rotating them would only spray eps-size noise over rows
    ``p`` and ``q`` and keep the off-diagonal mass at a roundoff
    equilibrium above the stopping target.

    Each rotation updates rows/columns in the correction form
    ``a_ip - s*(a_iq + tau*a_ip)`` with ``tau = s/(1+c)``, which commits a
    smaller rounding error per entry than the textbook
    ``c*a_ip - s*a_iq`` when the angle is small.
    """
    n = a.shape[0]
    rotations = 0
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = float(a[p, q])
            app = float(a[p, p])
            aqq = float(a[q, q])
            g = 100.0 * abs(apq)
            if late and abs(app) + g == abs(app) and abs(aqq) + g == abs(aqq):
                a[p, q] = 0.0
                a[q, p] = 0.0
                continue
            if abs(apq) <= thresh:
                continue
            theta = (aqq - app) / (2.0 * apq)
            if abs(theta) > 1e150:
                t = 0.5 / theta
            elif theta >= 0.0:
                t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
            else:
                t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
            c = 1.0 / math.sqrt(t * t + 1.0)
            s = t * c
            tau = s / (1.0 + c)

            rowp = a[p, :].copy()
            rowq = a[q, :].copy()
            a[p, :] = rowp - s * (rowq + tau * rowp)
            a[q, :] = rowq + s * (rowp - tau * rowq)
            colp = a[:, p].copy()
            colq = a[:, q].copy()
            a[:, p] = colp - s * (colq + tau * colp)
            a[:, q] = colq + s * (colp - tau * colq)
            a[p, p] = app - t * apq
            a[q, q] = aqq + t * apq
            a[p, q] = 0.0
            a[q, p] = 0.0

            vp = v[:, p].copy()
            vq = v[:, q].copy()
            v[:, p] = vp - s * (vq + tau * vp)
            v[:, q] = vq + s * (vp - tau * vq)
            rotations += 1
    return rotations


def interchange_run(mapping, eu, ev, edge_choice, coins, f, f0, trace, record):
    """Drive one interchange-process trajectory.

    ``mapping[v]`` is the card currently sitting at node ``v``; step ``t``
    swaps the cards across edge ``edge_choice[t]`` when ``coins[t]`` is 1 and
    does nothing otherwise.  The quadratic statistic sum_v f(v) * f(card at v)
    starts from ``f0`` and is updated incrementally; when ``record`` is true
    the value after every step is written to ``trace`` (length steps + 1).
    Returns the final statistic value.
    """
    steps = edge_choice.shape[0]
    m = mapping.tolist()
    fx = f.tolist()
    us = eu.tolist()
    vs = ev.tolist()
    es = edge_choice.tolist()
    cs = coins.tolist()

    stat = float(f0)
    out = [0.0] * (steps + 1) if record else None
    if record:
        out[0] = stat
    for t in range(steps):
        if cs[t]:
            e = es[t]
            u = us[e]
            w = vs[e]
            ca = m[u]
            cb = m[w]
            m[u] = cb
            m[w] = ca
            stat += (fx[u] - fx[w]) * (fx[cb] - fx[ca])
        if record:
            out[t + 1] = stat
    mapping[:] = m
    if record:
        trace[:] = out
    return stat
