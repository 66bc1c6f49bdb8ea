# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: cyclic Jacobi sweep and the interchange-process loop.

Must stay operation-for-operation equivalent to treespectra.kernels.pure
(the build disables floating-point contraction so both backends round
identically).
"""

from libc.math cimport fabs, sqrt


def jacobi_sweep(double[:, ::1] a, double[:, ::1] v, double thresh, bint late):
    """One cyclic Jacobi sweep (row-major upper triangle) applied in place.

    See the pure twin for the full contract: ``thresh`` skips small
    entries during early sweeps, ``late`` enables zeroing entries that are
    negligible against both diagonal neighbours, and updates use the
    correction form with ``tau = s/(1+c)``.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, i
    cdef double apq, g, theta, t, c, s, tau, app, aqq, aip, aiq, vip, viq
    cdef long rotations = 0

    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[p, q]
            app = a[p, p]
            aqq = a[q, q]
            g = 100.0 * fabs(apq)
            if late and fabs(app) + g == fabs(app) and fabs(aqq) + g == fabs(aqq):
                a[p, q] = 0.0
                a[q, p] = 0.0
                continue
            if fabs(apq) <= thresh:
                continue
            theta = (aqq - app) / (2.0 * apq)
            if fabs(theta) > 1e150:
                t = 0.5 / theta
            elif theta >= 0.0:
                t = 1.0 / (theta + sqrt(theta * theta + 1.0))
            else:
                t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
            c = 1.0 / sqrt(t * t + 1.0)
            s = t * c
            tau = s / (1.0 + c)

            for i in range(n):
                if i != p and i != q:
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = aip - s * (aiq + tau * aip)
                    a[p, i] = a[i, p]
                    a[i, q] = aiq + s * (aip - tau * aiq)
                    a[q, i] = a[i, q]
            a[p, p] = app - t * apq
            a[q, q] = aqq + t * apq
            a[p, q] = 0.0
            a[q, p] = 0.0

            for i in range(n):
                vip = v[i, p]
                viq = v[i, q]
                v[i, p] = vip - s * (viq + tau * vip)
                v[i, q] = viq + s * (vip - tau * viq)
            rotations += 1
    return rotations


def interchange_run(long long[::1] mapping,
                    long long[::1] eu,
                    long long[::1] ev,
                    long long[::1] edge_choice,
                    signed char[::1] coins,
                    double[::1] f,
                    double f0,
                    double[::1] trace,
                    bint record):
    """Drive one interchange-process trajectory (see the pure twin for docs)."""
    cdef Py_ssize_t steps = edge_choice.shape[0]
    cdef Py_ssize_t t
    cdef long long e, u, w, ca, cb
    cdef double stat = f0

    if record:
        trace[0] = stat
    for t in range(steps):
        if coins[t]:
            e = edge_choice[t]
            u = eu[e]
            w = ev[e]
            ca = mapping[u]
            cb = mapping[w]
            mapping[u] = cb
            mapping[w] = ca
            stat += (f[u] - f[w]) * (f[cb] - f[ca])
        if record:
            trace[t + 1] = stat
    return stat
