# cython: language_level=3
"""Compiled inner loops: trigonometric series summation and running sup of
partial sums.  Semantics are identical to ``_fallback.py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, fabs

cnp.import_array()


def cos_sin_sums(const double[::1] a, const double[::1] b, const double[::1] t):
    """Return (sum_k a[k-1] cos kt, sum_k b[k-1] sin kt) for every t.

    Reinsch-modified Clenshaw recurrence; the modification keeps the
    rounding error bounded near t = 0 and t = pi.
    """
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t npts = t.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] C = np.zeros(npts)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] S = np.zeros(npts)
    cdef double[::1] Cv = C
    cdef double[::1] Sv = S
    cdef Py_ssize_t i, k
    cdef double tt, c, h, lam, ua, da, ub, db, ua_next
    if b.shape[0] != m:
        raise ValueError("coefficient arrays must have equal length")
    if m == 0:
        return C, S
    for i in range(npts):
        tt = t[i]
        c = cos(tt)
        if c >= 0.0:
            h = sin(0.5 * tt)
            lam = -4.0 * h * h
            ua = 0.0
            da = 0.0
            ub = 0.0
            db = 0.0
            for k in range(m - 1, -1, -1):
                da = a[k] + lam * ua + da
                ua = da + ua
                db = b[k] + lam * ub + db
                ub = db + ub
            Cv[i] = da + 0.5 * lam * ua
            Sv[i] = ub * sin(tt)
        else:
            h = cos(0.5 * tt)
            lam = 4.0 * h * h
            ua = 0.0
            da = 0.0
            ub = 0.0
            db = 0.0
            for k in range(m - 1, -1, -1):
                da = a[k] + lam * ua - da
                ua = da - ua
                db = b[k] + lam * ub - db
                ub = db - ub
            Cv[i] = 0.5 * lam * ua - da
            Sv[i] = ub * sin(tt)
    return C, S


def partial_sum_sup(const double[::1] coef, const double[::1] x, bint use_sin,
                    const long[::1] checkpoints):
    """out[j, i] = max over N <= checkpoints[j] of |sum_{k<=N} coef[k-1] trig(k x_i)|."""
    cdef Py_ssize_t nx = x.shape[0]
    cdef Py_ssize_t nc = checkpoints.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((nc, nx))
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t i, j, k, kmax
    cdef double acc, best, xv
    if nc == 0:
        return out
    kmax = checkpoints[nc - 1]
    if kmax > coef.shape[0]:
        raise ValueError("checkpoint beyond coefficient length")
    for i in range(nx):
        xv = x[i]
        acc = 0.0
        best = 0.0
        j = 0
        for k in range(1, kmax + 1):
            if use_sin:
                acc += coef[k - 1] * sin(k * xv)
            else:
                acc += coef[k - 1] * cos(k * xv)
            if fabs(acc) > best:
                best = fabs(acc)
            while j < nc and checkpoints[j] == k:
                ov[j, i] = best
                j += 1
    return out
