"""Pure numpy versions of the compiled kernels in ``_speedups.pyx``."""
import numpy as np


def cos_sin_sums(a, b, t):
    """Return (sum_k a[k-1] cos kt, sum_k b[k-1] sin kt) for every t.

    Reinsch-modified Clenshaw recurrence, vectorized over ``t``.
    """
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    t = np.ascontiguousarray(t, dtype=float)
    if a.shape != b.shape:
        raise ValueError("coefficient arrays must have equal length")
    C = np.zeros_like(t)
    S = np.zeros_like(t)
    m = a.shape[0]
    if m == 0:
        return C, S
    near_zero = np.cos(t) >= 0.0
    for mask, sign in ((near_zero, 1.0), (~near_zero, -1.0)):
        if not mask.any():
            continue
        tt = t[mask]
        if sign > 0:
            lam = -4.0 * np.sin(0.5 * tt) ** 2
        else:
            lam = 4.0 * np.cos(0.5 * tt) ** 2
        ua = np.zeros_like(tt)
        da = np.zeros_like(tt)
        ub = np.zeros_like(tt)
        db = np.zeros_like(tt)
        for k in range(m - 1, -1, -1):
            if sign > 0:
                da = a[k] + lam * ua + da
                ua = da + ua
                db = b[k] + lam * ub + db
                ub = db + ub
            else:
                da = a[k] + lam * ua - da
                ua = da - ua
                db = b[k] + lam * ub - db
                ub = db - ub
        if sign > 0:
            C[mask] = da + 0.5 * lam * ua
        else:
            C[mask] = 0.5 * lam * ua - da
        S[mask] = ub * np.sin(tt)
    return C, S


def partial_sum_sup(coef, x, use_sin, checkpoints, chunk=4096):
    """out[j, i] = max over N <= checkpoints[j] of |sum_{k<=N} coef[k-1] trig(k x_i)|."""
    coef = np.asarray(coef, dtype=float)
    x = np.asarray(x, dtype=float)
    checkpoints = np.asarray(checkpoints, dtype=np.int64)
    out = np.zeros((checkpoints.size, x.size))
    if checkpoints.size == 0:
        return out
    kmax = int(checkpoints[-1])
    if kmax > coef.size:
        raise ValueError("checkpoint beyond coefficient length")
    trig = np.sin if use_sin else np.cos
    acc = np.zeros(x.size)
    best = np.zeros(x.size)
    j = 0
    for start in range(1, kmax + 1, chunk):
        stop = min(start + chunk, kmax + 1)
        k = np.arange(start, stop, dtype=float)
        terms = coef[start - 1:stop - 1, None] * trig(np.outer(k, x))
        partial = acc + np.cumsum(terms, axis=0)
        running = np.maximum.accumulate(np.abs(partial), axis=0)
        running = np.maximum(running, best)
        while j < checkpoints.size and checkpoints[j] < stop:
            out[j] = running[checkpoints[j] - start]
            j += 1
        acc = partial[-1]
        best = running[-1]
    return out
