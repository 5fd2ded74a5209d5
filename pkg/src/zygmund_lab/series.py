"""Closed-form evaluation of sum_{k>=1} k^-r e^{ikt} (the polylogarithm on the
unit circle) by its expansion around t = 0:

    Li_r(e^{it}) = Gamma(1-r) (-it)^(r-1) + sum_j zeta(r-j) (it)^j / j!

with the usual logarithmic modification for integer r.  The series
converges geometrically for |t| < 2 pi, so on [-pi, pi] 72 terms reach
double precision.
"""
import math

import mpmath
import numpy as np

N_TERMS = 72


class PowerSeries:
    """Evaluator for C(t) = sum k^-r cos kt and S(t) = sum k^-r sin kt."""

    def __init__(self, r, n_terms=N_TERMS):
        if not r > 0:
            raise ValueError("exponent must be positive")
        self.r = float(r)
        self.integer = float(r).is_integer()
        m = int(round(r)) if self.integer else None
        coeffs = []
        with mpmath.workdps(40):
            for j in range(n_terms):
                if self.integer and j == m - 1:
                    coeffs.append(0.0)
                    continue
                coeffs.append(float(mpmath.zeta(self.r - j) / mpmath.factorial(j)))
            if self.integer:
                self._log_coeff = float(1 / mpmath.factorial(m - 1))
                self._harmonic = float(mpmath.harmonic(m - 1))
                self._m = m
            else:
                self._gamma = float(mpmath.gamma(1 - self.r))
        c = np.array(coeffs)
        sign_even = np.array([(-1.0) ** (j // 2) for j in range(0, n_terms, 2)])
        sign_odd = np.array([(-1.0) ** (j // 2) for j in range(1, n_terms, 2)])
        # Horner in t^2, highest power first
        self._even = (c[0::2] * sign_even)[::-1].copy()
        self._odd = (c[1::2] * sign_odd)[::-1].copy()

    def _singular(self, t):
        """Non-analytic part at t > 0, returned as (real, imag)."""
        if not self.integer:
            amp = self._gamma * t ** (self.r - 1.0)
            ang = -0.5 * math.pi * (self.r - 1.0)
            return amp * math.cos(ang), amp * math.sin(ang)
        m = self._m
        # (it)^(m-1)/(m-1)! * (H_{m-1} - ln t + i pi/2)
        mag = self._log_coeff * t ** (m - 1)
        rot = (m - 1) % 4
        re_f, im_f = self._harmonic - np.log(t), np.full_like(t, 0.5 * math.pi)
        # multiply by i^(m-1)
        if rot == 0:
            re, im = re_f, im_f
        elif rot == 1:
            re, im = -im_f, re_f
        elif rot == 2:
            re, im = -re_f, -im_f
        else:
            re, im = im_f, -re_f
        return mag * re, mag * im

    def __call__(self, t):
        """Return (C(t), S(t)) for t in [-pi, pi] (t = 0 only when r > 1)."""
        t = np.asarray(t, dtype=float)
        sign = np.sign(t)
        a = np.abs(t)
        u = a * a
        even = np.zeros_like(a)
        odd = np.zeros_like(a)
        for ce in self._even:
            even = even * u + ce
        for co in self._odd:
            odd = odd * u + co
        odd = odd * a
        pos = a > 0
        if np.any(pos):
            sr, si = self._singular(a[pos])
            even[pos] += sr
            odd[pos] += si
        if np.any(~pos):
            if self.r <= 1:
                even[~pos] = np.inf
            odd[~pos] = 0.0
        return even, sign * odd


# ---------------------------------------------------------------------------
# truncated Taylor series arithmetic (coefficient arrays, lowest order first)

def _series_exp(g):
    """exp(g) for g with g[0] = 0."""
    m = len(g)
    f = np.zeros(m)
    f[0] = 1.0
    j = np.arange(m, dtype=float)
    for k in range(1, m):
        f[k] = np.dot(j[1:k + 1] * g[1:k + 1], f[k - 1::-1][:k]) / k
    return f


def _series_log1p(a):
    """log(1 + a) for a with a[0] = 0."""
    m = len(a)
    g = np.zeros(m)
    f = a.copy()
    f[0] = 1.0
    for k in range(1, m):
        acc = sum(j * g[j] * f[k - j] for j in range(1, k))
        g[k] = f[k] - acc / k
    return g


def _series_pow(f, alpha):
    """f**alpha for f[0] > 0 (Miller's recurrence)."""
    m = len(f)
    h = np.zeros(m)
    h[0] = f[0] ** alpha
    for k in range(1, m):
        h[k] = sum(((alpha + 1.0) * j - k) * f[j] * h[k - j] for j in range(1, k + 1)) / (k * f[0])
    return h


def _series_mul(a, b):
    return np.convolve(a, b)[: len(a)]


def weight_taylor(kind, r, alpha, c, scale, X, order):
    """Coefficients a_j with psi(X (1 + u)) = sum_j a_j u^j, so that
    psi^{(j)}(X) = j! a_j / X^j.  Catalog kinds only."""
    m = order + 1
    j = np.arange(m, dtype=float)
    # (1 + u)^(-r)
    binom = np.ones(m)
    for k in range(1, m):
        binom[k] = binom[k - 1] * (-r - k + 1) / k
    base = scale * X ** (-r) * binom
    if kind == "power":
        return base
    # ln(X + c + X u) = ell0 + log1p(kappa u)
    ell0 = math.log(X + c)
    kappa = X / (X + c)
    lg = np.zeros(m)
    lg[1:] = (-1.0) ** (j[1:] + 1) * kappa ** j[1:] / j[1:]
    ell = lg.copy()
    ell[0] = ell0
    if kind == "powerlog":
        L = _series_pow(ell, alpha)
    elif kind == "powerinvlog":
        L = _series_pow(ell, -alpha)
    elif kind == "powerloglog":
        # alpha * ln(ell) = alpha * (ln ell0 + log1p(ell/ell0 - 1))
        rel = ell / ell0
        rel[0] = 0.0
        L = alpha * _series_log1p(rel)
        L[0] = alpha * math.log(ell0)
    else:
        raise ValueError(f"no Taylor expansion for kind {kind!r}")
    return _series_mul(base, L)
