"""Trigonometric polynomials, Dirichlet-type kernels, the summation
operators and the deviation kernel of Z^s_n on a convolution class.

Phase conventions: the generating kernel of the class carries
cos(kt - beta*pi/2); the deviation kernel and the kernel tails carry
cos(kt + beta*pi/2).  ``ClassSpec.theta`` holds beta*pi/2 and each formula
applies its own sign.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import special

from . import _kernels
from .errors import DomainError, ParameterError, TruncationError
from .series import PowerSeries, weight_taylor
from .weights import ClassSpec, eval_psi, scalar_rule

DIRICHLET_FALLBACK = 1e-8
EPS = np.finfo(float).eps
GL16_X, GL16_W = np.polynomial.legendre.leggauss(16)
K_MAX = 10 ** 7


@dataclass(frozen=True, eq=False)
class TrigPolynomial:
    """a0/2 + sum_{k=1}^m (a_k cos kt + b_k sin kt)."""

    a0: float
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=float).ravel()
        b = np.array(self.b, dtype=float).ravel()
        if a.shape != b.shape:
            raise ParameterError("cosine and sine coefficient sequences differ in length")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a0", float(self.a0))

    @classmethod
    def from_coefficients(cls, a0=0.0, a=(), b=None):
        a = np.asarray(a, dtype=float)
        if b is None:
            b = np.zeros_like(a)
        m = max(len(a), len(b))
        a = np.pad(a, (0, m - len(a)))
        b = np.pad(np.asarray(b, dtype=float), (0, m - len(b)))
        return cls(a0, a, b)

    @property
    def degree(self):
        return int(self.a.size)

    def __call__(self, t):
        return eval_trig_poly(self, t)

    def __eq__(self, other):
        if not isinstance(other, TrigPolynomial):
            return NotImplemented
        return (self.a0 == other.a0 and np.array_equal(self.a, other.a)
                and np.array_equal(self.b, other.b))

    def __add__(self, other):
        m = max(self.degree, other.degree)
        pa = lambda v: np.pad(v, (0, m - v.size))  # noqa: E731
        return TrigPolynomial(self.a0 + other.a0, pa(self.a) + pa(other.a), pa(self.b) + pa(other.b))

    def __mul__(self, c):
        c = float(c)
        return TrigPolynomial(c * self.a0, c * self.a, c * self.b)

    __rmul__ = __mul__

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# a0={self.a0!r}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "a_k", "b_k"])
        for k, (ak, bk) in enumerate(zip(self.a, self.b), start=1):
            w.writerow([k, repr(float(ak)), repr(float(bk))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "TrigPolynomial":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("# a0="):
            raise ParameterError("missing a0 header line")
        a0 = float(lines[0].split("=", 1)[1])
        rows = list(csv.reader(lines[1:]))
        if rows and rows[0] == ["k", "a_k", "b_k"]:
            rows = rows[1:]
        a, b = [], []
        for i, row in enumerate(rows, start=1):
            if int(row[0]) != i:
                raise ParameterError("rows must list k = 1, 2, ... in order")
            a.append(float(row[1]))
            b.append(float(row[2]))
        return cls(a0, np.array(a), np.array(b))


def eval_trig_poly(P: TrigPolynomial, t):
    """Evaluate P at t (scalar or array) by the Reinsch-Clenshaw recurrence."""
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    flat = np.ascontiguousarray(arr.ravel())
    C, S = _kernels.cos_sin_sums(P.a, P.b, flat)
    out = (0.5 * P.a0 + C + S).reshape(arr.shape)
    return float(out[0]) if np.ndim(t) == 0 else out


def cos_phase_sums(coef, theta, t):
    """sum_{k>=1} coef[k-1] cos(kt + theta) at every t."""
    coef = np.ascontiguousarray(coef, dtype=float)
    t = np.ascontiguousarray(np.atleast_1d(t), dtype=float)
    C, S = _kernels.cos_sin_sums(coef, coef, t)
    return math.cos(theta) * C - math.sin(theta) * S


def dirichlet_beta(k: int, beta: float, t):
    """D_{k,beta}(t) = cos(beta pi/2)/2 + sum_{v=1}^k cos(vt + beta pi/2).

    Closed form with sin(t/2) in the denominator; points where
    |sin(t/2)| < 1e-8 are summed directly.
    """
    if k < 0:
        raise DomainError("k must be non-negative")
    th = beta * math.pi / 2.0
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    h = np.sin(0.5 * arr)
    small = np.abs(h) < DIRICHLET_FALLBACK
    out = np.empty_like(arr)
    big = ~small
    if np.any(big):
        tb, hb = arr[big], h[big]
        out[big] = (math.cos(th) * np.sin((k + 0.5) * tb) / (2.0 * hb)
                    - math.sin(th) * (np.cos(0.5 * tb) - np.cos((k + 0.5) * tb)) / (2.0 * hb))
    if np.any(small):
        ts = arr[small]
        v = np.arange(1, k + 1, dtype=float)
        out[small] = 0.5 * math.cos(th) + np.cos(np.outer(ts, v) + th).sum(axis=1)
    return float(out[0]) if np.ndim(t) == 0 else out


# ---------------------------------------------------------------------------
# summation operators

def zygmund_multipliers(n: int, s: float):
    """(k/n)^s for k = 1..n-1; the operator keeps 1 - (k/n)^s."""
    k = np.arange(1, n, dtype=float)
    return np.power(k / n, s)


def fejer_multipliers(n: int):
    k = np.arange(1, n, dtype=float)
    return k / n


def _apply_multipliers(F: TrigPolynomial, n: int, comp):
    if n < 1:
        raise DomainError("n must be >= 1")
    m = min(F.degree, n - 1)
    lam = 1.0 - comp[:m]
    return TrigPolynomial(F.a0, F.a[:m] * lam, F.b[:m] * lam)


def zygmund_sum(F: TrigPolynomial, n: int, s: float) -> TrigPolynomial:
    """Z^s_n F: coefficients k < n scaled by 1 - (k/n)^s, higher ones dropped."""
    if not s > 0:
        raise ParameterError("s must be positive")
    return _apply_multipliers(F, n, zygmund_multipliers(n, s))


def fejer_sum(F: TrigPolynomial, n: int) -> TrigPolynomial:
    """Fejer means sigma_n F: multipliers 1 - k/n."""
    return _apply_multipliers(F, n, fejer_multipliers(n))


def convolve_class(spec: ClassSpec, phi: TrigPolynomial) -> TrigPolynomial:
    """f = (1/pi) int Psi_beta(x - t) phi(t) dt for a zero-mean phi.

    Each harmonic is scaled by psi(k) and rotated by the phase of the
    generating kernel: (a, b) -> psi(k) (a cos th - b sin th, a sin th + b cos th).
    """
    if phi.a0 != 0.0:
        raise ParameterError("phi must have zero mean (a0 = 0)")
    m = phi.degree
    if m == 0:
        return TrigPolynomial(0.0, np.zeros(0), np.zeros(0))
    psi = eval_psi(spec.psi, np.arange(1, m + 1, dtype=float))
    c, s = math.cos(spec.theta), math.sin(spec.theta)
    return TrigPolynomial(0.0, psi * (phi.a * c - phi.b * s), psi * (phi.a * s + phi.b * c))


# ---------------------------------------------------------------------------
# kernel tail Psi_{-beta,n}(t) = sum_{k>=n} psi(k) cos(kt + beta pi/2)

@dataclass
class TailValue:
    value: float
    k_tail: int
    remainder_bound: float


def kernel_tail(spec: ClassSpec, n: int, t: float, tol: float = 1e-10,
                k_max: int = K_MAX) -> TailValue:
    """Psi_{-beta,n}(t) by direct summation plus a certified Abel remainder.

    With z = e^{it} and psi non-increasing to zero, summation by parts gives
    sum_{k>=K} psi(k) z^k = psi(K) z^K / (1 - z) + R with
    |R| <= psi(K) / |1 - z| = psi(K) / (2 |sin(t/2)|).  For the convex
    catalog weights a second summation by parts sharpens this to
    |R| <= (psi(K) - psi(K+1)) / |1 - z|^2.  The leading Abel term is added
    explicitly and K doubles until the bound is below ``tol``.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    t = float(t)
    tr = math.remainder(t, 2.0 * math.pi)
    h = abs(math.sin(0.5 * tr))
    if h == 0.0:
        raise DomainError("the tail is only evaluated away from t = 0")
    th = spec.theta
    z_den = 2.0 * h
    total = 0.0
    k_lo = n
    k_hi = max(2 * n, 1024)
    while True:
        if k_hi > k_max:
            raise TruncationError(f"tail at t={t} not certified to {tol} within {k_max} terms")
        k = np.arange(k_lo, k_hi, dtype=float)
        # chunked to bound memory
        for start in range(0, k.size, 1 << 20):
            kk = k[start:start + (1 << 20)]
            total += math.fsum(eval_psi(spec.psi, kk) * np.cos(kk * tr + th))
        psi_k = eval_psi(spec.psi, float(k_hi))
        if spec.psi.is_catalog:
            bound = (psi_k - eval_psi(spec.psi, float(k_hi + 1))) / z_den ** 2
        else:
            bound = psi_k / z_den
        if bound <= tol:
            # psi(K) z^K / (1 - z), real part after the phase shift
            ang = k_hi * tr + th
            lead = psi_k * _re_over_one_minus_z(ang, tr)
            return TailValue(total + lead, k_hi, bound)
        k_lo, k_hi = k_hi, 2 * k_hi


def _re_over_one_minus_z(angle, t):
    """Re[e^{i angle} / (1 - e^{it})], using 1/(1 - e^{it}) = i e^{-it/2} / (2 sin(t/2))."""
    return -np.sin(angle - 0.5 * t) / (2.0 * np.sin(0.5 * t))


def _im_over_one_minus_z(angle, t):
    return np.cos(angle - 0.5 * t) / (2.0 * np.sin(0.5 * t))


# ---------------------------------------------------------------------------
# tails of sum psi(k) e^{ikt} for general weights

ABEL_MAX_ORDER = 14
EM_TERMS = 8
ASYMPTOTIC_TERMS = 20
GENERAL_CUT = 8192


class _GeneralTail:
    """sum_{k>=n} psi(k) e^{ikt} for a catalog weight without a closed form.

    Terms below ``cut`` are summed directly.  The rest is handled per t by
    an order-m Abel transform when its remainder bound meets ``tol`` and by
    Euler-Maclaurin otherwise; its integral term is done by panel
    Gauss-Legendre plus an asymptotic expansion at infinity.
    """

    def __init__(self, w, n, tol):
        self.w = w
        self.n = n
        self.tol = tol
        self.cut = max(GENERAL_CUT, 4 * n)
        k = np.arange(n, self.cut, dtype=float)
        self.coef = np.ascontiguousarray(np.concatenate([np.zeros(n - 1), eval_psi(w, k)]))
        M = self.cut
        with mpmath.workdps(50):
            vals = [w.mp(M + j) for j in range(ABEL_MAX_ORDER + 1)]
            diffs = []
            row = vals
            for _ in range(ABEL_MAX_ORDER + 1):
                diffs.append(float(row[0]))
                row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
            self.diffs = np.array(diffs)
        # derivatives psi^{(i)}(M) for the Euler-Maclaurin corrections
        a = weight_taylor(w.kind, w.r, w.alpha, w.c, w.scale, float(M), 2 * EM_TERMS)
        self.derivs = np.array([math.factorial(i) * a[i] / float(M) ** i for i in range(2 * EM_TERMS)])
        self.bern = np.array([float(special.bernoulli(2 * j)[-1]) / math.factorial(2 * j)
                              for j in range(1, EM_TERMS + 1)])
        self.remainder_bound = 0.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        C, S = _kernels.cos_sin_sums(self.coef, self.coef, t)
        T = np.zeros(t.shape, dtype=complex)
        bound = np.full(t.shape, np.inf)
        M = self.cut
        h = 2.0 * np.sin(0.5 * t)
        w = 1j * np.exp(-0.5j * t) / h
        zM = np.exp(1j * M * t)
        acc = np.zeros(t.shape, dtype=complex)
        wp = w.copy()
        zj = zM.copy()
        z = np.exp(1j * t)
        done = np.zeros(t.shape, dtype=bool)
        for j in range(ABEL_MAX_ORDER):
            acc = acc + self.diffs[j] * zj * wp
            b = 2.0 * np.abs(self.diffs[j + 1]) * np.abs(wp) / np.abs(h)
            take = (~done) & (b <= self.tol)
            T[take] = acc[take]
            bound[take] = b[take]
            done |= take
            wp = wp * w
            zj = zj * z
        for i in np.flatnonzero(~done):
            T[i], bound[i] = self._euler_maclaurin(float(t[i]))
        self.remainder_bound = max(self.remainder_bound, float(np.max(bound, initial=0.0)))
        return C + T.real, S + T.imag, bound

    def _integral(self, t):
        """int_M^inf psi(x) e^{ixt} dx and an error estimate.

        [M, X] with X = M + 64/t is split into dyadic pieces, each cut into
        Gauss-Legendre panels spanning at most 2 radians of phase; the rule
        is compared against one with doubled panel counts.  Beyond X the
        repeated integration by parts
        -e^{iXt} sum_j (-1)^j psi^{(j)}(X) / (it)^{j+1}
        has terms shrinking like j!/64^j.
        """
        M = float(self.cut)
        X = M + 64.0 / t
        pieces = [M]
        while pieces[-1] * 2.0 < X:
            pieces.append(pieces[-1] * 2.0)
        pieces.append(X)
        pieces = np.array(pieces)
        coarse = self._gl_oscillatory(pieces, t, 1)
        fine = self._gl_oscillatory(pieces, t, 2)
        w = self.w
        a = weight_taylor(w.kind, w.r, w.alpha, w.c, w.scale, X, ASYMPTOTIC_TERMS)
        it = 1j * t
        zX = complex(math.cos(X * t), math.sin(X * t))
        # term_k = -(-1)^k k! a_k / (it) * (1 / (iXt))^k
        qk = 1.0 + 0j
        ratio = -1.0 / (X * it)
        tail = 0j
        term = 0j
        for k in range(ASYMPTOTIC_TERMS + 1):
            if k:
                qk *= k * ratio
            term = -a[k] * qk / it
            tail += term
        return fine + zX * tail, abs(fine - coarse) + 2.0 * abs(term)

    def _gl_oscillatory(self, pieces, t, refine):
        xs, ws = [], []
        for lo, hi in zip(pieces[:-1], pieces[1:]):
            m = refine * max(1, int(math.ceil(t * (hi - lo) / 2.0)))
            e = np.linspace(lo, hi, m + 1)
            half = 0.5 * (e[1:] - e[:-1])
            mid = 0.5 * (e[1:] + e[:-1])
            xs.append((mid[:, None] + half[:, None] * GL16_X[None, :]).ravel())
            ws.append((half[:, None] * GL16_W[None, :]).ravel())
        x = np.concatenate(xs)
        wts = np.concatenate(ws)
        vals = eval_psi(self.w, x) * np.exp(1j * x * t)
        return complex(np.sum(wts * vals))

    def _euler_maclaurin(self, t):
        M = self.cut
        integral, ierr = self._integral(t)
        # f(x) = psi(x) e^{ixt}; f^{(j)}(M) by Leibniz
        zt = complex(math.cos(M * t), math.sin(M * t))
        it = 1j * t

        def fder(j):
            return zt * sum(math.comb(j, i) * self.derivs[i] * it ** (j - i) for i in range(j + 1))

        total = integral + 0.5 * self.derivs[0] * zt
        last = 0.0
        for j in range(1, EM_TERMS + 1):
            term = self.bern[j - 1] * fder(2 * j - 1)
            total -= term
            last = abs(term)
        return total, 2.0 * last + ierr


class DeviationKernel:
    """K_n(t) = n^-s sum_{k<n} psi(k) k^s cos(kt + th) + sum_{k>=n} psi(k) cos(kt + th).

    ``method="fejer"`` uses the multipliers k/n; with s = 1 both methods
    produce bit-identical kernels.  Evaluation writes the kernel through
    C(t) = sum c_k cos kt and S(t) = sum c_k sin kt as K = cos th C - sin th S,
    so one pass over t > 0 also gives K(-t).

    Power weights use the closed-form polylogarithm expansion and are exact
    down to t = 0.  Other catalog weights combine direct summation with
    Abel / Euler-Maclaurin tails; custom weights are summed directly with the
    first-order Abel bound at ``t_floor``.
    """

    def __init__(self, spec: ClassSpec, n: int, method: str = "zygmund",
                 tol: float = 1e-13, t_floor: float | None = None):
        if n < 1:
            raise DomainError("n must be >= 1")
        if method not in ("zygmund", "fejer"):
            raise ParameterError("method must be 'zygmund' or 'fejer'")
        if method == "fejer" and spec.s != 1.0:
            raise ParameterError("the Fejer kernel corresponds to s = 1")
        self.spec = spec
        self.n = int(n)
        self.method = method
        w = spec.psi
        k = np.arange(1, n, dtype=float)
        comp = fejer_multipliers(n) if method == "fejer" else zygmund_multipliers(n, spec.s)
        psi_k = eval_psi(w, k) if n > 1 else np.zeros(0)
        self.head_coefficients = np.ascontiguousarray(psi_k * comp)
        self._low = np.ascontiguousarray(psi_k * (1.0 - comp))
        self._psi_head = np.ascontiguousarray(psi_k)
        self._low_abs = float(np.sum(psi_k))
        self.tol = float(tol) * w.scale
        self.remainder_bound = 0.0
        self._series = None
        self._general = None
        if w.kind == "power":
            self._series = PowerSeries(w.r)
            self.k_tail = None
            self.t_floor = 0.0
        elif w.kind == "custom":
            self.t_floor = 1e-4 / n if t_floor is None else float(t_floor)
            self.k_tail, self.remainder_bound = self._custom_cut()
            kk = np.arange(n, self.k_tail, dtype=float)
            self._custom_tail = np.ascontiguousarray(
                np.concatenate([np.zeros(n - 1), eval_psi(w, kk)]) if kk.size else np.zeros(0))
            self._abs_sum = float(np.sum(self._custom_tail))
        else:
            self.t_floor = 0.0
            self._general = _GeneralTail(w, n, self.tol)
            self.k_tail = self._general.cut
            self._abs_sum = float(np.sum(self._general.coef))

    def _custom_cut(self):
        w = self.spec.psi
        den = 2.0 * math.sin(0.5 * self.t_floor)
        K = max(2 * self.n, 64)
        while True:
            b = float(eval_psi(w, float(K))) / den
            if b <= self.tol:
                return K, b
            K *= 2
            if K > K_MAX:
                raise TruncationError(f"custom tail not certified within {K_MAX} terms")

    # raw cosine / sine sums at t in (0, pi] --------------------------------
    def _tail_cs(self, t):
        if self._series is not None:
            C, S = self._series(t)
            sc = self.spec.psi.scale
            hc, hs = _kernels.cos_sin_sums(self._psi_head, self._psi_head, t)
            return sc * C - hc, sc * S - hs
        if self._general is not None:
            C, S, _ = self._general(t)
            self.remainder_bound = self._general.remainder_bound
            return C, S
        return _kernels.cos_sin_sums(self._custom_tail, self._custom_tail, t)

    def _kernel_cs(self, t):
        if self._series is not None:
            C, S = self._series(t)
            sc = self.spec.psi.scale
            lc, ls = _kernels.cos_sin_sums(self._low, self._low, t)
            return sc * C - lc, sc * S - ls
        tc, ts = self._tail_cs(t)
        hc, hs = _kernels.cos_sin_sums(self.head_coefficients, self.head_coefficients, t)
        return hc + tc, hs + ts

    def noise(self, t):
        """Rounding-error estimate of K at |t| (same for K(t) and K(-t))."""
        a = np.abs(np.asarray(t, dtype=float))
        if self._series is not None:
            C, S = self._series(a)
            big = self.spec.psi.scale * (np.abs(C) + np.abs(S))
        else:
            big = self._abs_sum
        return 16.0 * EPS * (big + self._low_abs)

    def _reduce(self, t):
        t = np.ascontiguousarray(np.atleast_1d(np.asarray(t, dtype=float)))
        # reduce only when needed: t + pi would round tiny t to zero
        u = np.where(np.abs(t) <= math.pi, t, np.remainder(t + math.pi, 2.0 * math.pi) - math.pi)
        return np.abs(u), np.where(u < 0, -1.0, 1.0)

    def even_odd(self, t):
        """(E, O) at t in [0, pi] with K(t) = E + O and K(-t) = E - O."""
        a = np.ascontiguousarray(np.asarray(t, dtype=float))
        C, S = self._kernel_cs(a)
        th = self.spec.theta
        return math.cos(th) * C, -math.sin(th) * S

    def _phase(self, C, S, sign):
        th = self.spec.theta
        return math.cos(th) * C - math.sin(th) * sign * S

    def __call__(self, t):
        a, sign = self._reduce(t)
        out = self._phase(*self._kernel_cs(a), sign)
        return float(out[0]) if np.ndim(t) == 0 else out.reshape(np.shape(t))

    def head_part(self, t):
        a, sign = self._reduce(t)
        out = self._phase(*_kernels.cos_sin_sums(self.head_coefficients, self.head_coefficients, a), sign)
        return float(out[0]) if np.ndim(t) == 0 else out.reshape(np.shape(t))

    def tail_part(self, t):
        a, sign = self._reduce(t)
        out = self._phase(*self._tail_cs(a), sign)
        return float(out[0]) if np.ndim(t) == 0 else out.reshape(np.shape(t))


def deviation_kernel_eval(K: DeviationKernel, t):
    """K_n(t): head sum plus generating-kernel tail, both with phase +beta pi/2."""
    return K(t)
