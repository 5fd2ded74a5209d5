"""Periodic L_q norms by adaptive composite Gauss-Legendre quadrature, the
worst-case class error as a dual norm, and the p = 2 Parseval closed form.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, fields
from typing import Callable, Optional

import numpy as np
from scipy import integrate, optimize, special

from .errors import DomainError, ParameterError, QuadratureError
from .trigcore import DeviationKernel
from .weights import ClassSpec, RegimeLabel, eval_psi, scalar_rule

GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureConfig:
    """Panel layout and tolerances.

    ``panels`` counts the initial uniform panels over [-pi, pi]; kernels of
    degree n never start coarser than about pi/n per panel.  ``t_min`` is
    the radius of the excluded neighbourhood of t = 0 (the piece inside is
    extrapolated from the local power law); ``None`` picks 1e-30 for
    closed-form kernels, 1e-16/n for other catalog kernels, 1e-4/n for
    custom kernels and 1e-12 for plain
    functions.
    """

    panels: int = 64
    refine_near_zero: bool = True
    t_min: Optional[float] = None
    rel_tol: float = 1e-10
    max_depth: int = 30

    def __post_init__(self):
        if self.panels < 2:
            raise ParameterError("need at least two panels")
        if self.t_min is not None and not self.t_min > 0:
            raise ParameterError("t_min must be positive")
        if not 0 < self.rel_tol <= 1e-4:
            raise ParameterError("rel_tol must lie in (0, 1e-4]")
        if self.max_depth < 1:
            raise ParameterError("max_depth must be >= 1")


@dataclass
class QuadResult:
    value: float
    error: float
    nodes: np.ndarray
    weights: np.ndarray
    noise: float = 0.0


def _gl(a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    x = mid[:, None] + half[:, None] * GL_NODES[None, :]
    w = half[:, None] * GL_WEIGHTS[None, :]
    return x, w


def adaptive_integrate(F: Callable, edges, rel_tol=1e-10, max_depth=30) -> QuadResult:
    """Integrate a vectorized F over consecutive panels given by ``edges``.

    Each leaf panel carries its 16-point estimate and the sum over its two
    halves; their discrepancy is the panel's error estimate.  While the
    summed error exceeds rel_tol * |I|, the panels with the largest errors
    are bisected (children inherit the halves as coarse estimates).  Panels
    whose discrepancy is at the roundoff floor are not refined further; F
    may return ``(values, noise)`` to raise that floor by its own rounding
    error estimate.
    A whole generation of panels is evaluated in one call to F, and the
    result is summed in panel order, so it does not depend on the order in
    which panels were refined.
    """
    edges = np.asarray(edges, dtype=float)
    A, B = edges[:-1].copy(), edges[1:].copy()

    def call(t):
        out = F(t)
        if isinstance(out, tuple):
            return out
        return out, 0.0

    x, w = _gl(A, B)
    Q = (call(x.ravel())[0].reshape(x.shape) * w).sum(axis=1)
    depth = np.zeros(A.size, dtype=int)
    leaves = None
    while True:
        M = 0.5 * (A + B)
        xl, wl = _gl(A, M)
        xr, wr = _gl(M, B)
        fl, nl = call(xl.ravel())
        fr, nr = call(xr.ravel())
        fl = fl.reshape(xl.shape)
        fr = fr.reshape(xr.shape)
        nl = np.broadcast_to(nl, xl.size).reshape(xl.shape)
        nr = np.broadcast_to(nr, xr.size).reshape(xr.shape)
        QL = (fl * wl).sum(axis=1)
        QR = (fr * wr).sum(axis=1)
        diff = np.abs(Q - (QL + QR))
        if not np.all(np.isfinite(diff)):
            raise QuadratureError("integrand is not finite on the panels")
        floor = (64.0 * EPS * ((np.abs(fl) * wl).sum(axis=1) + (np.abs(fr) * wr).sum(axis=1))
                 + 2.0 * ((nl * wl).sum(axis=1) + (nr * wr).sum(axis=1)))
        new = dict(a=A, b=B, ql=QL, qr=QR, err=diff, floor=floor, depth=depth,
                   x=np.concatenate([xl, xr], axis=1), w=np.concatenate([wl, wr], axis=1))
        leaves = new if leaves is None else {k: np.concatenate([leaves[k], new[k]]) for k in new}
        I = abs(leaves["ql"].sum() + leaves["qr"].sum())
        target = rel_tol * I
        live = np.where(leaves["err"] > leaves["floor"], leaves["err"], 0.0)
        if live.sum() <= target:
            break
        # refine the largest errors until the untouched rest fits in half the target
        order = np.argsort(live, kind="stable")
        keep_sum = np.cumsum(live[order])
        n_keep = int(np.searchsorted(keep_sum, 0.5 * target, side="right"))
        sel = np.zeros(live.size, dtype=bool)
        sel[order[n_keep:]] = True
        sel &= live > 0
        at_max = sel & (leaves["depth"] >= max_depth)
        sel &= ~at_max
        if not np.any(sel):
            raise QuadratureError("adaptive quadrature reached max_depth",
                                  estimate=float(leaves["ql"].sum() + leaves["qr"].sum()),
                                  error_bound=float(leaves["err"].sum()))
        pa, pb = leaves["a"][sel], leaves["b"][sel]
        pm = 0.5 * (pa + pb)
        A = np.concatenate([pa, pm])
        B = np.concatenate([pm, pb])
        Q = np.concatenate([leaves["ql"][sel], leaves["qr"][sel]])
        depth = np.concatenate([leaves["depth"][sel], leaves["depth"][sel]]) + 1
        leaves = {k: v[~sel] for k, v in leaves.items()}
    order = np.argsort(leaves["a"], kind="stable")
    q = np.stack([leaves["ql"][order], leaves["qr"][order]], axis=1)
    value = math.fsum(q.ravel())
    return QuadResult(value, math.fsum(leaves["err"]), leaves["x"][order].ravel(),
                      leaves["w"][order].ravel(), math.fsum(leaves["floor"]))


# ---------------------------------------------------------------------------
# panel layouts

def kernel_edges(n: int, cfg: QuadratureConfig, t_min: float):
    """Edges on [t_min, pi]: uniform panels of width about pi/n, dyadic toward 0."""
    m = max(cfg.panels // 2, int(n))
    h0 = math.pi / m
    uniform = np.linspace(h0, math.pi, m)
    if not cfg.refine_near_zero:
        return np.concatenate([[t_min], uniform])
    k = int(math.floor(math.log2(h0 / t_min)))
    dyadic = h0 * 2.0 ** -np.arange(k, 0, -1, dtype=float)
    return np.concatenate([[t_min], dyadic[dyadic > t_min], uniform])


def _near_zero_piece(G, t_min):
    """int_0^{t_min} G from the local power law G ~ t^a (value, error)."""
    g1, g2, g4 = (float(G(np.array([c * t_min]))[0]) for c in (1.0, 2.0, 4.0))
    if g1 <= 0.0:
        return 0.0, 0.0
    a = math.log2(g2 / g1)
    if not a > -1.0:
        raise QuadratureError("integrand is not integrable at t = 0", estimate=math.inf,
                              error_bound=math.inf)
    val = g1 * t_min / (a + 1.0)
    a2 = math.log2(g4 / g2) if g2 > 0 else a
    err = abs(val) * abs(a2 - a) / (a + 1.0)
    return val, err


# ---------------------------------------------------------------------------
# norms

def lp_norm_periodic(f: Callable, q: float, cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """(int_{-pi}^{pi} |f|^q dt)^(1/q) for a vectorized f."""
    return lp_norm_details(f, q, cfg)[0]


def lp_norm_details(f: Callable, q: float, cfg: QuadratureConfig = QuadratureConfig()):
    """Return (norm, bound on the error of the norm)."""
    if not 1.0 < q < math.inf:
        raise DomainError("q must lie in (1, inf)")
    F = lambda t: np.abs(f(t)) ** q  # noqa: E731
    m = cfg.panels
    if not cfg.refine_near_zero:
        res = adaptive_integrate(F, np.linspace(-math.pi, math.pi, m + 1), cfg.rel_tol, cfg.max_depth)
        total, err = res.value, res.error
        piece = 0.0
    else:
        t_min = 1e-12 if cfg.t_min is None else cfg.t_min
        half = kernel_edges(0, cfg, t_min)
        G = lambda t: F(t) + F(-t)  # noqa: E731
        res = adaptive_integrate(G, half, cfg.rel_tol, cfg.max_depth)
        piece, perr = _near_zero_piece(G, t_min)
        total, err = res.value + piece, res.error + perr
    _check(total, err, cfg, res.noise)
    norm = total ** (1.0 / q)
    return norm, norm * err / (q * total) if total > 0 else err ** (1.0 / q)


def _check(total, err, cfg, noise=0.0):
    if err > max(cfg.rel_tol * abs(total) + noise, 1e-300):
        raise QuadratureError("tolerance not met", estimate=total, error_bound=err)


def resolve_t_min(K: DeviationKernel, cfg: QuadratureConfig) -> float:
    if cfg.t_min is not None:
        return max(cfg.t_min, K.t_floor)
    return 1e-30 if K.spec.psi.kind == "power" else max(1e-16 / K.n, K.t_floor)


@dataclass
class ClassErrorDetails:
    """Dual-norm value and its by-products.

    ``value`` = (1/pi) min_c ||K_n - c||_{p'} is the supremum over the class;
    ``plain_norm`` = (1/pi) ||K_n||_{p'} and ``holder_bound`` (head and tail
    norms added) are the successively weaker upper bounds.
    """

    value: float
    error: float
    c_opt: float
    plain_norm: float
    holder_bound: Optional[float] = None


def _with_noise(kp, km, delta, q):
    """|k+|^q + |k-|^q and its rounding error from kernel errors delta."""
    ap, am = np.abs(kp), np.abs(km)
    val = ap ** q + am ** q
    return val, q * (ap ** (q - 1.0) + am ** (q - 1.0)) * delta


def _kernel_integral(K, q, c, cfg, t_min):
    def G(t):
        E, O = K.even_odd(t)
        return _with_noise(E + O - c, E - O - c, K.noise(t), q)

    res = adaptive_integrate(G, kernel_edges(K.n, cfg, t_min), cfg.rel_tol, cfg.max_depth)
    piece, perr = _near_zero_piece(lambda t: G(t)[0], t_min)
    total, err = res.value + piece, res.error + perr
    _check(total, err, cfg, res.noise)
    return total, err, res


def _part_norm(part, q, K, cfg, t_min):
    def G(t):
        return _with_noise(part(t), part(-t), K.noise(t), q)

    res = adaptive_integrate(G, kernel_edges(K.n, cfg, t_min), cfg.rel_tol, cfg.max_depth)
    piece, _ = _near_zero_piece(lambda t: G(t)[0], t_min)
    return (res.value + piece) ** (1.0 / q)


def class_error_details(spec: ClassSpec, n: int, cfg: QuadratureConfig = QuadratureConfig(),
                        method: str = "zygmund", holder: bool = False,
                        kernel: Optional[DeviationKernel] = None) -> ClassErrorDetails:
    K = kernel if kernel is not None else DeviationKernel(spec, n, method=method)
    q = spec.p_prime
    t_min = resolve_t_min(K, cfg)
    total0, err0, res = _kernel_integral(K, q, 0.0, cfg, t_min)
    plain = total0 ** (1.0 / q) / math.pi
    c_opt, total, err = 0.0, total0, err0
    if total0 > 0 and abs(q - 2.0) > 1e-15:
        # the kernel has zero mean, which is the minimizer only for q = 2
        E, O = K.even_odd(res.nodes)
        kp, km, wq = E + O, E - O, res.weights
        scale = math.sqrt(total0 / (2 * math.pi))

        def phi(c):
            return float(np.sum(wq * (np.abs(kp - c) ** q + np.abs(km - c) ** q)))

        opt = optimize.minimize_scalar(phi, bracket=(-0.1 * scale, 0.1 * scale),
                                       options={"xtol": 1e-10})
        if opt.fun < phi(0.0):
            c_opt = float(opt.x)
            total, err, _ = _kernel_integral(K, q, c_opt, cfg, t_min)
            if total > total0:
                c_opt, total, err = 0.0, total0, err0
    value = total ** (1.0 / q) / math.pi
    verr = value * err / (q * total) if total > 0 else 0.0
    hb = None
    if holder:
        hb = (_part_norm(K.head_part, q, K, cfg, t_min)
              + _part_norm(K.tail_part, q, K, cfg, t_min)) / math.pi
    return ClassErrorDetails(value, verr, c_opt, plain, hb)


def exact_class_error(spec: ClassSpec, n: int, cfg: QuadratureConfig = QuadratureConfig(),
                      method: str = "zygmund") -> float:
    """sup over the class of ||f - Z^s_n f||_C, i.e. (1/pi) min_c ||K_n - c||_{p'}."""
    return class_error_details(spec, n, cfg, method).value


# ---------------------------------------------------------------------------
# Parseval oracle

@dataclass
class ParsevalResult:
    value: float
    lower: float
    upper: float


def _sq_tail_integral(w, a):
    """int_a^inf psi(x)^2 dx."""
    if w.kind == "power":
        return w.scale ** 2 * a ** (1.0 - 2.0 * w.r) / (2.0 * w.r - 1.0)
    # x = a e^u turns the algebraic decay into an exponential one
    la = math.log(a)
    u_max = math.log(1e300) - la
    val, _ = integrate.quad(lambda u: math.exp(2.0 * float(w.log(a * math.exp(u))) + la + u),
                            0.0, u_max, epsabs=0.0, epsrel=1e-12, limit=500)
    return val


def parseval_details(spec: ClassSpec, n: int, tail_terms: Optional[int] = None,
                     method: str = "zygmund") -> ParsevalResult:
    """Closed form at p = 2 with a certified bracket for the truncated tail.

    Power weights with ``tail_terms=None`` use the Hurwitz zeta function for
    sum_{k>=n} psi(k)^2; otherwise the tail is summed to n + tail_terms and
    the rest is bracketed by integral comparison.
    """
    if spec.p != 2.0:
        raise ParameterError("the Parseval form needs p = 2")
    if n < 1:
        raise DomainError("n must be >= 1")
    w = spec.psi
    k = np.arange(1, n, dtype=float)
    if method == "fejer":
        comp = k / n
    else:
        comp = np.power(k / n, spec.s)
    head = math.fsum((eval_psi(w, k) * comp) ** 2) if n > 1 else 0.0
    if tail_terms is None and w.kind == "power":
        tail = w.scale ** 2 * float(special.zeta(2.0 * w.r, n))
        lo = hi = tail
    else:
        N = n + (2 ** 20 if tail_terms is None else int(tail_terms))
        kk = np.arange(n, N, dtype=float)
        direct = math.fsum(eval_psi(w, kk) ** 2)
        # psi^2 is non-increasing: int_N^inf <= sum_{k>=N} <= int_{N-1}^inf
        lo = direct + _sq_tail_integral(w, float(N))
        hi = direct + _sq_tail_integral(w, float(N - 1))
        tail = direct + _sq_tail_integral(w, float(N)) + 0.5 * float(eval_psi(w, float(N))) ** 2
        tail = min(max(tail, lo), hi)
    f = lambda x: math.sqrt((head + x) / math.pi)  # noqa: E731
    return ParsevalResult(f(tail), f(lo), f(hi))


def parseval_error(spec: ClassSpec, n: int, tail_terms: Optional[int] = None,
                   method: str = "zygmund") -> float:
    return parseval_details(spec, n, tail_terms, method).value


# ---------------------------------------------------------------------------
# per-n report

WITNESS_KEYS = ("f1", "f2", "f3", "f4")


@dataclass
class ErrorReport:
    n: int
    exact_error: float
    lower_bounds: dict = field(default_factory=dict)
    predicted_order: float = math.nan
    regime: RegimeLabel = RegimeLabel.UNDETERMINED
    ratio: float = math.nan
    failure: str = ""

    def check(self, tol=1e-6):
        if self.failure:
            return
        if not self.exact_error >= 0:
            raise ValueError("exact error must be non-negative")
        best = max((v for v in self.lower_bounds.values() if not math.isnan(v)), default=0.0)
        if best > self.exact_error + tol:
            raise ValueError(f"witness {best} exceeds exact error {self.exact_error}")

    def to_row(self):
        row = [str(self.n), _fmt(self.exact_error)]
        row += [_fmt(self.lower_bounds.get(k, math.nan)) for k in WITNESS_KEYS]
        row += [_fmt(self.predicted_order), self.regime.value, _fmt(self.ratio), self.failure]
        return row

    def to_dict(self):
        d = {}
        for f in fields(self):
            v = getattr(self, f.name)
            d[f.name] = v.value if isinstance(v, RegimeLabel) else v
        d["lower_bounds"] = {k: self.lower_bounds.get(k, math.nan) for k in WITNESS_KEYS}
        return d


CSV_HEADER = ["n", "exact_error"] + [f"lower_{k}" for k in WITNESS_KEYS] + \
    ["predicted_order", "regime", "ratio", "failure"]


def _fmt(x):
    return repr(float(x))


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in reports:
        w.writerow(r.to_row())
    return buf.getvalue()


def reports_to_json(reports, **extra) -> str:
    payload = dict(extra)
    payload["rows"] = [r.to_dict() for r in reports]
    return json.dumps(payload, indent=2, sort_keys=False, allow_nan=True)


__all__ = [
    "QuadratureConfig", "QuadResult", "adaptive_integrate", "lp_norm_periodic", "lp_norm_details",
    "ClassErrorDetails", "class_error_details", "exact_class_error", "ParsevalResult",
    "parseval_details", "parseval_error", "ErrorReport", "reports_to_csv", "reports_to_json",
]
