"""Lower-bound witnesses: explicit class members f_1..f_4 whose deviation
|f(0) - Z^s_n(f; 0)| bounds the worst-case error from below.

Each phi_i is a trigonometric polynomial normalized by quadrature to unit
L_p norm, so f_i = Psi_beta * phi_i / pi lies in the class and its deviation
is computed from coefficients only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import special

from .errors import DomainError, ParameterError
from .norms import QuadratureConfig, lp_norm_periodic
from .trigcore import TrigPolynomial, convolve_class, dirichlet_beta, fejer_sum, zygmund_sum
from .weights import ClassSpec, eval_psi

NORM_SLACK = 1e-9


class Witness(str, Enum):
    F1 = "F1"
    F2 = "F2"
    F3 = "F3"
    F4 = "F4"


@dataclass(frozen=True)
class WitnessResult:
    which: Witness
    normalizer: float
    phi_norm: float
    deviation_at_zero: float
    valid: bool


def trig_poly_norm(P: TrigPolynomial, p: float, cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """||P||_p over [-pi, pi]; panels are at least twice the degree."""
    if P.degree == 0 and P.a0 == 0.0:
        return 0.0
    local = QuadratureConfig(panels=max(cfg.panels, 2 * P.degree, 2), refine_near_zero=False,
                             rel_tol=cfg.rel_tol, max_depth=cfg.max_depth)
    return lp_norm_periodic(P, p, local)


def dirichlet_norm(k: int, beta: float, q: float, cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """||D_{k,beta}||_q, the kernel including its constant term cos(beta pi/2)/2."""
    if k < 1:
        raise DomainError("k must be >= 1")
    local = QuadratureConfig(panels=max(cfg.panels, 2 * k), refine_near_zero=False,
                             rel_tol=cfg.rel_tol, max_depth=cfg.max_depth)
    return lp_norm_periodic(lambda t: dirichlet_beta(k, beta, t), q, local)


def cos_norm(p: float) -> float:
    """||cos||_p over a period, in closed form."""
    return (2.0 * math.sqrt(math.pi) * math.exp(special.gammaln((p + 1.0) / 2.0)
                                                - special.gammaln(p / 2.0 + 1.0))) ** (1.0 / p)


def _phase_poly(spec: ClassSpec, c):
    """sum_k c_k cos(kt + beta pi/2) as a TrigPolynomial."""
    c = np.asarray(c, dtype=float)
    return TrigPolynomial(0.0, c * math.cos(spec.theta), -c * math.sin(spec.theta))


def deviation_at_zero(spec: ClassSpec, phi: TrigPolynomial, n: int, method: str = "zygmund") -> float:
    """|f(0) - Z(f; 0)| for f = Psi_beta * phi / pi, by coefficient arithmetic."""
    f = convolve_class(spec, phi)
    if method == "zygmund":
        Z = zygmund_sum(f, n, spec.s)
    elif method == "fejer":
        if spec.s != 1.0:
            raise ParameterError("Fejer means correspond to s = 1")
        Z = fejer_sum(f, n)
    else:
        raise ParameterError(f"unknown method {method!r}")
    return abs(float((f + (-1.0) * Z)(0.0)))


def _normalized(spec, which, c, n, cfg, method):
    raw = _phase_poly(spec, c)
    if raw.degree == 0 or not np.any(c):
        return WitnessResult(which, 1.0, 0.0, 0.0, True)
    a = 1.0 / trig_poly_norm(raw, spec.p, cfg)
    phi = a * raw
    norm = trig_poly_norm(phi, spec.p, cfg)
    dev = deviation_at_zero(spec, phi, n, method)
    return WitnessResult(which, a, norm, dev, norm <= 1.0 + NORM_SLACK)


def _check_n(n):
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")
    return int(n)


def _g_values(spec, n):
    k = np.arange(1, n, dtype=float)
    return k, eval_psi(spec.psi, k) * k ** (spec.s + 1.0 / spec.p) if k.size else np.zeros(0)


def witness_f1(spec: ClassSpec, n: int, cfg: QuadratureConfig = QuadratureConfig(),
               method: str = "zygmund") -> WitnessResult:
    """phi_1 = a_1 n^(-1/p') sum_{k<n} cos(kt + beta pi/2)."""
    n = _check_n(n)
    c = np.full(n - 1, n ** (-1.0 / spec.p_prime))
    return _normalized(spec, Witness.F1, c, n, cfg, method)


def witness_f2(spec: ClassSpec, n: int, cfg: QuadratureConfig = QuadratureConfig(),
               method: str = "zygmund") -> WitnessResult:
    """phi_2 with coefficients g(k)^(p'-1) / k^(1/p'), scaled by (sum g^p'(k)/k)^(-1/p)."""
    n = _check_n(n)
    k, g = _g_values(spec, n)
    pp = spec.p_prime
    if k.size == 0:
        return _normalized(spec, Witness.F2, np.zeros(0), n, cfg, method)
    total = math.fsum(g ** pp / k)
    c = g ** (pp - 1.0) / k ** (1.0 / pp) / total ** (1.0 / spec.p)
    return _normalized(spec, Witness.F2, c, n, cfg, method)


def witness_f3(spec: ClassSpec, n: int, cfg: QuadratureConfig = QuadratureConfig(),
               method: str = "zygmund") -> WitnessResult:
    """phi_3 = a_3 ln^(-1/p) n sum_{k<n} cos(kt + beta pi/2) / k^(1/p')."""
    n = _check_n(n)
    if n < 2:
        raise DomainError("f3 needs n >= 2 (ln n > 0)")
    k = np.arange(1, n, dtype=float)
    c = k ** (-1.0 / spec.p_prime) / math.log(n) ** (1.0 / spec.p)
    return _normalized(spec, Witness.F3, c, n, cfg, method)


def witness_f4(spec: ClassSpec, n: int) -> WitnessResult:
    """f_4 = psi(1) (2 pi)^(-1/p) cos t, whose deviation is psi(1) (2 pi)^(-1/p) n^-s."""
    n = _check_n(n)
    amp = (2.0 * math.pi) ** (-1.0 / spec.p)
    norm = amp * cos_norm(spec.p)
    dev = eval_psi(spec.psi, 1.0) * amp / float(n) ** spec.s
    return WitnessResult(Witness.F4, amp, norm, dev, norm <= 1.0 + NORM_SLACK)


def f1_closed_form(spec: ClassSpec, n: int, a1: float) -> float:
    """(a_1 / n^(s + 1/p')) sum_{k<n} psi(k) k^s."""
    k = np.arange(1, n, dtype=float)
    return a1 / n ** (spec.s + 1.0 / spec.p_prime) * math.fsum(eval_psi(spec.psi, k) * k ** spec.s) \
        if k.size else 0.0


def f2_closed_form(spec: ClassSpec, n: int, a2: float) -> float:
    """(a_2 / n^s) (sum_{k<n} g^p'(k)/k)^(1/p')."""
    k, g = _g_values(spec, n)
    return a2 / n ** spec.s * math.fsum(g ** spec.p_prime / k) ** (1.0 / spec.p_prime) if k.size else 0.0


def f3_closed_form(spec: ClassSpec, n: int, a3: float) -> float:
    """(a_3 / (n^s ln^(1/p) n)) sum_{k<n} g(k)/k."""
    k, g = _g_values(spec, n)
    return a3 / (n ** spec.s * math.log(n) ** (1.0 / spec.p)) * math.fsum(g / k)


def all_witnesses(spec: ClassSpec, n: int, cfg: QuadratureConfig = QuadratureConfig(),
                  method: str = "zygmund") -> dict:
    """Every applicable witness at n, keyed F1..F4 (F3 is skipped at n = 1)."""
    out = {"F1": witness_f1(spec, n, cfg, method), "F2": witness_f2(spec, n, cfg, method)}
    if n >= 2:
        out["F3"] = witness_f3(spec, n, cfg, method)
    out["F4"] = witness_f4(spec, n)
    return out
