"""Numerical checks of the two auxiliary series estimates.

lemma1, the telescoped tail sum::

    psi(n) n^r <= sum_{k>=n} (psi(k) - psi(k+1)) k^r <= K psi(n) n^r

lemma2, weighted partial sums for slowly oscillating g::

    |sum_{k<=N} g(k) k^-r sin kx|, |sum_{k<=N} g(k) k^-r cos kx| <= C g(1/x) x^(r-1)

The first is evaluated with a certified truncation bracket, the second as
an empirical sup ratio whose stability under doubling of N is reported.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from . import _kernels
from .errors import DomainError, ParameterError, PrecisionError
from .weights import (WeightFunction, _almost_decreasing_constant, _logvals, _nonincreasing,
                      classify_zygmund, eval_psi, geometric_grid)

BRACKET_RTOL = 1e-6
DRIFT_TOL = 0.10
LOWER_SLACK = 1e-9
LEMMA1_TAIL = 2 ** 20
LEMMA1_EPS = 2.0 ** -4
LEMMA2_N_MAX = 2 ** 16
LOG_X_MAX = 700.0
ROW_HEADER = ("lemma", "function", "r", "trig", "n", "x", "value", "bound", "ratio")


# ---------------------------------------------------------------------------
# lemma1: telescoped tail sum

def lemma1_precondition(w: WeightFunction, r: float) -> Optional[str]:
    """None when the hypotheses hold, otherwise the reason they fail.

    Catalog weights decay like t^-r0 up to logarithms, so k^(r+eps) psi is
    almost decreasing exactly when r0 > r.  Custom weights are tested on a
    geometric grid up to 2^20 (the grid is cut where psi underflows).
    """
    if not 0.0 < r <= 1.0:
        raise ParameterError("r must lie in (0, 1]")
    grid = geometric_grid(2.0 ** 22, 64)
    logpsi = _logvals(w, grid)
    finite = np.isfinite(logpsi)
    cut = int(np.argmin(finite)) if not finite.all() else grid.size
    if not finite[:cut].all() or cut < 2:
        return "psi is not finite on the grid"
    if not _nonincreasing(logpsi[:cut]):
        return "psi is not non-increasing"
    if w.is_catalog:
        return None if w.r > r else f"decay exponent {w.r:g} does not exceed r = {r:g}"
    logt = np.log(grid[:cut])
    inner = grid[:cut] <= 2.0 ** 20
    k_small = _almost_decreasing_constant(logpsi[:cut][inner], logt[inner], r + LEMMA1_EPS)
    k_big = _almost_decreasing_constant(logpsi[:cut], logt, r + LEMMA1_EPS)
    if not (math.isfinite(k_big) and k_big <= k_small * (1.0 + 1e-9)):
        return "t^(r+eps) psi is not almost decreasing"
    return None


@dataclass(frozen=True)
class Lemma1Value:
    value: float
    lower: float
    upper: float
    base: float  # psi(n) n^r

    @property
    def ratio(self):
        return self.value / self.base


def _diff_tail_integral(w: WeightFunction, r: float, a: float) -> float:
    """int_a^inf psi(x) (x^r - (x-1)^r) dx, taken in the variable u = ln x."""
    def integrand(u):
        x = math.exp(u)
        lpsi = float(w.log(np.array([x]))[0])
        if not math.isfinite(lpsi):
            return 0.0
        # x^r - (x-1)^r = x^r * (-expm1(r log1p(-1/x)))
        ldiff = r * u + math.log(-math.expm1(r * math.log1p(-1.0 / x)))
        return math.exp(lpsi + ldiff + u)

    lo = math.log(a)
    # stop where psi underflows: the non-increasing integrand is zero from there on
    hi = LOG_X_MAX
    if integrand(hi) == 0.0:
        hi = next(u for u in np.linspace(lo, LOG_X_MAX, 2049) if integrand(u) == 0.0)
    if hi <= lo:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=1e-10, limit=500)
        except integrate.IntegrationWarning as exc:
            raise PrecisionError(f"tail integral did not converge: {exc}") from None
    # the integrand decays geometrically in u beyond LOG_X_MAX
    end = integrand(LOG_X_MAX)
    rate = (w.r - r) if w.is_catalog else 1.0
    return val + err + (end / rate if end > 0 else 0.0)


def _lemma1_series(w: WeightFunction, r: float, n: int, N: int):
    """Terms (psi(k) - psi(k+1)) k^r for k = n..N and the bracketed remainder."""
    k = np.arange(n, N + 2, dtype=float)
    psi = eval_psi(w, k)
    terms = (psi[:-1] - psi[1:]) * k[:-1] ** r
    edge = float(psi[-1]) * (N + 1.0) ** r
    return terms, edge + _diff_tail_integral(w, r, N + 2.0), edge + _diff_tail_integral(w, r, N + 1.0)


def _bracket(head, lo_rem, hi_rem, base):
    lower, upper = head + lo_rem, head + hi_rem
    value = 0.5 * (lower + upper)
    if upper - lower > BRACKET_RTOL * abs(value):
        raise PrecisionError(f"tail-sum bracket [{lower!r}, {upper!r}] wider than {BRACKET_RTOL:g} relative")
    return Lemma1Value(value, lower, upper, base)


def _check_args(w, r, n, N):
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")
    if int(N) < n:
        raise ParameterError("tail_terms must be at least n")
    reason = lemma1_precondition(w, r)
    if reason is not None:
        raise DomainError(f"tail-sum hypotheses fail: {reason}")


def lemma1_details(w: WeightFunction, r: float, n: int, tail_terms: int = LEMMA1_TAIL) -> Lemma1Value:
    """sum_{k>=n} (psi(k) - psi(k+1)) k^r with a certified truncation bracket.

    Terms k = n..N (N = tail_terms) are summed directly.  Past N the series
    equals psi(N+1)(N+1)^r + sum_{k>=N+2} psi(k)(k^r - (k-1)^r), whose terms
    are non-increasing, so the last sum lies between the integrals of the
    same expression from N+2 and from N+1.
    """
    _check_args(w, r, n, tail_terms)
    n, N = int(n), int(tail_terms)
    terms, lo_rem, hi_rem = _lemma1_series(w, r, n, N)
    return _bracket(math.fsum(terms), lo_rem, hi_rem, float(eval_psi(w, float(n))) * n ** r)


def lemma1_sum(w: WeightFunction, r: float, n: int, tail_terms: int = LEMMA1_TAIL) -> float:
    return lemma1_details(w, r, n, tail_terms).value


# ---------------------------------------------------------------------------
# sweep results

@dataclass
class LemmaSweepResult:
    grid: dict
    min_ratio: float
    max_ratio: float
    violations: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    drift: float = math.nan
    skipped: list = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(ROW_HEADER)
        for row in self.rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])
        return buf.getvalue()

    def summary(self) -> dict:
        return {"grid": self.grid, "min_ratio": self.min_ratio, "max_ratio": self.max_ratio,
                "drift": self.drift, "violations": self.violations, "skipped": self.skipped,
                "rows": len(self.rows)}


def lemma1_catalog():
    """Weights used by the default lemma1 sweep."""
    return [
        WeightFunction.power(0.75),
        WeightFunction.power(1.5),
        WeightFunction.power(3.0),
        WeightFunction.powerlog(1.5, 1.0, 2.0),
        WeightFunction.powerinvlog(1.0, 1.0, 1.0),
        WeightFunction.powerloglog(2.0, 1.0, 20.0),
        WeightFunction.custom(lambda t: np.exp2(-np.asarray(t, dtype=float)), name="exp2",
                              mp_rule=lambda t: 2 ** -t),
    ]


def lemma1_sweep(weights=None, r_values=(0.25, 0.5, 1.0), n_values=None,
                 tail_terms: int = LEMMA1_TAIL) -> LemmaSweepResult:
    """Lower-bound check and upper ratio at every grid point, at N and 2N.

    A point whose hypotheses fail is listed in ``skipped`` rather than
    tested.  ``drift`` is the largest relative change of the per-(psi, r)
    maximal ratio when tail_terms doubles.
    """
    weights = lemma1_catalog() if weights is None else list(weights)
    n_values = [2 ** j for j in range(11)] if n_values is None else sorted(int(n) for n in n_values)
    rows, violations, skipped, ratios, drifts = [], [], [], [], []
    for w in weights:
        for r in r_values:
            reason = lemma1_precondition(w, r)
            if reason is not None:
                skipped.append({"psi": str(w), "r": r, "reason": reason})
                continue
            best = {}
            for N in (tail_terms, 2 * tail_terms):
                _check_args(w, r, n_values[0], N)
                terms, lo_rem, hi_rem = _lemma1_series(w, r, 1, N)
                suffix = np.cumsum(terms[::-1])[::-1]  # positive terms: no cancellation
                best[N] = 0.0
                for n in n_values:
                    base = float(eval_psi(w, float(n))) * n ** r
                    v = _bracket(float(suffix[n - 1]), lo_rem, hi_rem, base)
                    best[N] = max(best[N], v.ratio)
                    if N != tail_terms:
                        continue
                    rows.append([1, str(w), float(r), "", n, "", v.value, v.base, v.ratio])
                    ratios.append(v.ratio)
                    if v.upper < v.base * (1.0 - LOWER_SLACK):
                        violations.append({"psi": str(w), "r": r, "n": n, "sum": v.upper, "bound": v.base})
            drift = abs(best[2 * tail_terms] - best[tail_terms]) / best[tail_terms]
            drifts.append(drift)
            if not drift < DRIFT_TOL:
                violations.append({"psi": str(w), "r": r, "upper_ratio_drift": drift})
    grid = {"psi": [str(w) for w in weights], "r": list(r_values), "n": n_values, "tail_terms": tail_terms}
    return LemmaSweepResult(grid, min(ratios, default=math.nan), max(ratios, default=math.nan),
                            violations, rows, max(drifts, default=math.nan), skipped)


# ---------------------------------------------------------------------------
# lemma2: weighted partial sums

@dataclass(frozen=True)
class SlowFunction:
    """A positive function on t > 0 with a vectorized rule."""

    name: str
    rule: Callable

    def __call__(self, t):
        return np.asarray(self.rule(np.asarray(t, dtype=float)), dtype=float)

    def log(self, t):
        return np.log(self(t))

    def __str__(self):
        return self.name


G_ONE = SlowFunction("1", lambda t: np.ones_like(t))
G_LOG = SlowFunction("ln(t+1)", np.log1p)
G_INVLOG = SlowFunction("1/ln(t+1)", lambda t: 1.0 / np.log1p(t))
LEMMA2_CATALOG = (G_ONE, G_LOG, G_INVLOG)


def default_x_grid(points: int = 256, x_min: float = 1e-4):
    return np.geomspace(x_min, math.pi, points)


def lemma2_sup_ratio(g, r: float, N_set=None, x_grid=None, trig: str = "sine") -> LemmaSweepResult:
    """max over N in N_set and x of |sum_{k<=N} g(k) k^-r trig(kx)| / (g(1/x) x^(r-1)).

    The partial-sum maximum is running, so the entry for the largest N
    covers every smaller N as well.  ``drift`` compares the maxima up to the
    largest N and up to half of it.
    """
    if not 0.0 < r < 1.0:
        raise ParameterError("r must lie in (0, 1)")
    if trig not in ("sine", "cosine"):
        raise ParameterError("trig must be 'sine' or 'cosine'")
    if not classify_zygmund(g).member:
        raise DomainError(f"{g} is not slowly oscillating on the test grid")
    N_set = [2 ** j for j in range(10, 17)] if N_set is None else sorted({int(v) for v in N_set})
    if N_set[0] < 1:
        raise ParameterError("N values must be positive")
    x = default_x_grid() if x_grid is None else np.asarray(x_grid, dtype=float)
    if np.any(x <= 0) or np.any(x > math.pi):
        raise DomainError("x must lie in (0, pi]")
    half = max(1, N_set[-1] // 2)
    checkpoints = sorted(set(N_set) | {half})
    k = np.arange(1, checkpoints[-1] + 1, dtype=float)
    coef = np.ascontiguousarray(g(k) * k ** -r)
    sup = _kernels.partial_sum_sup(coef, np.ascontiguousarray(x), trig == "sine",
                                   np.asarray(checkpoints, dtype=np.int64))
    denom = g(1.0 / x) * x ** (r - 1.0)
    ratio = sup / denom
    per_N = {N: float(ratio[checkpoints.index(N)].max()) for N in checkpoints}
    top, prev = per_N[N_set[-1]], per_N[half]
    drift = abs(top - prev) / prev if prev > 0 else (0.0 if top == 0 else math.inf)
    rows = [[2, str(g), float(r), trig, N, float(xi), float(sup[j, i]), float(denom[i]), float(ratio[j, i])]
            for N in N_set for j in [checkpoints.index(N)] for i, xi in enumerate(x)]
    violations = []
    if not np.all(np.isfinite(ratio)):
        violations.append({"g": str(g), "r": r, "trig": trig, "reason": "non-finite ratio"})
    if not drift < DRIFT_TOL:
        violations.append({"g": str(g), "r": r, "trig": trig, "drift": drift,
                           "max_ratio_half": prev, "max_ratio": top})
    grid = {"g": str(g), "r": r, "trig": trig, "N": N_set, "x_points": int(x.size),
            "x_min": float(x.min()), "x_max": float(x.max())}
    return LemmaSweepResult(grid, float(ratio[checkpoints.index(N_set[-1])].min()), top, violations,
                            rows, drift)


def sweeps_to_csv(results) -> str:
    """All rows of several sweeps under one header."""
    merged = LemmaSweepResult({}, math.nan, math.nan, rows=[row for res in results for row in res.rows])
    return merged.to_csv()


def lemma2_sweep(g_values=LEMMA2_CATALOG, r_values=(0.3, 0.5, 0.7), trigs=("sine", "cosine"),
                 N_max: int = LEMMA2_N_MAX, x_grid=None) -> list:
    """One result per (g, r, trig), in that nesting order."""
    N_set = [N_max // 2, N_max]
    return [lemma2_sup_ratio(g, r, N_set, x_grid, t) for g in g_values for r in r_values for t in trigs]
