"""Weight functions psi, the derived function g_{s,p}, and numerical class tests.

Every classification below is a finite test on a deterministic geometric
grid; the grids and thresholds are module constants so results are
reproducible.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import mpmath
import numpy as np
from scipy import integrate

from .errors import DomainError, ParameterError, QuadratureError

KINDS = ("power", "powerlog", "powerinvlog", "powerloglog", "custom")

# epsilon grid for A+/A- and the delta set for slow oscillation
EPSILONS = tuple(2.0 ** -k for k in range(21))
DELTAS = (0.5, 0.1, 0.02)
MONO_TOL = 1e-12
THETA_GROWTH_TOL = 1e-9
ZYGMUND_T0 = 64.0
ZYGMUND_TMAX = 1e200
BAND_FACTOR = 4.0
BOUNDED_INTEGRAL_INCREMENT = 0.1


@dataclass(frozen=True)
class WeightFunction:
    """A positive weight psi(t), t >= 1.

    Catalog kinds (``r``, ``alpha``, ``c`` as in the usual notation)::

        power        t^-r
        powerlog     ln^alpha(t + c) / t^r
        powerinvlog  1 / (t^r ln^alpha(t + c))
        powerloglog  ln(ln^alpha(t + c)) / t^r

    ``custom`` wraps an arbitrary vectorized rule; it may vanish (degenerate
    weights are allowed for testing) but must not be negative.
    """

    kind: str
    r: float = 1.0
    alpha: float = 1.0
    c: float = 0.0
    scale: float = 1.0
    rule: Optional[Callable] = field(default=None, compare=False)
    mp_rule: Optional[Callable] = field(default=None, compare=False)
    name: Optional[str] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown weight kind {self.kind!r}")
        if self.kind == "custom" and self.rule is None:
            raise ParameterError("custom weight needs a rule")
        if not self.scale > 0:
            raise ParameterError("scale must be positive")
        if self.kind in ("powerlog", "powerloglog") and self.alpha <= 0:
            raise ParameterError("alpha must be positive")
        if self.kind == "powerinvlog" and (self.alpha <= 0 or self.c <= 0):
            raise ParameterError("powerinvlog needs alpha > 0 and c > 0")
        if self.kind == "powerloglog" and math.log(1.0 + self.c) <= 1.0:
            # ln ln(t + c) must stay positive on t >= 1
            raise ParameterError("powerloglog needs c > e - 1")

    # constructors -------------------------------------------------------
    @classmethod
    def power(cls, r):
        return cls("power", r=float(r))

    @classmethod
    def powerlog(cls, r, alpha, c):
        return cls("powerlog", r=float(r), alpha=float(alpha), c=float(c))

    @classmethod
    def powerinvlog(cls, r, alpha, c):
        return cls("powerinvlog", r=float(r), alpha=float(alpha), c=float(c))

    @classmethod
    def powerloglog(cls, r, alpha, c):
        return cls("powerloglog", r=float(r), alpha=float(alpha), c=float(c))

    @classmethod
    def custom(cls, rule, name="custom", mp_rule=None):
        return cls("custom", rule=rule, mp_rule=mp_rule, name=name)

    def scaled(self, factor):
        return WeightFunction(self.kind, self.r, self.alpha, self.c, self.scale * factor,
                              self.rule, self.mp_rule, self.name)

    # evaluation ---------------------------------------------------------
    @property
    def is_catalog(self):
        return self.kind != "custom"

    def __call__(self, t):
        return eval_psi(self, t)

    def log(self, t):
        """ln psi(t) without forming psi (safe for very large t)."""
        t = _checked(t)
        lt = np.log(t)
        ls = math.log(self.scale)
        if self.kind == "power":
            out = ls - self.r * lt
        elif self.kind == "powerlog":
            out = ls + self.alpha * np.log(np.log(t + self.c)) - self.r * lt
        elif self.kind == "powerinvlog":
            out = ls - self.alpha * np.log(np.log(t + self.c)) - self.r * lt
        elif self.kind == "powerloglog":
            out = ls + np.log(self.alpha * np.log(np.log(t + self.c))) - self.r * lt
        else:
            with np.errstate(divide="ignore"):
                out = ls + np.log(self.rule(t))
        return out

    def mp(self, t):
        """High-precision value at a single point (None when unavailable)."""
        t = mpmath.mpf(t)
        if self.kind == "power":
            v = t ** (-self.r)
        elif self.kind == "powerlog":
            v = mpmath.log(t + self.c) ** self.alpha / t ** self.r
        elif self.kind == "powerinvlog":
            v = 1 / (t ** self.r * mpmath.log(t + self.c) ** self.alpha)
        elif self.kind == "powerloglog":
            v = self.alpha * mpmath.log(mpmath.log(t + self.c)) / t ** self.r
        elif self.mp_rule is not None:
            v = self.mp_rule(t)
        else:
            return None
        return self.scale * v

    def to_config(self):
        """Inverse of :func:`parse_weight` for catalog kinds."""
        if self.kind == "custom":
            return f"kind=custom name={self.name}"
        parts = [f"kind={self.kind}", f"r={self.r!r}"]
        if self.kind != "power":
            parts += [f"alpha={self.alpha!r}", f"c={self.c!r}"]
        if self.scale != 1.0:
            parts.append(f"scale={self.scale!r}")
        return " ".join(parts)

    def __str__(self):
        return self.to_config()


def _checked(t):
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 1.0) or np.any(np.isnan(arr)):
        raise DomainError("weights are defined for t >= 1 only")
    return arr


def eval_psi(w: WeightFunction, t):
    """psi(t) by the closed form of the weight's kind; raises for t < 1."""
    arr = _checked(t)
    if w.kind == "power":
        out = arr ** (-w.r)
    elif w.kind == "powerlog":
        out = np.log(arr + w.c) ** w.alpha / arr ** w.r
    elif w.kind == "powerinvlog":
        out = 1.0 / (arr ** w.r * np.log(arr + w.c) ** w.alpha)
    elif w.kind == "powerloglog":
        out = w.alpha * np.log(np.log(arr + w.c)) / arr ** w.r
    else:
        out = np.asarray(w.rule(arr), dtype=float)
        if np.any(out < 0):
            raise DomainError("custom weight returned a negative value")
    out = w.scale * out
    return float(out) if np.ndim(out) == 0 else out


def scalar_rule(w: WeightFunction):
    """A plain-float psi for scalar integrators (no domain check)."""
    sc, r, al, c = w.scale, w.r, w.alpha, w.c
    log = math.log
    if w.kind == "power":
        return lambda x: sc * x ** -r
    if w.kind == "powerlog":
        return lambda x: sc * log(x + c) ** al * x ** -r
    if w.kind == "powerinvlog":
        return lambda x: sc / (x ** r * log(x + c) ** al)
    if w.kind == "powerloglog":
        return lambda x: sc * al * log(log(x + c)) * x ** -r
    return lambda x: float(eval_psi(w, x))


def parse_weight(line: str) -> WeightFunction:
    """Parse ``kind=power r=0.75`` style config lines."""
    fields = {}
    for token in line.replace(",", " ").split():
        if "=" not in token:
            raise ParameterError(f"malformed weight token {token!r}")
        key, value = token.split("=", 1)
        fields[key.strip().lower()] = value.strip()
    kind = fields.pop("kind", None)
    if kind is None:
        raise ParameterError("weight config needs kind=...")
    kind = kind.lower()
    if kind not in KINDS or kind == "custom":
        raise ParameterError(f"weight kind {kind!r} cannot be parsed from a config line")
    try:
        r = float(fields.pop("r"))
    except KeyError:
        raise ParameterError("weight config needs r=...") from None
    kwargs = {"r": r}
    if kind != "power":
        try:
            kwargs["alpha"] = float(fields.pop("alpha"))
            kwargs["c"] = float(fields.pop("c"))
        except KeyError as exc:
            raise ParameterError(f"{kind} needs {exc.args[0]}=...") from None
    if "scale" in fields:
        kwargs["scale"] = float(fields.pop("scale"))
    if fields:
        raise ParameterError(f"unknown weight fields {sorted(fields)}")
    return WeightFunction(kind, **kwargs)


@dataclass(frozen=True)
class GFunction:
    """g_{s,p}(t) = psi(t) t^(s + 1/p)."""

    base: WeightFunction
    s: float
    p: float

    def __post_init__(self):
        if not self.s > 0:
            raise ParameterError("s must be positive")
        if not 1.0 < self.p < math.inf:
            raise ParameterError("p must lie in (1, inf)")

    @property
    def exponent(self):
        return self.s + 1.0 / self.p

    def __call__(self, t):
        arr = _checked(t)
        out = eval_psi(self.base, arr) * arr ** self.exponent
        return float(out) if np.ndim(out) == 0 else out

    def log(self, t):
        arr = _checked(t)
        return self.base.log(arr) + self.exponent * np.log(arr)


@dataclass(frozen=True)
class ClassSpec:
    """Parameters (psi, beta, p, s) of the class and of the summation method."""

    psi: WeightFunction
    beta: float
    p: float
    s: float

    def __post_init__(self):
        if not (1.0 < self.p < math.inf):
            raise ParameterError("p must lie strictly inside (1, inf)")
        if not self.s > 0:
            raise ParameterError("s must be positive")
        validate_catalog(self.psi, self.p)

    @property
    def p_prime(self):
        return self.p / (self.p - 1.0)

    @property
    def theta(self):
        """Phase beta*pi/2."""
        return self.beta * math.pi / 2.0

    @property
    def g(self):
        return GFunction(self.psi, self.s, self.p)


def validate_catalog(w: WeightFunction, p: float):
    """Check the catalog parameter constraints that place psi in Theta_p."""
    if w.kind == "custom":
        return
    if not w.r > 1.0 / p:
        raise ParameterError(f"{w.kind} needs r > 1/p = {1.0 / p:g}")
    if w.kind in ("powerlog", "powerloglog"):
        bound = math.exp(2.0 * w.alpha / (w.r - 1.0 / p)) - 1.0
        if not w.c > bound:
            raise ParameterError(f"{w.kind} needs c > {bound:.6g} for p = {p:g}")


# ---------------------------------------------------------------------------
# grids and monotonicity helpers

def geometric_grid(t_max, per_octave=64, t_min=1.0):
    octaves = math.log2(t_max / t_min)
    npts = max(2, int(math.ceil(octaves * per_octave)) + 1)
    return np.geomspace(t_min, t_max, npts)


def _logvals(g, t):
    if hasattr(g, "log"):
        return np.asarray(g.log(t), dtype=float)
    with np.errstate(divide="ignore"):
        return np.log(np.asarray(g(t), dtype=float))


def _nondecreasing(logv):
    return bool(np.all(np.diff(logv) >= -MONO_TOL))


def _nonincreasing(logv):
    return bool(np.all(np.diff(logv) <= MONO_TOL))


# ---------------------------------------------------------------------------
# Theta_p

@dataclass
class ThetaResult:
    member: bool
    alpha: float
    K: float
    alpha_max: float = float("nan")


def _almost_decreasing_constant(logpsi, logt, alpha):
    h = alpha * logt + logpsi
    running_min = np.minimum.accumulate(h)
    return math.exp(max(0.0, float(np.max(h - running_min))))


def classify_theta_p(w: WeightFunction, p: float, t_max=2.0 ** 20, per_octave=64) -> ThetaResult:
    """Numerical membership test for Theta_p.

    t^alpha psi(t) must be almost decreasing for some alpha > 1/p.  For a
    candidate alpha the constant K = max_{t1 >= t2} t1^a psi(t1) / (t2^a psi(t2))
    is computed on [1, T] and on [1, 4T]; alpha is accepted when K stays
    finite and does not grow.  The valid alphas form an interval
    (1/p, alpha_max]; the reported witness is its midpoint.
    """
    if t_max < 2.0 ** 16:
        raise ParameterError("grid must reach at least 2^16")
    grid = geometric_grid(4.0 * t_max, per_octave)
    logt = np.log(grid)
    logpsi = _logvals(w, grid)
    inner = grid <= t_max * (1 + 1e-12)
    if not np.all(np.isfinite(logpsi)) or not _nonincreasing(logpsi):
        a = 1.0 / p + 2.0 ** -20
        return ThetaResult(False, a, _almost_decreasing_constant(logpsi, logt, a))

    def constant(alpha):
        k_small = _almost_decreasing_constant(logpsi[inner], logt[inner], alpha)
        k_big = _almost_decreasing_constant(logpsi, logt, alpha)
        ok = math.isfinite(k_big) and k_big <= k_small * (1.0 + THETA_GROWTH_TOL)
        return ok, k_small

    base = 1.0 / p
    span = 2.0
    alphas = [base + span * 2.0 ** -j for j in range(21)]  # descending
    valid = [a for a in alphas if constant(a)[0]]
    if not valid:
        best = min(alphas, key=lambda a: constant(a)[1])
        return ThetaResult(False, best, constant(best)[1])
    lo = max(valid)
    idx = alphas.index(lo)
    if idx == 0:
        alpha_max = lo
    else:
        hi = alphas[idx - 1]
        for _ in range(50):
            mid = 0.5 * (lo + hi)
            if constant(mid)[0]:
                lo = mid
            else:
                hi = mid
        alpha_max = lo
    witness = 0.5 * (base + alpha_max)
    return ThetaResult(True, witness, constant(witness)[1], alpha_max)


# ---------------------------------------------------------------------------
# A+ / A-

class MonotoneClass(str, Enum):
    APLUS = "APlus"
    AMINUS = "AMinus"
    NEITHER = "neither"


@dataclass
class MonotoneResult:
    label: MonotoneClass
    epsilon: float = float("nan")


def classify_monotone_class(g, t_max=2.0 ** 20, per_octave=64) -> MonotoneResult:
    """A+ if g(t) t^-eps is non-decreasing for some eps on the grid, A- if
    g(t) t^eps is non-increasing; reports the largest eps that works."""
    grid = geometric_grid(t_max, per_octave)
    logt = np.log(grid)
    logg = _logvals(g, grid)
    for eps in EPSILONS:
        if _nondecreasing(logg - eps * logt):
            return MonotoneResult(MonotoneClass.APLUS, eps)
    for eps in EPSILONS:
        if _nonincreasing(logg + eps * logt):
            return MonotoneResult(MonotoneClass.AMINUS, eps)
    return MonotoneResult(MonotoneClass.NEITHER)


# ---------------------------------------------------------------------------
# slowly oscillating functions

@dataclass
class ZygmundResult:
    member: bool
    thresholds: dict  # delta -> first grid point from which both monotonicities hold


def classify_zygmund(g, t0=ZYGMUND_T0, t_max=ZYGMUND_TMAX, per_octave=16) -> ZygmundResult:
    """Slow-oscillation test.

    For each delta in (0.5, 0.1, 0.02): g t^delta must be non-decreasing and
    g t^-delta non-increasing from some grid point t_delta >= t0 onwards.
    "Sufficiently large" is made finite by requiring t_delta to lie in the
    lower half (log scale) of the grid, i.e. monotonicity holds on at least
    the upper half.  Evaluations happen in log space, so the grid may extend
    far beyond the range of double-precision g values.
    """
    grid = geometric_grid(t_max, per_octave, t_min=max(1.0, t0))
    logt = np.log(grid)
    logg = _logvals(g, grid)
    half = math.sqrt(t_max * max(1.0, t0))
    thresholds = {}
    member = bool(np.all(np.isfinite(logg)))
    for delta in DELTAS:
        up = np.diff(logg + delta * logt) >= -MONO_TOL
        down = np.diff(logg - delta * logt) <= MONO_TOL
        ok = up & down
        bad = np.nonzero(~ok)[0]
        start = 0 if bad.size == 0 else int(bad[-1]) + 1
        t_delta = float(grid[start]) if start < grid.size - 1 else math.inf
        thresholds[delta] = t_delta
        if not t_delta <= half:
            member = False
    return ZygmundResult(member, thresholds)


def integral_g_power(g, rho: float, n: float, rel_tol=1e-10) -> float:
    """int_1^n g^rho(t) / t dt, computed as int_0^{ln n} g^rho(e^u) du."""
    if not rho > 1:
        raise ParameterError("rho must exceed 1")
    if n < 1:
        raise DomainError("n must be >= 1")
    if n == 1:
        return 0.0
    upper = math.log(n)

    def integrand(u):
        return math.exp(rho * float(_logvals(g, np.array([math.exp(u)]))[0]))

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(integrand, 0.0, upper, epsabs=0.0, epsrel=rel_tol, limit=500)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"log-integral did not converge: {exc}") from None
    if err > max(rel_tol * abs(val), 1e-300) * 10:
        raise QuadratureError("log-integral did not converge", val, err)
    return val


# ---------------------------------------------------------------------------
# Z^+_rho / Z^-_rho

class ZRhoClass(str, Enum):
    ZPLUS = "ZPlus"
    ZMINUS = "ZMinus"
    NEITHER = "neither"


@dataclass
class ZRhoResult:
    label: ZRhoClass
    integral_bounded: bool
    n_values: list
    ratios: list  # g^rho(n) ln n / int_1^n g^rho / t
    integrals: list


def _band_bounded(values):
    v = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(v)) or np.any(v <= 0):
        return False
    med = float(np.median(v))
    return bool(v.max() <= BAND_FACTOR * med and v.min() >= med / BAND_FACTOR)


def classify_z_rho(g, rho: float, n_set=None) -> ZRhoResult:
    """Compare g^rho(n) ln n with the logarithmic integral over dyadic n.

    A ratio is "bounded" when, over the upper half of ``n_set``, its max and
    min stay within a factor 4 of the median.  A constant g satisfies both
    conditions and is reported as ZMinus.  The integral is flagged O(1) when
    its relative increment over the upper half of ``n_set`` is below 0.1.
    """
    if n_set is None:
        n_set = [2 ** k for k in range(1, 21)]
    n_set = sorted(int(n) for n in n_set)
    integrals = [integral_g_power(g, rho, n) for n in n_set]
    logg = _logvals(g, np.asarray(n_set, dtype=float))
    ratios = [math.exp(rho * lg) * math.log(n) / I for lg, n, I in zip(logg, n_set, integrals)]
    upper = slice(len(n_set) // 2, None)
    plus_bounded = _band_bounded(ratios[upper])
    minus_bounded = _band_bounded([1.0 / x for x in ratios[upper]])
    grid = geometric_grid(float(n_set[-1]), 64)
    lg = _logvals(g, grid)
    nondecr, nonincr = _nondecreasing(lg), _nonincreasing(lg)
    i_mid, i_top = integrals[len(n_set) // 2], integrals[-1]
    bounded = i_top > 0 and (i_top - i_mid) / i_top < BOUNDED_INTEGRAL_INCREMENT
    if nonincr and minus_bounded:
        label = ZRhoClass.ZMINUS
    elif nondecr and plus_bounded:
        label = ZRhoClass.ZPLUS
    else:
        label = ZRhoClass.NEITHER
    return ZRhoResult(label, bool(bounded), n_set, ratios, integrals)


# ---------------------------------------------------------------------------
# regime (which order estimate applies)

class RegimeLabel(str, Enum):
    APLUS = "APlus"
    ZYGMUND_UNBOUNDED = "ZygmundUnboundedIntegral"
    ZYGMUND_BOUNDED = "ZygmundBoundedIntegral"
    AMINUS = "AMinus"
    UNDETERMINED = "Undetermined"


BRANCH = {
    RegimeLabel.APLUS: 1,
    RegimeLabel.ZYGMUND_UNBOUNDED: 2,
    RegimeLabel.ZYGMUND_BOUNDED: 3,
    RegimeLabel.AMINUS: 3,
    RegimeLabel.UNDETERMINED: 0,
}

ORDER_FORMULA = {
    1: "psi(n) n^(1/p)",
    2: "n^(-s) (int_1^n g^p'(t)/t dt)^(1/p')",
    3: "n^(-s)",
    0: "undetermined",
}


@dataclass
class Regime:
    label: RegimeLabel
    theta: ThetaResult
    monotone: MonotoneResult
    zygmund: ZygmundResult
    z_rho: Optional[ZRhoResult]
    notes: list = field(default_factory=list)

    @property
    def branch(self):
        return BRANCH[self.label]

    @property
    def formula(self):
        return ORDER_FORMULA[self.branch]


def classify_regime(psi: WeightFunction, s: float, p: float) -> Regime:
    """Run every class test for (psi, s, p) and pick the order estimate."""
    g = GFunction(psi, s, p)
    p_prime = p / (p - 1.0)
    theta = classify_theta_p(psi, p)
    mono = classify_monotone_class(g)
    zyg = classify_zygmund(g)
    zr = classify_z_rho(g, p_prime) if zyg.member else None
    notes = []
    candidates = []
    if mono.label is MonotoneClass.APLUS:
        if theta.member:
            candidates.append(RegimeLabel.APLUS)
        else:
            notes.append("g in A+ but psi not in Theta_p")
    if mono.label is MonotoneClass.AMINUS:
        candidates.append(RegimeLabel.AMINUS)
    if zr is not None:
        if zr.label is ZRhoClass.ZPLUS:
            candidates.append(RegimeLabel.ZYGMUND_UNBOUNDED)
        elif zr.label is ZRhoClass.ZMINUS:
            candidates.append(RegimeLabel.ZYGMUND_BOUNDED if zr.integral_bounded
                              else RegimeLabel.ZYGMUND_UNBOUNDED)
        else:
            notes.append("g slowly oscillating but in neither Z+ nor Z-")
    if len(candidates) == 1:
        label = candidates[0]
    else:
        label = RegimeLabel.UNDETERMINED
        notes.append(f"conflicting or missing labels: {[c.value for c in candidates]}")
    return Regime(label, theta, mono, zyg, zr, notes)


def predicted_order(regime_or_branch, psi: WeightFunction, s: float, p: float, n: int) -> float:
    """Order-of-magnitude prediction for the worst-case error at n."""
    branch = regime_or_branch if isinstance(regime_or_branch, int) else regime_or_branch.branch
    if branch == 1:
        return eval_psi(psi, n) * n ** (1.0 / p)
    if branch == 2:
        p_prime = p / (p - 1.0)
        # the log-integral vanishes at n = 1; evaluate it from n = 2 up
        integral = integral_g_power(GFunction(psi, s, p), p_prime, max(n, 2))
        return integral ** (1.0 / p_prime) / n ** s
    if branch == 3:
        return float(n) ** -s
    return float("nan")
