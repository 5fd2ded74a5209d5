"""Experiment drivers behind the command line: classification reports,
error tables over n, slope fits and lemma sweeps."""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import NUMERIC_ERRORS, ParameterError
from .extremals import all_witnesses
from .lemmas import lemma1_sweep, lemma2_sweep, sweeps_to_csv
from .norms import ErrorReport, QuadratureConfig, exact_class_error, reports_to_csv
from .weights import (BRANCH, ORDER_FORMULA, ClassSpec, RegimeLabel, classify_regime,
                      integral_g_power, predicted_order)

SLOPE_TOL = {1: 0.1, 2: 0.1, 3: 0.05}
BAND_FACTOR = 4.0
MIN_OCTAVES = 4


def dyadic(n_min: int, n_max: int) -> list:
    """Powers of two in [n_min, n_max]."""
    if n_min < 1 or n_max < n_min:
        raise ParameterError("need 1 <= n_min <= n_max")
    lo = math.ceil(math.log2(n_min))
    hi = math.floor(math.log2(n_max))
    return [2 ** j for j in range(lo, hi + 1)]


@dataclass
class ExperimentConfig:
    spec: ClassSpec
    n_values: list = field(default_factory=lambda: dyadic(2, 1024))
    cfg: QuadratureConfig = QuadratureConfig()
    method: str = "zygmund"
    outputs: dict = field(default_factory=dict)
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        self.n_values = [int(n) for n in self.n_values]
        if not self.n_values or any(n < 1 for n in self.n_values):
            raise ParameterError("n values must be >= 1")
        if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
            raise ParameterError("n values must be strictly increasing")
        if self.method not in ("zygmund", "fejer"):
            raise ParameterError(f"unknown method {self.method!r}")

    def resolved(self) -> dict:
        """Every input that affects the numbers, for the audit trail."""
        sp = self.spec
        return {
            "psi": sp.psi.to_config(), "p": sp.p, "s": sp.s, "beta": sp.beta,
            "method": self.method, "n_values": list(self.n_values),
            "quadrature": asdict(self.cfg), "seed": self.seed, "jobs": self.jobs,
            "outputs": dict(self.outputs),
        }


# ---------------------------------------------------------------------------
# classify

def cmd_classify(psi, p: float, s: float) -> dict:
    """Class labels, the selected order branch and its formula."""
    reg = classify_regime(psi, s, p)
    report = {
        "psi": psi.to_config(), "p": p, "s": s,
        "theta_p": {"member": reg.theta.member, "alpha": reg.theta.alpha, "K": reg.theta.K,
                    "alpha_max": reg.theta.alpha_max},
        "monotone": {"label": reg.monotone.label.value, "epsilon": reg.monotone.epsilon},
        "zygmund": {"member": reg.zygmund.member,
                    "thresholds": {str(k): v for k, v in reg.zygmund.thresholds.items()}},
        "z_rho": None if reg.z_rho is None else {
            "label": reg.z_rho.label.value, "integral_bounded": reg.z_rho.integral_bounded},
        "regime": reg.label.value, "branch": reg.branch, "formula": reg.formula,
        "notes": list(reg.notes),
    }
    return report


# ---------------------------------------------------------------------------
# error table

def compute_row(spec: ClassSpec, n: int, cfg: QuadratureConfig, method: str,
                regime: RegimeLabel) -> ErrorReport:
    """Exact error, witnesses and prediction at one n; failures land in the row."""
    branch = BRANCH[regime]
    pred = predicted_order(branch, spec.psi, spec.s, spec.p, n) if branch else math.nan
    try:
        exact = exact_class_error(spec, n, cfg, method)
    except NUMERIC_ERRORS as exc:
        return ErrorReport(n, math.nan, {}, pred, regime, math.nan, f"{type(exc).__name__}: {exc}")
    lower = {}
    failure = ""
    try:
        for key, wit in all_witnesses(spec, n, cfg, method).items():
            lower[key.lower()] = wit.deviation_at_zero if wit.valid else math.nan
    except NUMERIC_ERRORS as exc:
        failure = f"witness {type(exc).__name__}: {exc}"
    ratio = exact / pred if pred and math.isfinite(pred) else math.nan
    return ErrorReport(n, exact, lower, pred, regime, ratio, failure)


def _row_job(args):
    return compute_row(*args)


def cmd_error_table(ec: ExperimentConfig, regime: Optional[RegimeLabel] = None) -> list:
    """One ErrorReport per n, in n order (rows are computed in parallel when jobs > 1)."""
    if regime is None:
        regime = classify_regime(ec.spec.psi, ec.spec.s, ec.spec.p).label
    jobs = [(ec.spec, n, ec.cfg, ec.method, regime) for n in ec.n_values]
    if ec.jobs > 1:
        with ProcessPoolExecutor(max_workers=ec.jobs) as pool:
            return list(pool.map(_row_job, jobs))
    return [_row_job(j) for j in jobs]


def upper_half(values):
    values = list(values)
    return values[len(values) // 2:]


def table_summary(reports) -> dict:
    top = [r for r in upper_half(reports) if math.isfinite(r.ratio)]
    ratios = [r.ratio for r in top]
    out = {"failures": [{"n": r.n, "failure": r.failure} for r in reports if r.failure]}
    if ratios:
        out.update(min_ratio=min(ratios), max_ratio=max(ratios), band=max(ratios) / min(ratios),
                   band_ok=max(ratios) / min(ratios) <= BAND_FACTOR,
                   upper_half_n=[r.n for r in top])
    return out


def table_json(ec: ExperimentConfig, reports, regime_report: Optional[dict] = None) -> str:
    payload = {"config": ec.resolved(), "classification": regime_report,
               "summary": table_summary(reports), "rows": [r.to_dict() for r in reports]}
    return json.dumps(payload, indent=2, allow_nan=True)


def plot_data(reports) -> str:
    """Whitespace-separated (n, value) blocks, one per series, blank-line separated."""
    series = [("exact_error", lambda r: r.exact_error), ("predicted_order", lambda r: r.predicted_order)]
    series += [(f"lower_{k}", (lambda k: lambda r: r.lower_bounds.get(k, math.nan))(k))
               for k in ("f1", "f2", "f3", "f4")]
    blocks = []
    for name, get in series:
        lines = [f"# {name}"]
        lines += [f"{r.n} {get(r)!r}" for r in reports if math.isfinite(get(r))]
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


# ---------------------------------------------------------------------------
# slope fit

@dataclass
class SlopeRecord:
    branch: int
    slope: float
    target: float
    tolerance: float
    residual: float
    power_residual: float
    within: bool
    model: str
    n_values: list

    def to_dict(self):
        return asdict(self)


def _lsq(x, y):
    A = np.vstack([np.ones_like(x), x]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.sqrt(np.mean((A @ coef - y) ** 2)))
    return float(coef[1]), resid


def regime_fit(spec: ClassSpec, n_values, errors, branch: int) -> SlopeRecord:
    """Least-squares slope of log error against log n over the top half of n.

    Branch 1 targets -(r - 1/p), branch 3 targets -s.  Branch 2 divides out
    the logarithmic factor (int_1^n g^p'/t dt)^(1/p') first and targets -s;
    its residual is compared with the plain power-law fit.
    """
    if spec.psi.kind != "power":
        raise ParameterError("slope fits need a pure power weight")
    if branch not in SLOPE_TOL:
        raise ParameterError("classification is undetermined; no slope target")
    n = np.asarray(n_values, dtype=float)
    e = np.asarray(errors, dtype=float)
    if math.log2(n[-1] / n[0]) < MIN_OCTAVES:
        raise ParameterError(f"n values must span at least {MIN_OCTAVES} octaves")
    keep = slice(len(n) // 2, None)
    x, y = np.log(n[keep]), np.log(e[keep])
    power_slope, power_res = _lsq(x, y)
    if branch == 2:
        pp = spec.p_prime
        logf = np.array([math.log(integral_g_power(spec.g, pp, v)) / pp for v in n[keep]])
        slope, res = _lsq(x, y - logf)
        target, model = -spec.s, "n^-s (int_1^n g^p'/t dt)^(1/p')"
    else:
        slope, res = power_slope, power_res
        target = -(spec.psi.r - 1.0 / spec.p) if branch == 1 else -spec.s
        model = ORDER_FORMULA[branch]
    tol = SLOPE_TOL[branch]
    return SlopeRecord(branch, slope, target, tol, res, power_res, abs(slope - target) <= tol,
                       model, [int(v) for v in n[keep]])


def cmd_regime_fit(ec: ExperimentConfig, reports=None):
    """Run (or reuse) the error table and fit the slope for the classified branch."""
    reg = classify_regime(ec.spec.psi, ec.spec.s, ec.spec.p)
    if reports is None:
        reports = cmd_error_table(ec, reg.label)
    return regime_fit(ec.spec, [r.n for r in reports], [r.exact_error for r in reports], reg.branch), reports


# ---------------------------------------------------------------------------
# lemma sweeps

def cmd_lemmas(n_max: int = 1024, lemma2_n_max: int = 2 ** 16, x_points: int = 256):
    """Default tail-sum (lemma1) and partial-sum (lemma2) sweeps; returns (results, csv text, summary)."""
    from .lemmas import default_x_grid

    l1 = lemma1_sweep(n_values=dyadic(1, n_max))
    l2 = lemma2_sweep(N_max=lemma2_n_max, x_grid=default_x_grid(x_points))
    results = [l1] + l2
    summary = {
        "lemma1": l1.summary(),
        "lemma2": [res.summary() for res in l2],
        "violations": sum(len(res.violations) for res in results),
    }
    return results, sweeps_to_csv(results), summary


__all__ = ["ExperimentConfig", "cmd_classify", "cmd_error_table", "cmd_regime_fit", "cmd_lemmas",
           "compute_row", "regime_fit", "SlopeRecord", "plot_data", "table_json", "table_summary",
           "dyadic", "reports_to_csv"]
