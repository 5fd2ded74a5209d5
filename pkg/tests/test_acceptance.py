"""Acceptance criteria 1-10.  Each test prints one PASS/FAIL line, which is
also repeated in the terminal summary."""
import io
import math
import time
from functools import lru_cache

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from zygmund_lab.cli import main
from zygmund_lab.extremals import all_witnesses, dirichlet_norm
from zygmund_lab.lemmas import lemma1_sweep, lemma2_sweep
from zygmund_lab.norms import exact_class_error, parseval_error
from zygmund_lab.weights import ClassSpec, WeightFunction, eval_psi

BETAS = (0.0, 1.0)
FIT_N = [2 ** j for j in range(6, 11)]  # 64 .. 1024


def verdict(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {title} ({detail})"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def spec(r, beta, p=2.0):
    return ClassSpec(WeightFunction.power(r), beta, p, 1.0)


@lru_cache(maxsize=None)
def exact(r, beta, n, p=2.0):
    return exact_class_error(spec(r, beta, p), n)


def slope(n, values):
    return float(np.polyfit(np.log(n), np.log(values), 1)[0])


def fit_residual(x, y):
    A = np.vstack([np.ones_like(x), x]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(np.sqrt(np.mean((A @ coef - y) ** 2)))


def band(values):
    return max(values) / min(values)


def test_criterion_01_parseval_oracle():
    start = time.perf_counter()
    worst = 0.0
    for r in (0.75, 1.5, 3.0):
        for beta in BETAS:
            sp = spec(r, beta)
            for n in [2 ** j for j in range(1, 9)]:
                worst = max(worst, abs(exact(r, beta, n) / parseval_error(sp, n) - 1.0))
    elapsed = time.perf_counter() - start
    verdict(1, "quadrature matches Parseval", worst <= 1e-6 and elapsed < 60.0,
            f"max rel diff {worst:.2e}, {elapsed:.1f} s")


def test_criterion_02_regime1():
    details, ok = [], True
    for beta in BETAS:
        e = [exact(0.75, beta, n) for n in FIT_N]
        sl = slope(FIT_N, e)
        ratios = [v / (eval_psi(WeightFunction.power(0.75), float(n)) * n ** 0.5) for v, n in zip(e, FIT_N)]
        ok &= abs(sl + 0.25) <= 0.1 and band(ratios) <= 4.0
        details.append(f"beta={beta:g}: slope {sl:.4f}, band {band(ratios):.3f}")
    verdict(2, "regime 1 slope -1/4 and ratio band", ok, "; ".join(details))


def test_criterion_03_regime3():
    details, ok = [], True
    for beta in BETAS:
        e = [exact(3.0, beta, n) for n in FIT_N]
        sl = slope(FIT_N, e)
        scaled = [v * n for v, n in zip(e, FIT_N)]
        sat = [all_witnesses(spec(3.0, beta), n)["F4"].deviation_at_zero * n for n in FIT_N]
        spread = band(sat) - 1.0
        ok &= abs(sl + 1.0) <= 0.05 and band(scaled) <= 2.0 and spread <= 1e-12
        details.append(f"beta={beta:g}: slope {sl:.5f}, band {band(scaled):.4f}, f4 spread {spread:.1e}")
    verdict(3, "regime 3 slope -1, band and f4 saturation", ok, "; ".join(details))


def test_criterion_04_borderline():
    details, ok = [], True
    x = np.log(FIT_N)
    logfactor = 0.5 * np.log(np.log(FIT_N))
    for beta in BETAS:
        e = np.array([exact(1.5, beta, n) for n in FIT_N])
        ratios = list(e / (np.sqrt(np.log(FIT_N)) / np.array(FIT_N, dtype=float)))
        res_log = fit_residual(x, np.log(e) - logfactor)
        res_pow = fit_residual(x, np.log(e))
        ok &= band(ratios) <= 4.0 and res_log < res_pow
        details.append(f"beta={beta:g}: band {band(ratios):.4f}, residual {res_log:.2e} vs power {res_pow:.2e}")
    verdict(4, "borderline ln^(1/2) n / n order", ok, "; ".join(details))


def test_criterion_05_witness_sandwich():
    configs = [(r, beta, n) for r in (0.75, 1.5, 3.0) for beta in BETAS
               for n in sorted(set([2 ** j for j in range(1, 9)] + FIT_N))]
    worst_excess, f1_min, valid = -math.inf, math.inf, True
    for r, beta, n in configs:
        ex = exact(r, beta, n)
        wits = all_witnesses(spec(r, beta), n)
        valid &= all(w.valid for w in wits.values())
        worst_excess = max(worst_excess, max(w.deviation_at_zero for w in wits.values()) - ex)
        if r == 0.75 and n >= 64:
            f1_min = min(f1_min, wits["F1"].deviation_at_zero / ex)
    ok = valid and worst_excess <= 1e-6 and f1_min >= 0.10
    verdict(5, "witness sandwich", ok,
            f"{len(configs)} configs, max(witness - exact) {worst_excess:.2e}, min f1/exact in regime 1 {f1_min:.3f}")


def test_criterion_06_lemma1():
    res = lemma1_sweep()
    ok = not res.violations and res.drift < 0.10
    verdict(6, "tail-sum lower bound and tail stability", ok,
            f"{len(res.rows)} points, {len(res.violations)} violations, ratio [{res.min_ratio:.4f}, "
            f"{res.max_ratio:.3f}], drift {res.drift:.1e}, {len(res.skipped)} pairs outside hypotheses")


def test_criterion_07_lemma2():
    results = lemma2_sweep()
    drift = max(r.drift for r in results)
    finite = all(math.isfinite(r.max_ratio) for r in results)
    ok = finite and drift < 0.10 and not any(r.violations for r in results)
    verdict(7, "partial-sum sup ratios stable from 2^15 to 2^16", ok,
            f"{len(results)} combinations, max drift {drift:.2e}, "
            f"max ratio {max(r.max_ratio for r in results):.3f}")


def test_criterion_08_fejer_csv(tmp_path):
    same = []
    for r in ("0.75", "1.5", "3"):
        paths = []
        for extra in ([], ["--fejer"]):
            path = tmp_path / f"{r}{len(extra)}.csv"
            code = main(["error-table", "--psi", f"kind=power r={r}", "--beta", "1", "--n-max", "1024",
                         "--jobs", "4", "--out-csv", str(path)] + extra, io.StringIO())
            assert code == 0
            paths.append(path)
        same.append(paths[0].read_bytes() == paths[1].read_bytes())
    verdict(8, "Fejer and s=1 Zygmund CSV byte-identical", all(same), f"{sum(same)}/3 weights identical")


def test_criterion_09_dirichlet_order():
    details, ok = [], True
    ks = [2 ** j for j in range(2, 11)]
    for p in (1.5, 2.0, 4.0):
        q = p / (p - 1.0)
        for beta in BETAS:
            ratios = [dirichlet_norm(k, beta, q) / k ** (1.0 / p) for k in ks]
            ok &= band(ratios) <= 3.0
            details.append(f"p={p:g} beta={beta:g}: {band(ratios):.3f}")
    verdict(9, "Dirichlet norm order k^(1/p)", ok, "bands " + ", ".join(details))


def test_criterion_10_p4():
    details, ok = [], True
    ns = [64, 128, 256, 512]
    for beta in BETAS:
        ratios = [exact(0.75, beta, n, 4.0) / (n ** -0.75 * n ** 0.25) for n in ns]
        ok &= band(ratios) <= 4.0
        details.append(f"beta={beta:g}: ratios {ratios[0]:.4f}..{ratios[-1]:.4f}, band {band(ratios):.4f}")
    verdict(10, "p=4 regime 1 ratio band", ok, "; ".join(details))


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
