import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from zygmund_lab.errors import DomainError, ParameterError, QuadratureError
from zygmund_lab.norms import (CSV_HEADER, ErrorReport, QuadratureConfig, adaptive_integrate,
                               class_error_details, exact_class_error, lp_norm_details,
                               lp_norm_periodic, parseval_details, parseval_error, reports_to_csv,
                               reports_to_json)
from zygmund_lab.trigcore import DeviationKernel, TrigPolynomial
from zygmund_lab.weights import ClassSpec, RegimeLabel, WeightFunction

EXP2 = WeightFunction.custom(lambda t: np.exp2(-np.asarray(t, dtype=float)), name="exp2")
ZERO = WeightFunction.custom(lambda t: np.zeros_like(np.asarray(t, dtype=float)), name="zero")


def spec(w, beta=0.0, p=2.0, s=1.0):
    return ClassSpec(w, beta, p, s)


# ---------------------------------------------------------------------------
# L_q norms

def test_lp_examples():
    assert lp_norm_periodic(np.cos, 2.0) == pytest.approx(math.sqrt(math.pi), rel=1e-10)
    assert lp_norm_periodic(lambda t: np.ones_like(t), 4.0) == pytest.approx((2 * math.pi) ** 0.25, rel=1e-10)
    assert lp_norm_periodic(np.cos, 4.0) == pytest.approx((0.75 * math.pi) ** 0.25, rel=1e-10)


def test_lp_without_zero_refinement():
    cfg = QuadratureConfig(refine_near_zero=False)
    assert lp_norm_periodic(np.cos, 3.0, cfg) == pytest.approx(lp_norm_periodic(np.cos, 3.0), rel=1e-10)


def test_lp_singular_integrable():
    # |t|^-1/4 in L_2: int = 2 * 2 pi^(1/2)
    val = lp_norm_periodic(lambda t: np.abs(t) ** -0.25, 2.0)
    assert val == pytest.approx(math.sqrt(4.0 * math.sqrt(math.pi)), rel=1e-8)


@pytest.mark.parametrize("c", [2.0, 10.0])
def test_lp_homogeneous(c):
    f = lambda t: np.sin(3 * t) + 0.3 * np.cos(t)  # noqa: E731
    assert lp_norm_periodic(lambda t: c * f(t), 1.7) == pytest.approx(c * lp_norm_periodic(f, 1.7), rel=1e-9)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=1, max_size=5).filter(lambda v: max(map(abs, v)) > 0.1))
def test_normalized_lq_monotone_in_q(a):
    P = TrigPolynomial.from_coefficients(0.0, a)
    qs = [1.25, 1.5, 2.0, 3.0, 5.0]
    vals = [lp_norm_periodic(P, q, QuadratureConfig(refine_near_zero=False)) / (2 * math.pi) ** (1 / q) for q in qs]
    assert all(b >= a * (1 - 1e-9) for a, b in zip(vals, vals[1:]))


def test_lp_rejects_q():
    with pytest.raises(DomainError):
        lp_norm_periodic(np.cos, 1.0)


def test_tolerance_failure_carries_estimate():
    cfg = QuadratureConfig(max_depth=1, refine_near_zero=False, panels=2)
    with pytest.raises(QuadratureError) as err:
        lp_norm_details(lambda t: np.where(np.abs(t) < 0.123, 1.0, 0.0), 2.0, cfg)
    assert math.isfinite(err.value.estimate) and err.value.error_bound > 0


def test_adaptive_integrate_polynomial_exact():
    res = adaptive_integrate(lambda x: x ** 5 - x, np.array([0.0, 1.0, 2.0]))
    assert res.value == pytest.approx(64 / 6 - 2, rel=1e-14)


@pytest.mark.parametrize("kw", [dict(panels=1), dict(t_min=0.0), dict(rel_tol=1e-2), dict(max_depth=0)])
def test_config_validation(kw):
    with pytest.raises(ParameterError):
        QuadratureConfig(**kw)


# ---------------------------------------------------------------------------
# exact class error

def test_exact_error_closed_form_example():
    expect = math.sqrt((0.25 + math.pi ** 2 / 6 - 1) / math.pi)
    for beta in (0.0, 0.5, 1.37):
        assert exact_class_error(spec(WeightFunction.power(1.0), beta), 2) == pytest.approx(expect, rel=1e-9)


def test_exact_error_zero_kernel():
    assert exact_class_error(spec(ZERO), 3) == 0.0


@pytest.mark.parametrize("w,n", [
    (WeightFunction.powerlog(1.0, 1.0, 60.0), 8),
    (WeightFunction.powerinvlog(1.0, 1.0, 1.0), 8),
    (WeightFunction.powerloglog(1.5, 1.0, 20.0), 16),
    (EXP2, 3),
    (WeightFunction.power(2.2), 100),
])
def test_exact_matches_parseval(w, n):
    sp = spec(w, 0.37)
    assert exact_class_error(sp, n) == pytest.approx(parseval_error(sp, n), rel=1e-6)


def test_fejer_error_identical():
    sp = spec(WeightFunction.power(0.75), 1.0)
    assert exact_class_error(sp, 16, method="fejer") == exact_class_error(sp, 16)


@pytest.mark.parametrize("r,p,n", [(0.75, 2.0, 32), (1.5, 4.0, 16), (3.0, 1.5, 16), (0.75, 4.0, 64)])
def test_holder_sandwich(r, p, n):
    d = class_error_details(spec(WeightFunction.power(r), 0.5, p), n, holder=True)
    assert d.value <= d.plain_norm * (1 + 1e-10)
    assert d.plain_norm <= d.holder_bound * (1 + 1e-9)
    assert d.error <= 1e-9 * d.value


def test_p2_minimizer_is_zero():
    d = class_error_details(spec(WeightFunction.power(0.75), 0.3), 16)
    assert d.c_opt == 0.0 and d.value == d.plain_norm


def test_n1_plain_norm_is_generating_kernel_norm():
    sp = spec(WeightFunction.power(1.5), 0.5, p=3.0)
    d = class_error_details(sp, 1)
    K = DeviationKernel(sp, 1)
    ref = lp_norm_periodic(K, sp.p_prime, QuadratureConfig(t_min=1e-30)) / math.pi
    assert d.plain_norm == pytest.approx(ref, rel=1e-8)
    assert d.value <= d.plain_norm


def test_error_decreases_with_n():
    sp = spec(WeightFunction.power(0.75), 0.0, p=4.0)
    vals = [exact_class_error(sp, n) for n in (1, 2, 4, 8, 16, 32)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


# ---------------------------------------------------------------------------
# Parseval oracle

def test_parseval_examples():
    assert parseval_error(spec(WeightFunction.power(1.0)), 1) == pytest.approx(
        math.sqrt(math.pi / 6), rel=1e-14)
    assert parseval_error(spec(EXP2), 1) == pytest.approx(math.sqrt(1 / (3 * math.pi)), rel=1e-12)


def test_parseval_bracket_contains_closed_form():
    sp = spec(WeightFunction.power(1.5), 1.0)
    exact = parseval_error(sp, 10)
    res = parseval_details(sp, 10, tail_terms=1000)
    assert res.lower <= exact <= res.upper
    assert res.upper - res.lower < 1e-6 * exact


def test_parseval_order_regime1():
    sp = spec(WeightFunction.power(1.0))
    vals = [parseval_error(sp, n) * math.sqrt(n) for n in (256, 1024, 4096)]
    assert max(vals) / min(vals) < 1.05


def test_parseval_rejects_p():
    with pytest.raises(ParameterError):
        parseval_error(spec(WeightFunction.power(1.0), p=3.0), 2)


def test_hurwitz_matches_direct():
    sp = spec(WeightFunction.power(0.75))
    k = np.arange(5, 10 ** 6, dtype=float)
    head = sum((j ** -0.75 * j / 5) ** 2 for j in range(1, 5))
    tail = special.zeta(1.5, 5)
    assert parseval_error(sp, 5) == pytest.approx(math.sqrt((head + tail) / math.pi), rel=1e-14)
    assert math.fsum(k ** -1.5) < tail


# ---------------------------------------------------------------------------
# reports

def report(n, exact, f1):
    return ErrorReport(n, exact, {"f1": f1, "f4": 0.1}, 0.5, RegimeLabel.APLUS, exact / 0.5)


def test_report_check():
    report(4, 0.3, 0.2).check()
    with pytest.raises(ValueError):
        report(4, 0.3, 0.31).check()


def test_csv_layout_and_determinism():
    rows = [report(2, 0.3, 0.2), report(4, 0.25, 0.1)]
    text = reports_to_csv(rows)
    lines = text.splitlines()
    assert lines[0].split(",") == CSV_HEADER
    assert len(lines) == 3 and lines[1].startswith("2,0.3,0.2,nan,nan,0.1,0.5,APlus,0.6,")
    assert reports_to_csv(rows) == text


def test_json_rows():
    payload = json.loads(reports_to_json([report(2, 0.3, 0.2)], config={"p": 2}))
    assert payload["config"] == {"p": 2}
    assert payload["rows"][0]["regime"] == "APlus"
