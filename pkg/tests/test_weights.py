import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zygmund_lab.errors import DomainError, ParameterError
from zygmund_lab.series import weight_taylor
from zygmund_lab.weights import (ClassSpec, GFunction, MonotoneClass, RegimeLabel, WeightFunction,
                                 ZRhoClass, classify_monotone_class, classify_regime,
                                 classify_theta_p, classify_z_rho, classify_zygmund, eval_psi,
                                 integral_g_power, parse_weight, predicted_order)


def power(r):
    return WeightFunction.power(r)


# ---------------------------------------------------------------------------
# evaluation and parsing

def test_eval_psi_examples():
    assert eval_psi(power(1), 2.0) == 0.5
    assert eval_psi(power(0.75), 16.0) == pytest.approx(0.125, rel=1e-15)
    assert eval_psi(WeightFunction.powerlog(1, 1, 9), 1.0) == pytest.approx(math.log(10.0), rel=1e-15)


def test_eval_psi_rejects_below_one():
    with pytest.raises(DomainError):
        eval_psi(power(1), 0.5)


def test_powerlog_constraint_checked_against_p():
    # c must exceed e^(2 alpha / (r - 1/p)) - 1 = e^4 - 1 for r = 1, alpha = 1, p = 2
    with pytest.raises(ParameterError):
        ClassSpec(WeightFunction.powerlog(1, 1, 9), 0.0, 2.0, 1.0)
    ClassSpec(WeightFunction.powerlog(1, 1, 60), 0.0, 2.0, 1.0)


@pytest.mark.parametrize("p", [1.0, 0.5, math.inf])
def test_class_spec_rejects_bad_p(p):
    with pytest.raises(ParameterError):
        ClassSpec(power(3), 0.0, p, 1.0)


def test_class_spec_conjugate_exponent():
    sp = ClassSpec(power(3), 0.0, 3.0, 1.0)
    assert 1.0 / sp.p + 1.0 / sp.p_prime == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("line", ["kind=power r=0.75", "kind=powerlog r=1.0 alpha=1.0 c=9.0",
                                  "kind=powerinvlog r=1.0 alpha=2.0 c=1.0",
                                  "kind=powerloglog r=2.0 alpha=1.0 c=20.0"])
def test_parse_roundtrip(line):
    w = parse_weight(line)
    assert parse_weight(w.to_config()) == w


@pytest.mark.parametrize("line", ["kind=power", "kind=powerlog r=1", "r=1", "kind=bogus r=1",
                                  "kind=power r=1 extra=2"])
def test_parse_errors(line):
    with pytest.raises(ParameterError):
        parse_weight(line)


def test_g_function_at_one():
    for w in (power(0.75), WeightFunction.powerlog(1.5, 1, 60), WeightFunction.powerinvlog(1, 1, 1)):
        g = GFunction(w, 1.0, 2.0)
        assert g(1.0) == pytest.approx(eval_psi(w, 1.0), rel=1e-15)


@pytest.mark.parametrize("w", [WeightFunction.power(1.3), WeightFunction.powerlog(1.5, 1.0, 60.0),
                               WeightFunction.powerinvlog(1.0, 2.0, 1.0),
                               WeightFunction.powerloglog(2.0, 1.0, 20.0)])
def test_weight_taylor_matches_mpmath_derivatives(w):
    X = 8192.0
    a = weight_taylor(w.kind, w.r, w.alpha, w.c, w.scale, X, 6)
    for j in range(7):
        ref = float(mpmath.diff(lambda t: w.mp(t), X, j)) * X ** j / math.factorial(j)
        assert a[j] == pytest.approx(ref, rel=1e-9)


# ---------------------------------------------------------------------------
# classes

def test_theta_examples():
    res = classify_theta_p(power(1), 2.0)
    assert res.member and res.K == pytest.approx(1.0)
    assert not classify_theta_p(power(0.25), 2.0).member
    assert classify_theta_p(WeightFunction.powerinvlog(1, 1, 1), 2.0).member


@pytest.mark.parametrize("w", [power(0.75), WeightFunction.powerlog(1.0, 1.0, 60.0),
                               WeightFunction.powerinvlog(0.75, 1.0, 1.0),
                               WeightFunction.powerloglog(1.0, 1.0, 60.0)])
def test_catalog_in_theta_p(w):
    assert classify_theta_p(w, 2.0).member


def test_monotone_examples():
    assert classify_monotone_class(GFunction(power(0.75), 1.0, 2.0)).label is MonotoneClass.APLUS
    res = classify_monotone_class(GFunction(power(2.0), 1.0, 2.0))
    assert res.label is MonotoneClass.AMINUS and res.epsilon <= 0.5
    assert classify_monotone_class(GFunction(power(1.5), 1.0, 2.0)).label is MonotoneClass.NEITHER


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=-2.0, max_value=2.0).filter(lambda x: abs(x) > 1e-3))
def test_pure_power_monotone_class_is_sign_of_exponent(gamma):
    res = classify_monotone_class(lambda t: np.asarray(t, dtype=float) ** gamma)
    assert res.label is (MonotoneClass.APLUS if gamma > 0 else MonotoneClass.AMINUS)


def test_zygmund_examples():
    assert classify_zygmund(lambda t: np.ones_like(np.asarray(t, dtype=float))).member
    assert classify_zygmund(lambda t: np.log1p(np.asarray(t, dtype=float))).member
    assert not classify_zygmund(lambda t: np.asarray(t, dtype=float) ** 0.3).member


def test_integral_examples():
    one = lambda t: np.ones_like(np.asarray(t, dtype=float))  # noqa: E731
    assert integral_g_power(one, 2.0, math.e) == pytest.approx(1.0, rel=1e-10)
    assert integral_g_power(lambda t: np.asarray(t, dtype=float) ** 0.5, 2.0, 4.0) == pytest.approx(3.0, rel=1e-10)
    assert integral_g_power(one, 2.0, 1) == 0.0


def test_integral_monotone_and_additive():
    g = GFunction(WeightFunction.powerlog(1.5, 1.0, 60.0), 1.0, 2.0)
    vals = [integral_g_power(g, 2.0, n) for n in (2, 8, 64, 1024)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    # int_1^64 = int_1^8 + int_8^64, the second piece via the substitution t = 8 u
    shifted = integral_g_power(lambda u: g(8.0 * np.asarray(u, dtype=float)), 2.0, 8)
    assert vals[1] + shifted == pytest.approx(vals[2], rel=1e-9)


def test_z_rho_examples():
    one = lambda t: np.ones_like(np.asarray(t, dtype=float))  # noqa: E731
    assert classify_z_rho(one, 2.0).label is ZRhoClass.ZMINUS
    assert classify_z_rho(lambda t: np.log1p(np.asarray(t, dtype=float)), 2.0).label is ZRhoClass.ZPLUS
    res = classify_z_rho(lambda t: 1.0 / np.log1p(np.asarray(t, dtype=float)), 2.0)
    assert res.label is ZRhoClass.ZMINUS and res.integral_bounded


@pytest.mark.parametrize("r,label,branch", [
    (0.75, RegimeLabel.APLUS, 1),
    (1.5, RegimeLabel.ZYGMUND_UNBOUNDED, 2),
    (3.0, RegimeLabel.AMINUS, 3),
])
def test_regime_for_powers(r, label, branch):
    reg = classify_regime(power(r), 1.0, 2.0)
    assert reg.label is label and reg.branch == branch


def test_predicted_orders_for_powers():
    assert predicted_order(1, power(0.75), 1.0, 2.0, 256) == pytest.approx(256 ** -0.25)
    assert predicted_order(3, power(3.0), 1.0, 2.0, 256) == pytest.approx(1 / 256)
    assert predicted_order(2, power(1.5), 1.0, 2.0, 256) == pytest.approx(math.sqrt(math.log(256)) / 256,
                                                                          rel=1e-9)


@pytest.mark.parametrize("w", [power(0.75), power(1.5), WeightFunction.powerlog(1.5, 1.0, 60.0)])
def test_classification_scale_invariant(w):
    a = classify_regime(w, 1.0, 2.0)
    b = classify_regime(w.scaled(10.0), 1.0, 2.0)
    assert a.label is b.label
    assert a.monotone.label is b.monotone.label
    assert a.theta.member == b.theta.member
