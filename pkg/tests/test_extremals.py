import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zygmund_lab.errors import DomainError, ParameterError
from zygmund_lab.extremals import (NORM_SLACK, Witness, all_witnesses, cos_norm, deviation_at_zero,
                                   dirichlet_norm, f1_closed_form, f2_closed_form, f3_closed_form,
                                   trig_poly_norm, witness_f1, witness_f2, witness_f3, witness_f4)
from zygmund_lab.norms import exact_class_error, lp_norm_periodic
from zygmund_lab.trigcore import TrigPolynomial
from zygmund_lab.weights import ClassSpec, WeightFunction


def spec(r, beta=0.0, p=2.0, s=1.0):
    return ClassSpec(WeightFunction.power(r), beta, p, s)


# ---------------------------------------------------------------------------
# closed-form examples

def test_f1_two_term_example():
    res = witness_f1(spec(1.0), 2)
    assert res.normalizer == pytest.approx(math.sqrt(2 / math.pi), rel=1e-10)
    assert res.deviation_at_zero == pytest.approx(res.normalizer / 2 ** 1.5, rel=1e-12)


@pytest.mark.parametrize("fn", [witness_f1, witness_f2])
def test_n1_is_empty(fn):
    res = fn(spec(1.0), 1)
    assert res.deviation_at_zero == 0.0 and res.valid and res.normalizer > 0


def test_f2_two_term_example():
    res = witness_f2(spec(1.0, s=1.5), 2)
    assert res.deviation_at_zero == pytest.approx(res.normalizer / 2 ** 1.5, rel=1e-12)


def test_f3_rejects_n1():
    with pytest.raises(DomainError):
        witness_f3(spec(1.0), 1)
    assert "F3" not in all_witnesses(spec(1.0), 1)


def test_f4_example_and_saturation():
    assert witness_f4(spec(1.0), 2).deviation_at_zero == pytest.approx(1 / (2 * math.sqrt(2 * math.pi)),
                                                                       rel=1e-15)
    assert witness_f4(spec(1.0, p=3.0), 1).deviation_at_zero == pytest.approx((2 * math.pi) ** (-1 / 3))
    sp = spec(0.75, 1.0, p=4.0, s=1.5)
    vals = [witness_f4(sp, n).deviation_at_zero * n ** sp.s for n in (1, 2, 16, 1024)]
    assert max(vals) - min(vals) <= 1e-12 * vals[0]


@pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
def test_cos_norm_closed_form(p):
    assert cos_norm(p) == pytest.approx(lp_norm_periodic(np.cos, p), rel=1e-10)
    assert witness_f4(spec(1.0, p=p), 3).valid


@pytest.mark.parametrize("r,beta,p,s,n", [(0.75, 0.0, 2.0, 1.0, 16), (1.5, 1.0, 4.0, 1.0, 8),
                                          (3.0, 0.5, 1.5, 2.0, 12), (0.8, 0.3, 3.0, 1.5, 9)])
def test_closed_forms_match_coefficients(r, beta, p, s, n):
    sp = spec(r, beta, p, s)
    for fn, closed in ((witness_f1, f1_closed_form), (witness_f2, f2_closed_form),
                       (witness_f3, f3_closed_form)):
        res = fn(sp, n)
        assert res.deviation_at_zero == pytest.approx(closed(sp, n, res.normalizer), rel=1e-11)


@pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
def test_normalized_phi_has_unit_norm(p):
    sp = spec(1.0, 0.7, p)
    for res in all_witnesses(sp, 33).values():
        if res.which is not Witness.F4:
            assert res.phi_norm == pytest.approx(1.0, abs=NORM_SLACK)
        assert res.valid and res.normalizer > 0


def test_fejer_witness_identical_and_needs_s1():
    sp = spec(0.75, 1.0)
    assert witness_f1(sp, 16, method="fejer") == witness_f1(sp, 16)
    with pytest.raises(ParameterError):
        witness_f1(spec(0.75, s=2.0), 16, method="fejer")


# ---------------------------------------------------------------------------
# sandwich

@pytest.mark.parametrize("r,p,n", [(0.75, 2.0, 64), (1.5, 2.0, 64), (3.0, 2.0, 64), (0.75, 4.0, 64),
                                   (1.5, 1.5, 32)])
def test_witnesses_below_exact(r, p, n):
    sp = spec(r, 1.0, p)
    exact = exact_class_error(sp, n)
    for res in all_witnesses(sp, n).values():
        assert res.valid and res.deviation_at_zero <= exact + 1e-6


def test_f2_attains_head_parseval_at_p2():
    # at p = 2 phi_2 is the dual of the head k < n of the deviation kernel
    sp = spec(1.5, 0.4)
    k = np.arange(1, 32, dtype=float)
    head = math.sqrt(math.fsum((k ** -1.5 * (k / 32)) ** 2) / math.pi)
    assert witness_f2(sp, 32).deviation_at_zero == pytest.approx(head, rel=1e-10)


def test_f1_regime1_order():
    sp = spec(0.75)
    vals = [witness_f1(sp, n).deviation_at_zero / (n ** -0.75 * n ** 0.5) for n in (64, 128, 256)]
    assert min(vals) > 0.1 and max(vals) / min(vals) < 1.5


@settings(max_examples=10, deadline=None)
@given(st.floats(0.0, 4.0), st.sampled_from([2, 5, 16]))
def test_random_beta_sandwich(beta, n):
    sp = spec(1.5, beta, 3.0)
    exact = exact_class_error(sp, n)
    for res in all_witnesses(sp, n).values():
        assert res.valid and res.deviation_at_zero <= exact + 1e-6


# ---------------------------------------------------------------------------
# norm helpers

def test_trig_poly_norm_and_zero():
    assert trig_poly_norm(TrigPolynomial(0.0, [0.0], [0.0]), 2.0) == 0.0
    P = TrigPolynomial(0.0, [0.0, 0.0, 1.0], [0.0, 0.0, 0.0])
    assert trig_poly_norm(P, 2.0) == pytest.approx(math.sqrt(math.pi), rel=1e-12)


def test_dirichlet_norm_p2_parseval():
    for beta in (0.0, 1.0, 0.3):
        expect = math.sqrt(math.pi * (40 + math.cos(beta * math.pi / 2) ** 2 / 2))
        assert dirichlet_norm(40, beta, 2.0) == pytest.approx(expect, rel=1e-10)
    with pytest.raises(DomainError):
        dirichlet_norm(0, 0.0, 2.0)


def test_deviation_linear_in_phi():
    sp = spec(1.2, 0.6, 2.5)
    phi = TrigPolynomial(0.0, [0.2, -0.4, 0.1], [0.3, 0.0, 0.5])
    assert deviation_at_zero(sp, 3.0 * phi, 3) == pytest.approx(3.0 * deviation_at_zero(sp, phi, 3), rel=1e-13)
