from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jkon.quadrature import gauss_laguerre_rule
from jkon.special import (
    ParamSet,
    bessel_poly,
    gamma_fn,
    hyp2f0_terminating,
    hyp2f1_terminating,
    jacobi_poly,
    konhauser_y,
    konhauser_z,
    laguerre_poly,
    pochhammer,
    rgamma,
)

mpmath.mp.dps = 40


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


# --- gamma / pochhammer -------------------------------------------------------


def test_gamma_examples():
    assert gamma_fn(1) == 1
    assert gamma_fn(5) == pytest.approx(24, rel=1e-15)
    assert gamma_fn(0.5) == pytest.approx(float(mpmath.gamma(0.5)), rel=1e-15)
    assert gamma_fn(0.5) == pytest.approx(1.77245385090552, rel=1e-14)


@pytest.mark.parametrize("z", [0, -1, -7, -1e-13])
def test_gamma_poles_raise(z):
    with pytest.raises(ValueError):
        gamma_fn(z)
    assert rgamma(z) == 0.0


def test_gamma_recurrence_grid():
    for z in np.arange(-9.5, 21.0, 1.0):
        g1, g0 = gamma_fn(z + 1), gamma_fn(z)
        assert abs(g1 - z * g0) / abs(g1) <= 1e-12


@given(st.floats(-20.5, 30.0).filter(lambda z: abs(z - round(z)) > 1e-3))
def test_gamma_matches_mpmath(z):
    assert rel(gamma_fn(z), float(mpmath.gamma(z))) < 1e-13


def test_pochhammer_examples():
    assert pochhammer(3, 2) == 12
    assert pochhammer(-2, 3) == 0
    assert pochhammer(0.5, 3) == pytest.approx(1.875, rel=1e-15)
    with pytest.raises(ValueError):
        pochhammer(1.0, -1)


@given(st.integers(-10, 10), st.integers(0, 8), st.integers(0, 8))
def test_pochhammer_split_exact_integers(a, m, n):
    assert pochhammer(a, m + n) == pochhammer(a, m) * pochhammer(a + m, n)


@given(st.floats(-12.0, 12.0), st.integers(0, 12), st.integers(0, 12))
def test_pochhammer_split_real(a, m, n):
    lhs, rhs = pochhammer(a, m + n), pochhammer(a, m) * pochhammer(a + m, n)
    assert abs(lhs - rhs) <= 1e-13 * max(abs(lhs), abs(rhs), 1e-300) or lhs == rhs


# --- terminating hypergeometric sums -----------------------------------------


def test_hyp2f1_examples():
    assert hyp2f1_terminating(0, 7, 3, 0.9) == 1
    assert hyp2f1_terminating(1, 2, 4, 0.5) == pytest.approx(0.75)
    assert hyp2f1_terminating(2, 1, 1, 1) == pytest.approx(0.0, abs=1e-15)


@given(st.integers(0, 10), st.floats(-3, 3), st.floats(0.3, 5), st.floats(-1, 1))
def test_hyp2f1_matches_mpmath(n, b, c, z):
    ref = float(mpmath.hyp2f1(-n, b, c, z))
    assert abs(hyp2f1_terminating(n, b, c, z) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_hyp2f0_examples():
    assert hyp2f0_terminating(0, 5, 2) == 1
    assert hyp2f0_terminating(1, 3, 0.1) == pytest.approx(0.7)
    assert hyp2f0_terminating(2, 2, 0.25) == pytest.approx(0.375)


# --- classical polynomials ---------------------------------------------------


def test_jacobi_examples():
    assert jacobi_poly(0, 0.3, 1.7, 0.2) == 1
    assert jacobi_poly(3, 0.5, -0.25, 1.0) == pytest.approx(pochhammer(1.5, 3) / 6)
    assert jacobi_poly(1, 0, 0, 0.3) == pytest.approx(0.3)


def _mp_jacobi(n, a, b, x):
    a, b, u = mpmath.mpf(a), mpmath.mpf(b), (1 - mpmath.mpf(x)) / 2
    body = sum(mpmath.rf(-n, s) * mpmath.rf(1 + a + b + n, s) / (mpmath.factorial(s) * mpmath.gamma(1 + a + s)) * u**s
               for s in range(n + 1))
    return mpmath.gamma(1 + a + n) / mpmath.factorial(n) * body


def _jacobi_term_scale(n, a, b, x, form):
    """Sum of |summands| of the chosen form: rounding in that form is
    bounded by a few ulps of this."""
    if form in ("F1", "F3"):
        c, z, lead = (1 + a, (1 - x) / 2, pochhammer(1 + a, n)) if form == "F1" else (1 + b, (1 + x) / 2, pochhammer(1 + b, n))
        t = [abs(pochhammer(-n, s) * pochhammer(1 + a + b + n, s) / (pochhammer(c, s) * math.factorial(s))) * z**s
             for s in range(n + 1)]
    else:
        bb, c, u, v, lead = (
            (-b - n, 1 + a, (x + 1) / 2, (x - 1) / 2, pochhammer(1 + a, n)) if form == "F2"
            else (-a - n, 1 + b, (x - 1) / 2, (x + 1) / 2, pochhammer(1 + b, n))
        )
        t = [abs(pochhammer(-n, s) * pochhammer(bb, s) / (pochhammer(c, s) * math.factorial(s)) * u ** (n - s) * v**s)
             for s in range(n + 1)]
    return abs(lead) / math.factorial(n) * math.fsum(t)


def test_jacobi_forms_agree():
    xs = np.linspace(-0.95, 0.95, 9)
    params = [-0.5, 0.0, 0.5, 2.0]
    for n in range(11):
        for a in params:
            for b in params:
                for x in xs:
                    ref = float(_mp_jacobi(n, a, b, x))
                    for f in ("F1", "F2", "F3", "F4"):
                        scale = max(abs(ref), _jacobi_term_scale(n, a, b, x, f))
                        assert abs(jacobi_poly(n, a, b, x, f) - ref) / scale <= 1e-10, (n, a, b, x, f)


def test_jacobi_well_conditioned_form_is_accurate():
    # F1 near x = 1 and F3 near x = -1 have no cancellation
    for n in range(11):
        for x in (0.9, -0.9):
            f = "F1" if x > 0 else "F3"
            ref = float(_mp_jacobi(n, 0.5, 2.0, x))
            assert rel(jacobi_poly(n, 0.5, 2.0, x, f), ref) <= 1e-13


def test_laguerre_examples():
    assert laguerre_poly(0, 2, 5) == 1
    assert laguerre_poly(1, 0.5, 1) == pytest.approx(0.5)


def test_laguerre_orthogonality():
    a = 0.7
    rule = gauss_laguerre_rule(12, a)
    for n in range(6):
        for m in range(6):
            ip = rule.integrate([laguerre_poly(n, a, t) * laguerre_poly(m, a, t) for t in rule.nodes])
            want = gamma_fn(n + a + 1) / math.factorial(n) if n == m else 0.0
            assert abs(ip - want) <= 1e-12 * gamma_fn(n + a + 1)


def test_konhauser_examples():
    b, k, x = 0.6, 3, 0.8
    assert konhauser_z(0, b, k, x) == 1
    assert konhauser_y(0, b, k, x) == 1
    want = gamma_fn(1 + b + k) / gamma_fn(1 + b) - x**k
    assert konhauser_z(1, b, k, x) == pytest.approx(want, rel=1e-14)


@settings(max_examples=40)
@given(st.integers(0, 8), st.floats(-0.9, 3.0), st.floats(0.0, 6.0))
def test_konhauser_kappa1_is_laguerre(n, b, t):
    ref = float(mpmath.laguerre(n, b, t))
    scale = max(abs(ref), 1e-6)
    assert abs(konhauser_z(n, b, 1, t) - ref) / scale <= 1e-10
    assert abs(konhauser_y(n, b, 1, t) - ref) / scale <= 1e-10


def _mp_konhauser_y(n, b, k, y):
    # Carlitz form: sum_i y^i/i! sum_j (-1)^j C(i,j) ((j+b+1)/k)_n
    total, b = mpmath.mpf(0), mpmath.mpf(b)
    for i in range(n + 1):
        inner = sum((-1) ** j * mpmath.binomial(i, j) * mpmath.rf((j + b + 1) / mpmath.mpf(k), n) for j in range(i + 1))
        total += mpmath.mpf(y) ** i / mpmath.factorial(i) * inner
    return total / mpmath.factorial(n)


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("n", [0, 1, 3, 5, 7])
def test_konhauser_y_matches_mpmath(n, k):
    for y in (0.1, 1.3, 4.0):
        ref = float(_mp_konhauser_y(n, 0.4, k, y))
        assert abs(konhauser_y(n, 0.4, k, y) - ref) <= 1e-12 * max(1.0, abs(ref))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_konhauser_pair_biorthogonal(k):
    b = 0.35
    rule = gauss_laguerre_rule(16, b)
    for n in range(6):
        for m in range(6):
            ip = rule.integrate([konhauser_z(n, b, k, t) * konhauser_y(m, b, k, t) for t in rule.nodes])
            diag = gamma_fn(k * n + b + 1) / math.factorial(n)
            if n == m:
                assert rel(ip, diag) <= 1e-10
            else:
                assert abs(ip) <= 1e-9 * diag


def test_bessel_examples():
    assert bessel_poly(0, 2.0, 1.0, 0.7) == 1
    assert bessel_poly(1, 2.0, 1.0, 1.0) == pytest.approx(3.0)
    assert bessel_poly(2, 2.0, 2.0, 0.0) == 1


def test_paramset_validation():
    with pytest.raises(ValueError):
        ParamSet(0.1, 0.1, kappa=0)
    with pytest.raises(ValueError):
        ParamSet(0.1, 0.1, kappa=1.5)
    with pytest.raises(ValueError):
        ParamSet(-1.0, 0.1)
    assert ParamSet(0.1, 0.1, kappa=2.0).kappa == 2
