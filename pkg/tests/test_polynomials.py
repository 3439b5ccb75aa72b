from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jkon.polynomials import (
    InsufficientDegreeError,
    JKPolyForm,
    biorthogonality_matrix,
    biorthogonality_norm,
    generating_function_check,
    jk_poly,
    jk_poly_term_scale,
    q_poly,
)
from jkon.quadrature import gauss_jacobi_rule, gauss_laguerre_rule
from jkon.special import ParamSet, gamma_fn, jacobi_poly, konhauser_y

CORE_FORMS = [JKPolyForm.EXPLICIT_JAC, JKPolyForm.Z_FORM, JKPolyForm.KDF_FORM, JKPolyForm.ML_FORM]


def _exact_poly(n, a, b, k, x, y):
    """Reference double sum in rational arithmetic (integer/half-integer parameters)."""
    a, b, x, y = Fraction(a), Fraction(b), Fraction(x), Fraction(y)

    def poch(c, m):
        out = Fraction(1)
        for i in range(m):
            out *= c + i
        return out

    def gam(z):  # Gamma(z) = (z0)_{z-z0} Gamma(z0), z0 in (0, 1]
        z0 = z - math.floor(z) if z != math.floor(z) else Fraction(1)
        return poch(z0, int(z - z0)), z0

    u = (1 - x) / 2
    total = 0.0
    for s in range(n + 1):
        for r in range(n - s + 1):
            ga, ga0 = gam(1 + a + s)
            gb, gb0 = gam(b + 1 + k * r)
            coef = poch(Fraction(-n), s + r) * poch(1 + a + b + n, s) * u**s * y ** (k * r) / (
                math.factorial(s) * math.factorial(r) * ga * gb
            )
            total += float(coef) / (gamma_fn(float(ga0)) * gamma_fn(float(gb0)))
    g, g0 = gam(1 + a + n)
    return float(g) * gamma_fn(float(g0)) / math.factorial(n) * total


def test_n0_is_reciprocal_gamma():
    for form in JKPolyForm:
        p = ParamSet(0.3, 1.7, 2)
        assert jk_poly(0, p, 0.2, 0.9, form) == pytest.approx(1 / gamma_fn(2.7), rel=1e-14)


@pytest.mark.parametrize("form", list(JKPolyForm))
@pytest.mark.parametrize("n", [0, 1, 3, 6])
def test_y_zero_reduces_to_jacobi(form, n):
    p = ParamSet(0.5, -0.25, 3)
    for x in (-0.7, 0.1, 0.8):
        want = jacobi_poly(n, p.alpha, p.beta, x) / gamma_fn(1 + p.beta)
        assert abs(jk_poly(n, p, x, 0.0, form) - want) <= 1e-12 * jk_poly_term_scale(n, p, x, 0.0)


def test_example_jac_vs_z_form():
    p = ParamSet(0.5, 0.25, 2)
    v1 = jk_poly(3, p, 0.3, 1.1, JKPolyForm.EXPLICIT_JAC)
    v2 = jk_poly(3, p, 0.3, 1.1, JKPolyForm.Z_FORM)
    assert v1 == pytest.approx(v2, rel=1e-13)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_matches_rational_reference(k):
    for n in range(6):
        for a, b in [(0, 0), (Fraction(1, 2), Fraction(3, 2)), (2, 1)]:
            x, y = Fraction(3, 10), Fraction(7, 5)
            ref = _exact_poly(n, a, b, k, x, y)
            got = jk_poly(n, ParamSet(float(a), float(b), k), float(x), float(y))
            assert abs(got - ref) <= 1e-13 * jk_poly_term_scale(n, ParamSet(float(a), float(b), k), float(x), float(y))


@settings(max_examples=40, deadline=None)
@given(
    st.integers(0, 8), st.sampled_from([-0.5, 0.5, 2.0]), st.sampled_from([-0.5, 0.5, 2.0]), st.integers(1, 3),
    st.floats(-0.99, 0.99), st.floats(0.0, 3.0),
)
def test_core_forms_agree(n, a, b, k, x, y):
    p = ParamSet(a, b, k)
    ref = jk_poly(n, p, x, y)
    scale = jk_poly_term_scale(n, p, x, y)
    for form in CORE_FORMS:
        assert abs(jk_poly(n, p, x, y, form) - ref) <= 1e-10 * scale


@pytest.mark.parametrize("form", [JKPolyForm.EXPLICIT_JAC2, JKPolyForm.EXPLICIT_JAC3, JKPolyForm.EXPLICIT_JAC4])
def test_alternate_jacobi_sums_disagree_off_axis(form):
    # swapping the one-variable Jacobi sum only reproduces the reference on y = 0
    p = ParamSet(0.5, 0.5, 1)
    ref = jk_poly(2, p, 0.3, 1.0)
    assert abs(jk_poly(2, p, 0.3, 1.0, form) - ref) > 1e-3 * abs(ref)


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 2, 4])
def test_degree_structure(n, k):
    p = ParamSet(0.5, 0.25, k)
    xs = np.arange(0, n + 3, dtype=float)
    ys = np.arange(0, k * n + 3, dtype=float)
    V = np.array([[jk_poly(n, p, x, y, check_domain=False) for y in ys] for x in xs])
    dx = np.diff(V, n=n + 1, axis=0)
    dy = np.diff(V, n=k * n + 1, axis=1)
    mag = np.abs(V).max()
    assert np.abs(dx).max() <= 1e-9 * mag
    assert np.abs(dy).max() <= 1e-9 * mag
    # and the degree is attained
    top_x, top_y = np.diff(V, n=n, axis=0), np.diff(V, n=k * n, axis=1)
    assert np.abs(top_x).min() > 0.5 * np.abs(top_x).max() > 0
    assert np.abs(top_y).min() > 0.5 * np.abs(top_y).max() > 0


def test_domain_and_degree_validation():
    p = ParamSet(0.5, 0.5)
    with pytest.raises(ValueError):
        jk_poly(2, p, 1.5, 0.3)
    with pytest.raises(ValueError):
        jk_poly(2, p, 0.5, -0.1)
    with pytest.raises(ValueError):
        jk_poly(-1, p, 0.5, 0.1)
    with pytest.raises(ValueError):
        jk_poly(1.5, p, 0.5, 0.1)
    assert jk_poly(2, p, 0.5, 0.1, "jac3") == pytest.approx(jk_poly(2, p, 0.5, 0.1, "EXPLICIT_JAC3"))


# --- dual family ---------------------------------------------------------------


def test_q_examples():
    p = ParamSet(0.0, 0.0, 1)
    assert q_poly(0, p, 0.3, 1.2) == 1
    want = jacobi_poly(1, 0, 0, 0.5) * (konhauser_y(0, 0, 1, 2.0) + konhauser_y(1, 0, 1, 2.0))
    assert q_poly(1, p, 0.5, 2.0) == pytest.approx(want)
    # Laguerre reduction: Y_0 = 1, Y_1 = 1 - y
    assert q_poly(1, p, 0.5, 2.0) == pytest.approx(0.5 * (1 + (1 - 2.0)))


def test_q_product_structure():
    p = ParamSet(0.7, 0.2, 2)
    ratios = [q_poly(2, p, x, 1.3) / jacobi_poly(2, 0.7, 0.2, x) for x in (-0.6, 0.1, 0.9)]
    assert max(ratios) - min(ratios) <= 1e-13 * max(abs(r) for r in ratios)


# --- biorthogonality matrix -----------------------------------------------------


def _rules(nmax, p):
    return gauss_jacobi_rule(nmax + 1, p.alpha, p.beta), gauss_laguerre_rule((p.kappa * nmax + nmax) // 2 + 2, p.beta)


def test_single_entry():
    p = ParamSet(0.0, 0.0, 1)
    M = biorthogonality_matrix(0, p, *_rules(0, p))
    assert M.shape == (1, 1)
    assert M[0, 0] == pytest.approx(2.0, rel=1e-14)
    assert biorthogonality_norm(0, p) == 2.0


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("ab", [(0.0, 0.0), (0.5, 0.25), (2.0, 1.0)])
def test_diagonal_and_upper_triangle(ab, k):
    p = ParamSet(*ab, k)
    M = biorthogonality_matrix(6, p, *_rules(6, p))
    for n in range(7):
        assert M[n, n] == pytest.approx(biorthogonality_norm(n, p), rel=1e-10)
        for m in range(n + 1, 7):
            assert abs(M[n, m]) <= 1e-9 * max(M[n, n], M[m, m])


def test_lower_triangle_is_not_zero():
    # entries below the diagonal do not vanish
    p = ParamSet(0.5, 0.25, 1)
    M = biorthogonality_matrix(3, p, *_rules(3, p))
    assert abs(M[1, 0]) > 1e-3


def test_matrix_rejects_weak_or_mismatched_rules():
    p = ParamSet(0.5, 0.25, 2)
    rx, ry = _rules(3, p)
    with pytest.raises(InsufficientDegreeError):
        biorthogonality_matrix(3, p, gauss_jacobi_rule(2, 0.5, 0.25), ry)
    with pytest.raises(InsufficientDegreeError):
        biorthogonality_matrix(3, p, rx, gauss_laguerre_rule(3, 0.25))
    with pytest.raises(ValueError):
        biorthogonality_matrix(3, p, gauss_jacobi_rule(4, 0.0, 0.0), ry)
    with pytest.raises(ValueError):
        biorthogonality_matrix(3, p, ry, rx)


# --- generating function ----------------------------------------------------------


@pytest.mark.parametrize("variant", ["statement", "proof"])
def test_generating_function_t0(variant):
    p = ParamSet(0.7, 1.2, 2)
    lhs, rhs = generating_function_check(p, 0.3, 0.8, 0.0, N=10, variant=variant)
    assert lhs == pytest.approx(1.0, rel=1e-14)
    assert rhs == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("variant", ["statement", "proof"])
def test_generating_function_x1_y0(variant):
    a, b = 0.6, 0.9
    t = 0.05
    lhs, rhs = generating_function_check(ParamSet(a, b, 3), 1.0, 0.0, t, N=40, variant=variant)
    want = (1 - t) ** (-(1 + a + b))
    assert lhs == pytest.approx(want, rel=1e-10)
    assert rhs == pytest.approx(want, rel=1e-10)


def test_generating_function_kappa1_variants_coincide():
    p = ParamSet(0.0, 0.0, 1)
    l1, r1 = generating_function_check(p, 0.2, 0.5, 0.05, N=30, variant="statement")
    l2, r2 = generating_function_check(p, 0.2, 0.5, 0.05, N=30, variant="proof")
    assert l1 == l2 and r1 == r2


def test_generating_function_proof_variant_matches_for_kappa2():
    # the reconstruction without the k^k factor reproduces the left side
    p = ParamSet(0.5, 0.5, 2)
    lhs, rhs = generating_function_check(p, 0.2, 0.7, 0.08, N=40, variant="proof")
    assert rhs == pytest.approx(lhs, rel=1e-10)


def test_generating_function_guards():
    p = ParamSet(0.5, 0.5, 1)
    with pytest.raises(ValueError):
        generating_function_check(p, 0.2, 0.3, 0.2)
    with pytest.raises(ValueError):
        generating_function_check(p, 0.2, 0.3, 0.05, variant="other")
    with pytest.raises(ArithmeticError):
        generating_function_check(p, 0.2, 0.3, 0.1, N=3)
