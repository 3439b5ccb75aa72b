from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jkon.quadrature import gauss_jacobi_rule, gauss_laguerre_rule, rl_kernel_quad
from jkon.special import gamma_fn

mpmath.mp.dps = 30


def _jacobi_moment(a, b):
    """int (1-x)^a (1+x)^b dx on (-1, 1)."""
    return float(2 ** (mpmath.mpf(a) + b + 1) * mpmath.beta(mpmath.mpf(a) + 1, mpmath.mpf(b) + 1))


def test_jacobi_zeroth_moment():
    for a, b in [(0, 0), (-0.5, 0.5), (2.0, 1.0), (0.3, -0.7)]:
        r = gauss_jacobi_rule(7, a, b)
        want = 2 ** (a + b + 1) * gamma_fn(a + 1) * gamma_fn(b + 1) / gamma_fn(a + b + 2)
        assert r.weights.sum() == pytest.approx(want, rel=1e-14)


def test_gauss_legendre_two_point():
    r = gauss_jacobi_rule(2, 0, 0)
    assert np.allclose(r.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], rtol=0, atol=1e-15)
    assert np.allclose(r.weights, [1, 1], rtol=0, atol=1e-15)


def test_symmetry_for_equal_exponents():
    r = gauss_jacobi_rule(9, 0.7, 0.7)
    assert np.allclose(r.nodes, -r.nodes[::-1], atol=1e-15)
    assert np.allclose(r.weights, r.weights[::-1], rtol=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 40), st.floats(-0.9, 4), st.floats(-0.9, 4))
def test_jacobi_exactness(n, a, b):
    r = gauss_jacobi_rule(n, a, b)
    assert np.all(r.weights > 0)
    assert np.all((r.nodes > -1) & (r.nodes < 1))
    assert r.exact_degree == 2 * n - 1
    # (1-x)^k and (1+x)^k have positive integrands, so relative error is meaningful
    for k in range(r.exact_degree + 1):
        got = r.integrate((1 - r.nodes) ** k)
        assert abs(got - _jacobi_moment(a + k, b)) <= 1e-13 * _jacobi_moment(a + k, b)
        got = r.integrate((1 + r.nodes) ** k)
        assert abs(got - _jacobi_moment(a, b + k)) <= 1e-13 * _jacobi_moment(a, b + k)


def test_laguerre_examples():
    r = gauss_laguerre_rule(1, 0.0)
    assert r.nodes[0] == pytest.approx(1.0)
    assert r.weights[0] == pytest.approx(1.0)
    r = gauss_laguerre_rule(5, 1.3)
    assert r.weights.sum() == pytest.approx(gamma_fn(2.3), rel=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 40), st.floats(-0.9, 4))
def test_laguerre_exactness(n, b):
    r = gauss_laguerre_rule(n, b)
    assert np.all(r.weights > 0) and np.all(r.nodes > 0)
    for k in range(r.exact_degree + 1):
        want = float(mpmath.gamma(mpmath.mpf(b) + k + 1))
        assert abs(r.integrate(r.nodes**k) - want) <= 1e-13 * want


def test_rule_validation():
    with pytest.raises(ValueError):
        gauss_jacobi_rule(0, 0, 0)
    with pytest.raises(ValueError):
        gauss_jacobi_rule(3, -1, 0)
    with pytest.raises(ValueError):
        gauss_laguerre_rule(3, -1.5)


def test_rl_kernel_constant():
    got = rl_kernel_quad(lambda t: 1.0, 0.0, 1.0, 0.5, 4)
    assert got == pytest.approx(1.12837916709551, rel=1e-14)
    assert got == pytest.approx(1 / gamma_fn(1.5), rel=1e-15)


@pytest.mark.parametrize("mu", [0.0, 0.5, 1.0, 2.5])
@pytest.mark.parametrize("zeta", [0.3, 1.0, 1.7])
def test_rl_kernel_power_rule(mu, zeta):
    a, x = 0.2, 1.3
    got = rl_kernel_quad(lambda t: 1.0, a, x, zeta, 4, lower_power=mu)
    want = gamma_fn(mu + 1) / gamma_fn(mu + zeta + 1) * (x - a) ** (mu + zeta)
    assert got == pytest.approx(want, rel=1e-13)


def test_rl_kernel_order_one_is_plain_integral():
    f = lambda t: math.cos(t)  # noqa: E731
    assert rl_kernel_quad(f, 0.0, 1.0, 1.0, 20) == pytest.approx(math.sin(1.0), rel=1e-14)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_rl_kernel_polynomial_exact(n):
    rng = np.random.default_rng(n)
    c = rng.normal(size=2 * n)
    a, x, zeta = -0.4, 0.9, 0.65
    got = rl_kernel_quad(lambda t: np.polyval(c, t - a), a, x, zeta, n)
    # power rule term by term
    deg = len(c) - 1
    want = math.fsum(
        c[deg - j] * gamma_fn(j + 1) / gamma_fn(j + zeta + 1) * (x - a) ** (j + zeta) for j in range(deg + 1)
    )
    scale = math.fsum(abs(c[deg - j]) * gamma_fn(j + 1) / gamma_fn(j + zeta + 1) * (x - a) ** (j + zeta) for j in range(deg + 1))
    assert abs(got - want) <= 1e-12 * scale
