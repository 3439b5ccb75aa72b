"""Gauss-Jacobi and generalized Gauss-Laguerre rules, and RL kernel quadrature.

Rules are built Golub-Welsch style: nodes are the eigenvalues of the
symmetric tridiagonal Jacobi matrix, polished by Newton steps on the
three-term recurrence; weights come from the Christoffel sum
``mu0 / sum_k p_k(x_i)^2`` over the orthonormal polynomials, which keeps
full relative accuracy even for the tiny tail weights of Laguerre rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .special import gamma_fn


@dataclass(frozen=True)
class QuadratureRule:
    kind: str  # "GAUSS_JACOBI" or "GAUSS_LAGUERRE"
    params: tuple[float, ...]
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def exact_degree(self) -> int:
        return 2 * len(self.nodes) - 1

    def integrate(self, values) -> float:
        return math.fsum(np.asarray(values, dtype=float) * self.weights)


def _jacobi_recurrence(n: int, alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal ``a_k`` (k < n) and off-diagonal ``b_k`` (1 <= k <= n) of the Jacobi matrix."""
    ab = alpha + beta
    a = np.empty(n)
    b = np.empty(n)
    a[0] = (beta - alpha) / (ab + 2)
    for k in range(1, n):
        a[k] = (beta**2 - alpha**2) / ((2 * k + ab) * (2 * k + ab + 2))
    for k in range(1, n + 1):
        if k == 1:
            b2 = 4 * (1 + alpha) * (1 + beta) / ((2 + ab) ** 2 * (3 + ab))
        else:
            t = 2 * k + ab
            b2 = 4 * k * (k + alpha) * (k + beta) * (k + ab) / (t**2 * (t + 1) * (t - 1))
        b[k - 1] = math.sqrt(b2)
    return a, b


def _laguerre_recurrence(n: int, beta: float) -> tuple[np.ndarray, np.ndarray]:
    k = np.arange(n, dtype=float)
    a = 2 * k + beta + 1
    kk = np.arange(1, n + 1, dtype=float)
    b = np.sqrt(kk * (kk + beta))
    return a, b


def _orthonormal_values(x: np.ndarray, a: np.ndarray, b: np.ndarray, n: int):
    """Values of p_0..p_n and the derivative of p_n at x (orthonormal w.r.t. mu/mu0)."""
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    dp_prev = np.zeros_like(x)
    dp = np.zeros_like(x)
    sumsq = np.ones_like(x)
    for k in range(n):
        b_prev = b[k - 1] if k > 0 else 0.0
        p_next = ((x - a[k]) * p - b_prev * p_prev) / b[k]
        dp_next = (p + (x - a[k]) * dp - b_prev * dp_prev) / b[k]
        p_prev, p = p, p_next
        dp_prev, dp = dp, dp_next
        if k < n - 1:
            sumsq = sumsq + p * p
    return p, dp, sumsq


def _gauss_rule(a: np.ndarray, b: np.ndarray, mu0: float) -> tuple[np.ndarray, np.ndarray]:
    n = len(a)
    J = np.diag(a) + np.diag(b[: n - 1], 1) + np.diag(b[: n - 1], -1)
    x = np.sort(np.linalg.eigvalsh(J))
    for _ in range(3):
        p, dp, _ = _orthonormal_values(x, a, b, n)
        x = x - p / dp
    _, _, sumsq = _orthonormal_values(x, a, b, n)
    return x, mu0 / sumsq


@lru_cache(maxsize=256)
def _gauss_jacobi_cached(n: int, alpha: float, beta: float):
    a, b = _jacobi_recurrence(n, alpha, beta)
    mu0 = 2 ** (alpha + beta + 1) * gamma_fn(alpha + 1) * gamma_fn(beta + 1) / gamma_fn(alpha + beta + 2)
    x, w = _gauss_rule(a, b, mu0)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


@lru_cache(maxsize=256)
def _gauss_laguerre_cached(n: int, beta: float):
    a, b = _laguerre_recurrence(n, beta)
    x, w = _gauss_rule(a, b, gamma_fn(beta + 1))
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def gauss_jacobi_rule(n: int, alpha: float, beta: float) -> QuadratureRule:
    """n-point rule for the weight ``(1-x)^alpha (1+x)^beta`` on (-1, 1)."""
    if n < 1:
        raise ValueError("need at least one node")
    if not (alpha > -1 and beta > -1):
        raise ValueError("Jacobi exponents must exceed -1")
    x, w = _gauss_jacobi_cached(int(n), float(alpha), float(beta))
    return QuadratureRule("GAUSS_JACOBI", (float(alpha), float(beta)), x, w)


def gauss_laguerre_rule(n: int, beta: float) -> QuadratureRule:
    """n-point rule for the weight ``y^beta e^{-y}`` on (0, inf)."""
    if n < 1:
        raise ValueError("need at least one node")
    if not beta > -1:
        raise ValueError("Laguerre exponent must exceed -1")
    x, w = _gauss_laguerre_cached(int(n), float(beta))
    return QuadratureRule("GAUSS_LAGUERRE", (float(beta),), x, w)


def unit_interval_rule(n: int, left_power: float, right_power: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights for ``int_0^1 v^left_power (1-v)^right_power g(v) dv``."""
    rule = gauss_jacobi_rule(n, right_power, left_power)
    v = (1 + rule.nodes) / 2
    return v, rule.weights / 2 ** (left_power + right_power + 1)


def rl_kernel_nodes(a: float, x: float, order: float, n: int, lower_power: float = 0.0):
    """Nodes ``t_i`` and weights so that ``sum w_i g(t_i)`` equals
    ``1/Gamma(order) int_a^x (x-t)^(order-1) (t-a)^lower_power g(t) dt``
    exactly for polynomial g of degree <= 2n-1.
    """
    if not x > a:
        raise ValueError(f"need x > a, got x={x}, a={a}")
    if not order > 0:
        raise ValueError("fractional order must be positive")
    v, w = unit_interval_rule(n, order - 1, lower_power)
    h = x - a
    t = x - h * v
    scale = h ** (order + lower_power) / gamma_fn(order)
    return t, w * scale


def rl_kernel_quad(
    f: Callable[[float], float],
    a: float,
    x: float,
    zeta: float,
    n: int,
    lower_power: float = 0.0,
) -> float:
    """Riemann-Liouville integral ``I_{a+}^zeta`` of ``(t-a)^lower_power f(t)`` at x.

    The substitution ``t = x - (x-a) v`` folds the kernel singularity into
    the Jacobi weight, so no node sits on it.
    """
    t, w = rl_kernel_nodes(a, x, zeta, n, lower_power)
    vals = np.array([f(ti) for ti in t], dtype=float)
    return math.fsum(w * vals)
