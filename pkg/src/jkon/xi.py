"""The double integral operator with a JKML kernel

    (xi f)(x, y) = int_d^y int_b^x (x-t)^(a-1) (y-u)^(b-1)
                   E_{a,b,k}^{(g1;g2)}(w1 (x-t), w2 (y-u)) f(t, u) dt du,

its series form over Riemann-Liouville integrals, the L1 bound constant,
closed-form images of powers and exponentials, compositions with RL
operators, and double Laplace transforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fractional import FracOrderPair, rl_double_integral, rl_power_derivative, rl_power_integral
from .jkml import JkmlArgs, _support, jkml_eval, jkml_grid, majorant_tail
from .kdf import DEFAULT_POLICY, KdFSpec, TruncationPolicy, kdf_f_eval, sum_diagonals
from .quadrature import gauss_laguerre_rule, rl_kernel_nodes
from .special import ParamSet, SeriesResult, gamma_fn, hyp2f0_terminating, nonpositive_integer, pochhammer, rgamma


@dataclass(frozen=True)
class XiSpec:
    params: ParamSet
    w1: float = 0.0
    w2: float = 0.0
    b: float = 0.0  # x left limit
    d: float = 0.0  # y left limit

    def __post_init__(self):
        if not (self.params.alpha > 0 and self.params.beta > 0):
            raise ValueError("the operator needs alpha, beta > 0")

    def with_orders(self, alpha: float, beta: float) -> XiSpec:
        p = self.params
        return XiSpec(ParamSet(alpha, beta, p.kappa, p.gamma1, p.gamma2), self.w1, self.w2, self.b, self.d)


@dataclass(frozen=True)
class BoxDomain:
    a: float  # x right end
    b: float  # x left end
    c: float  # y right end
    d: float  # y left end

    def __post_init__(self):
        if not (self.a > self.b and self.c > self.d):
            raise ValueError("box needs a > b and c > d")


def _coef(p: ParamSet, w1: float, w2: float, s: int, r: int) -> float:
    """``(g1)_{r+s} (g2)_s w1^s w2^{k r} / (r! s!)``."""
    return (
        pochhammer(p.gamma1, r + s) * pochhammer(p.gamma2, s) * w1**s * w2 ** (p.kappa * r)
        / (math.factorial(r) * math.factorial(s))
    )


def _support_of(spec: XiSpec):
    p = spec.params
    return _support(JkmlArgs(p.alpha, p.beta, p.kappa, p.gamma1, p.gamma2, spec.w1, spec.w2))


def _sum_terms(spec: XiSpec, term: Callable[[int, int], float], policy: TruncationPolicy) -> SeriesResult:
    """Sum ``term(s, r)`` over the operator's coefficient support."""
    s_stop, r_stop, d_stop = _support_of(spec)

    def block(dd, s_lo, s_hi):
        return np.array([term(s, dd - s) for s in range(s_lo, s_hi + 1)])

    return sum_diagonals(block, policy, s_stop, r_stop, d_stop)


def xi_apply_series(
    spec: XiSpec,
    f: Callable,
    x: float,
    y: float,
    policy: TruncationPolicy = DEFAULT_POLICY,
    nquad: int = 32,
    lower_powers: tuple[float, float] = (0.0, 0.0),
) -> SeriesResult:
    """Series form: ``sum c_{s,r} I_y^{b+k r} I_x^{a+s} f``, each RL term by quadrature.

    ``lower_powers=(p, q)`` applies the operator to ``(t-b)^p (u-d)^q f``.
    """
    p = spec.params

    def term(s, r):
        c = _coef(p, spec.w1, spec.w2, s, r)
        if c == 0.0:
            return 0.0
        orders = FracOrderPair(p.alpha + s, p.beta + p.kappa * r, spec.b, spec.d)
        return c * rl_double_integral(f, orders, x, y, nquad, lower_powers)

    return _sum_terms(spec, term, policy)


def xi_apply_kernel(
    spec: XiSpec,
    f: Callable,
    x: float,
    y: float,
    nquad: int = 32,
    lower_powers: tuple[float, float] = (0.0, 0.0),
) -> float:
    """Kernel form by direct tensor quadrature; the ``(x-t)^(a-1) (y-u)^(b-1)``
    singularity is folded into Gauss-Jacobi weights and the JKML kernel is
    evaluated at the nodes."""
    p = spec.params
    tx, wx = rl_kernel_nodes(spec.b, x, p.alpha, nquad, lower_powers[0])
    ty, wy = rl_kernel_nodes(spec.d, y, p.beta, nquad, lower_powers[1])
    E = jkml_grid(p.alpha, p.beta, p.kappa, p.gamma1, p.gamma2, spec.w1 * (x - tx), spec.w2 * (y - ty))
    T, U = np.meshgrid(tx, ty, indexing="ij")
    try:
        F = np.asarray(f(T, U), dtype=float)
        if F.shape != T.shape:
            raise ValueError
    except (TypeError, ValueError):
        F = np.vectorize(lambda t, u: float(f(t, u)), otypes=[float])(T, U)
    # rl_kernel_nodes divides by Gamma(order); the kernel form does not
    W = np.outer(wx, wy) * gamma_fn(p.alpha) * gamma_fn(p.beta)
    return math.fsum((W * E * F).ravel())


def xi_bound_constant(spec: XiSpec, box: BoxDomain, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """The L1 operator-norm bound K on the box.

    The infinite sum is truncated on a square and the rigorous majorant
    tail bound is added, so the returned value is an upper bound on K that
    exceeds it by at most ``policy.abs_tol`` (relative to the prefactor).
    """
    p = spec.params
    A, B = box.a - box.b, box.c - box.d
    X, Yk = abs(spec.w1 * A), abs(spec.w2 * B) ** p.kappa
    g, h = abs(p.gamma1), abs(p.gamma2)
    pref = A**p.alpha * B**p.beta

    def absterm(s, r):
        return (
            abs(pochhammer(p.gamma1, r + s)) * abs(pochhammer(p.gamma2, s)) * X**s * Yk**r
            * abs(rgamma(p.alpha + 1 + s)) * abs(rgamma(p.beta + 1 + p.kappa * r))
            / (math.factorial(r) * math.factorial(s))
        )

    _, _, d_stop = _support(JkmlArgs(p.alpha, p.beta, p.kappa, p.gamma1, p.gamma2, X, Yk))
    if d_stop is not None:
        return pref * math.fsum(absterm(s, r) for s in range(d_stop + 1) for r in range(d_stop + 1 - s))
    S = 8
    while S <= min(policy.max_s, policy.max_r, 170):
        tail = majorant_tail(g, h, p.alpha + 1, p.beta + 1, p.kappa, X, Yk, S, S)
        if tail <= policy.abs_tol:
            body = math.fsum(absterm(s, r) for s in range(S + 1) for r in range(S + 1))
            return pref * (body + tail)
        S *= 2
    raise ArithmeticError("bound-constant series did not reach tolerance; needs |w1 (a-b)| < 1")


def xi_power_image(spec: XiSpec, mu: float, zeta: float, x: float, y: float) -> float:
    """Closed image of ``(t-b)^mu (u-d)^zeta``."""
    if not (mu > -1 and zeta > -1):
        raise ValueError("power image needs mu, zeta > -1")
    if not (x > spec.b and y > spec.d):
        raise ValueError("need x > b and y > d")
    p = spec.params
    hx, hy = x - spec.b, y - spec.d
    res = jkml_eval(JkmlArgs(p.alpha + mu + 1, p.beta + zeta + 1, p.kappa, p.gamma1, p.gamma2, spec.w1 * hx, spec.w2 * hy))
    if not res.converged:
        raise ArithmeticError("JKML series did not converge in the power image")
    return gamma_fn(mu + 1) * gamma_fn(zeta + 1) * hx ** (mu + p.alpha) * hy ** (zeta + p.beta) * res.value


# --- 2F0 factor shared by the exponential image and the Laplace theorems ---


def hyp2f0_factor(gamma1: float, gamma2: float, z: float) -> float:
    """``2F0[g1, g2; -; z]`` for a terminating numerator parameter."""
    n1, n2 = nonpositive_integer(gamma1), nonpositive_integer(gamma2)
    if n1 is not None and (n2 is None or n1 <= n2):
        return hyp2f0_terminating(n1, gamma2, z)
    if n2 is not None:
        return hyp2f0_terminating(n2, gamma1, z)
    raise ValueError("2F0 is only summed for a terminating numerator parameter (gamma1 or gamma2 = -n)")


def _laplace_like_factor(gamma1, gamma2, kappa, w1, w2, p, q) -> float:
    """``[1 - (w2/q)^k]^(-g1) 2F0[g1, g2; -; q^k w1 / (p (q^k - w2^k))]``."""
    if abs(w2 / q) >= 1:
        raise ValueError(f"need |w2/q| < 1, got {abs(w2 / q)}")
    ratio = (w2 / q) ** kappa
    z = w1 / (p * (1 - ratio))
    return (1 - ratio) ** (-gamma1) * hyp2f0_factor(gamma1, gamma2, z)


def xi_exp_image(spec: XiSpec, delta: float, sigma: float, x: float, y: float) -> float:
    """Image of ``e^{delta t + sigma u}`` for left limits at minus infinity."""
    if not (delta > 0 and sigma > 0):
        raise ValueError("need delta, sigma > 0")
    p = spec.params
    factor = _laplace_like_factor(p.gamma1, p.gamma2, p.kappa, spec.w1, spec.w2, delta, sigma)
    return delta ** (-p.alpha) * sigma ** (-p.beta) * math.exp(delta * x + sigma * y) * factor


def xi_exp_series(
    spec: XiSpec, delta: float, sigma: float, x: float, y: float, policy: TruncationPolicy = DEFAULT_POLICY
) -> SeriesResult:
    """Series-form oracle for :func:`xi_exp_image`: the RL exponential rule
    applied to each term, leaving a double hypergeometric sum in
    ``w1/delta`` and ``(w2/sigma)^k``."""
    p = spec.params
    kspec = KdFSpec(upper_joint=(p.gamma1,), upper_x=(p.gamma2,))
    res = kdf_f_eval(kspec, spec.w1 / delta, (spec.w2 / sigma) ** p.kappa, policy)
    scale = delta ** (-p.alpha) * sigma ** (-p.beta) * math.exp(delta * x + sigma * y)
    return SeriesResult(scale * res.value, abs(scale) * res.abs_error_estimate, res.terms_used, res.converged)


# --- Laplace transforms ------------------------------------------------------


def laplace_jkml_closed(
    params: ParamSet,
    w1: float,
    w2: float,
    p1: float,
    p2: float,
    variant: str = "jkml",
    n: int | None = None,
) -> float:
    """Double Laplace transform in closed form.

    ``variant="jkml"``: transform of ``x^a y^b E_{a+1,b+1,k}^{(g1;g2)}(w1 x, w2 y)``.
    ``variant="polynomial"``: transform of ``x^a y^b P_n(1 - 2 w1 x, w2 y)``.
    """
    if not (p1 > 0 and p2 > 0):
        raise ValueError("need p1, p2 > 0")
    a, b, k = params.alpha, params.beta, params.kappa
    base = p1 ** (-(1 + a)) * p2 ** (-(1 + b))
    if variant == "jkml":
        return base * _laplace_like_factor(params.gamma1, params.gamma2, k, w1, w2, p1, p2)
    if variant == "polynomial":
        if n is None or n < 0 or int(n) != n:
            raise ValueError("polynomial variant needs a nonnegative integer n")
        n = int(n)
        return base * gamma_fn(1 + a + n) / math.factorial(n) * _laplace_like_factor(-n, 1 + a + b + n, k, w1, w2, p1, p2)
    raise ValueError(f"unknown variant {variant!r}")


def laplace2_numeric(
    g: Callable,
    p1: float,
    p2: float,
    x_power: float = 0.0,
    y_power: float = 0.0,
    nquad: int = 40,
) -> float:
    """``int_0^inf int_0^inf e^{-p1 x - p2 y} x^xp y^yp g(x, y) dx dy`` by
    generalized Gauss-Laguerre after ``u = p1 x``, ``v = p2 y``; exact for
    polynomial ``g`` of degree <= 2*nquad-1 in each variable."""
    rx = gauss_laguerre_rule(nquad, x_power)
    ry = gauss_laguerre_rule(nquad, y_power)
    X, Y = np.meshgrid(rx.nodes / p1, ry.nodes / p2, indexing="ij")
    try:
        G = np.asarray(g(X, Y), dtype=float)
        if G.shape != X.shape:
            raise ValueError
    except (TypeError, ValueError):
        G = np.vectorize(lambda s, t: float(g(s, t)), otypes=[float])(X, Y)
    W = np.outer(rx.weights, ry.weights)
    return p1 ** (-(1 + x_power)) * p2 ** (-(1 + y_power)) * math.fsum((W * G).ravel())


def laplace_of_xi(spec: XiSpec, f_transform: Callable[[float, float], float], p: float, q: float) -> float:
    """Transform of ``xi f`` (left limits 0) from the transform of ``f``."""
    if spec.b != 0 or spec.d != 0:
        raise ValueError("Laplace image needs left limits b = d = 0")
    if not (p > 0 and q > 0):
        raise ValueError("need p, q > 0")
    P = spec.params
    factor = _laplace_like_factor(P.gamma1, P.gamma2, P.kappa, spec.w1, spec.w2, p, q)
    return p ** (-P.alpha) * q ** (-P.beta) * factor * f_transform(p, q)


# --- compositions with RL operators -----------------------------------------


def xi_composition_check(
    spec: XiSpec,
    orders: FracOrderPair | None,
    monomial: tuple[float, float],
    x: float,
    y: float,
    kind: str = "integral",
) -> tuple[float, float, float]:
    """Three routes for RL composed with xi on ``(t-b)^p (u-d)^q``.

    lhs: RL operator applied to ``xi f``; mid: xi with orders shifted by
    ``+-(mu, zeta)``; rhs: xi applied to the RL image of ``f``.
    ``orders=None`` means zero order (identity). For ``kind="integral"``
    lhs is a Gauss-Jacobi quadrature of the closed ``xi f``; every other
    value is a sum of exact power rules.
    """
    if kind not in ("integral", "derivative"):
        raise ValueError("kind must be 'integral' or 'derivative'")
    pw, qw = monomial
    P = spec.params
    hx, hy = x - spec.b, y - spec.d
    if orders is None:
        v = xi_power_image(spec, pw, qw, x, y)
        return v, v, v
    if orders.a != spec.b or orders.b != spec.d:
        raise ValueError("RL lower limits must match the operator's left limits")
    sign = 1 if kind == "integral" else -1
    mu, zeta = sign * orders.mu, sign * orders.zeta
    s_stop, r_stop, d_stop = _support_of(spec)
    if d_stop is None:
        raise ValueError("composition check needs terminating gamma1")
    rule = rl_power_integral if sign > 0 else rl_power_derivative

    def xi_terms(alpha, beta, p_exp, q_exp, outer=None):
        out = []
        for s in range(d_stop + 1):
            for r in range(d_stop + 1 - s):
                c = _coef(P, spec.w1, spec.w2, s, r)
                if c == 0.0:
                    continue
                px = gamma_fn(p_exp + 1) * rgamma(p_exp + alpha + s + 1)
                py = gamma_fn(q_exp + 1) * rgamma(q_exp + beta + P.kappa * r + 1)
                ex, ey = p_exp + alpha + s, q_exp + beta + P.kappa * r
                if outer is None:
                    out.append(c * px * py * hx**ex * hy**ey)
                else:
                    out.append(c * px * py * outer(ex, ey))
        return math.fsum(out)

    if kind == "integral":
        def xi_f(T, U):
            # xi f divided by (t-b)^{p+a} (u-d)^{q+b}: polynomial in (t-b), (u-d)
            E = jkml_grid(
                P.alpha + pw + 1, P.beta + qw + 1, P.kappa, P.gamma1, P.gamma2,
                spec.w1 * (T[:, 0] - spec.b), spec.w2 * (U[0, :] - spec.d),
            )
            return gamma_fn(pw + 1) * gamma_fn(qw + 1) * E

        nq = (P.kappa * d_stop) // 2 + 2
        lhs = rl_double_integral(xi_f, orders, x, y, nq, (pw + P.alpha, qw + P.beta))
    else:
        lhs = xi_terms(P.alpha, P.beta, pw, qw, outer=lambda ex, ey: rule(ex, orders.mu, hx) * rule(ey, orders.zeta, hy))

    mid = xi_terms(P.alpha + mu, P.beta + zeta, pw, qw)
    pre = rule(pw, orders.mu, 1.0) * rule(qw, orders.zeta, 1.0)
    rhs = pre * xi_terms(P.alpha, P.beta, pw + mu, qw + zeta)
    return lhs, mid, rhs
