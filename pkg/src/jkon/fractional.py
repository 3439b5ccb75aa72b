"""Riemann-Liouville double fractional integrals and derivatives, and the
parameter-shift images of the JKML function under them.

Every quadrature here folds the kernel ``(x-t)^(mu-1)`` and an optional
left-endpoint power ``(t-a)^lam`` into a Gauss-Jacobi weight, so an
integrand that is polynomial after removing those factors is integrated
exactly up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .jkml import JkmlArgs, _support, jkml_grid, jkml_term
from .polynomials import jk_poly
from .quadrature import rl_kernel_nodes
from .special import POLE_TOL, ParamSet, gamma_fn, nonpositive_integer, pochhammer, rgamma


@dataclass(frozen=True)
class FracOrderPair:
    mu: float  # x-order
    zeta: float  # y-order
    a: float = 0.0
    b: float = 0.0

    def __post_init__(self):
        if not (self.mu > 0 and self.zeta > 0):
            raise ValueError(f"fractional orders must be positive, got ({self.mu}, {self.zeta})")


@dataclass(frozen=True)
class ScaledArgs:
    w1: float = 1.0
    w2: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.w1) and math.isfinite(self.w2)):
            raise ValueError("scale factors must be finite")


def _eval_grid(f: Callable, tx: np.ndarray, ty: np.ndarray) -> np.ndarray:
    """``f`` on the tensor grid, vectorised when ``f`` broadcasts."""
    T, U = np.meshgrid(tx, ty, indexing="ij")
    try:
        out = np.asarray(f(T, U), dtype=float)
        if out.shape == T.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.vectorize(lambda t, u: float(f(t, u)), otypes=[float])(T, U)


def rl_double_integral(
    f: Callable,
    orders: FracOrderPair,
    x: float,
    y: float,
    nquad: int = 32,
    lower_powers: tuple[float, float] = (0.0, 0.0),
) -> float:
    """``I_y^zeta I_x^mu [(t-a)^lx (u-b)^ly f(t, u)]`` evaluated at (x, y).

    Exact to rounding when ``f`` is a polynomial of degree <= 2*nquad-1 in
    each variable.
    """
    if not x > orders.a:
        raise ValueError(f"need x > a, got x={x}, a={orders.a}")
    if not y > orders.b:
        raise ValueError(f"need y > b, got y={y}, b={orders.b}")
    tx, wx = rl_kernel_nodes(orders.a, x, orders.mu, nquad, lower_powers[0])
    ty, wy = rl_kernel_nodes(orders.b, y, orders.zeta, nquad, lower_powers[1])
    F = _eval_grid(f, tx, ty)
    return math.fsum((np.outer(wx, wy) * F).ravel())


def rl_power_integral(p: float, order: float, h: float) -> float:
    """``I^order (t-a)^p`` at ``x = a + h``."""
    return gamma_fn(p + 1) * rgamma(p + order + 1) * h ** (p + order)


def rl_power_derivative(p: float, order: float, h: float) -> float:
    """``D^order (t-a)^p`` at ``x = a + h`` (zero when ``p - order + 1`` is a pole)."""
    return gamma_fn(p + 1) * rgamma(p - order + 1) * h ** (p - order)


def _central_weights(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Offsets and weights of the narrowest second-order central stencil."""
    p = (order + 1) // 2
    offs = np.arange(-p, p + 1, dtype=float)
    V = np.vander(offs, increasing=True).T
    rhs = np.zeros(len(offs))
    rhs[order] = math.factorial(order)
    return offs, np.linalg.solve(V, rhs)


def _mixed_fd(G: Callable[[float, float], float], x, y, n, m, hx, hy) -> float:
    ox, cx = _central_weights(n)
    oy, cy = _central_weights(m)
    total = [
        cx[i] * cy[j] * G(x + ox[i] * hx, y + oy[j] * hy)
        for i in range(len(ox))
        for j in range(len(oy))
        if cx[i] != 0 and cy[j] != 0
    ]
    return math.fsum(total) / (hx**n * hy**m)


def rl_partial_derivative(
    f: Callable,
    orders: FracOrderPair,
    x: float,
    y: float,
    h: float = 1e-4,
    nquad: int = 32,
    lower_powers: tuple[float, float] = (0.0, 0.0),
    richardson: bool = True,
) -> float:
    """``d^n/dx^n d^m/dy^m I^{(n-mu, m-zeta)} [...]`` with n = floor(mu)+1,
    m = floor(zeta)+1, by central differences with relative step ``h``.

    The outer derivatives are finite differences, so this is a smoke-test
    route; one Richardson step lifts it to fourth order.
    """
    n = math.floor(orders.mu) + 1
    m = math.floor(orders.zeta) + 1
    hx, hy = h * (x - orders.a), h * (y - orders.b)
    px, py = (n + 1) // 2, (m + 1) // 2
    if hx <= 1e-12 * max(1.0, abs(x)) or hy <= 1e-12 * max(1.0, abs(y)):
        raise ValueError("finite-difference step underflows")
    if x - px * hx <= orders.a or y - py * hy <= orders.b:
        raise ValueError("finite-difference stencil crosses the lower limit")
    inner = FracOrderPair(n - orders.mu, m - orders.zeta, orders.a, orders.b)

    def G(u, v):
        return rl_double_integral(f, inner, u, v, nquad, lower_powers)

    d1 = _mixed_fd(G, x, y, n, m, hx, hy)
    if not richardson:
        return d1
    d2 = _mixed_fd(G, x, y, n, m, hx / 2, hy / 2)
    return (4 * d2 - d1) / 3


# --- images of the JKML function ------------------------------------------


def _auto_nquad(args: JkmlArgs) -> int:
    _, _, d = _support(args)
    if d is None:
        return 48
    return (args.kappa * d) // 2 + 2


def _scaled_jkml(args: JkmlArgs, orders: FracOrderPair, scales: ScaledArgs):
    def f(T, U):
        return jkml_grid(
            args.alpha, args.beta, args.kappa, args.gamma1, args.gamma2,
            scales.w1 * (T[:, 0] - orders.a), scales.w2 * (U[0, :] - orders.b),
        )

    return f


def _closed_image(args: JkmlArgs, orders: FracOrderPair, scales: ScaledArgs, x, y, sign: int) -> float:
    a_new = args.alpha + sign * orders.mu
    b_new = args.beta + sign * orders.zeta
    E = jkml_grid(
        a_new, b_new, args.kappa, args.gamma1, args.gamma2,
        [scales.w1 * (x - orders.a)], [scales.w2 * (y - orders.b)],
    )[0, 0]
    return (x - orders.a) ** (a_new - 1) * (y - orders.b) ** (b_new - 1) * E


def frac_integral_image_jkml(
    args: JkmlArgs, orders: FracOrderPair, scales: ScaledArgs, x: float, y: float, nquad: int | None = None
) -> tuple[float, float]:
    """Both sides of the double-integral image.

    ``args.alpha``/``args.beta`` are the shifted JKML parameters
    ``alpha+1``/``beta+1``; ``args.x``/``args.y`` are ignored.
    numeric: ``I^{(mu,zeta)} [(t-a)^alpha (u-b)^beta E_{alpha+1,beta+1}(w1(t-a), w2(u-b))]``.
    closed:  ``(x-a)^{alpha+mu} (y-b)^{beta+zeta} E_{1+alpha+mu,1+beta+zeta}(...)``.
    """
    nq = nquad or _auto_nquad(args)
    lp = (args.alpha - 1, args.beta - 1)
    numeric = rl_double_integral(_scaled_jkml(args, orders, scales), orders, x, y, nq, lp)
    return numeric, _closed_image(args, orders, scales, x, y, +1)


def frac_derivative_image_jkml(
    args: JkmlArgs,
    orders: FracOrderPair,
    scales: ScaledArgs,
    x: float,
    y: float,
    h: float = 1e-4,
    nquad: int | None = None,
) -> tuple[float, float]:
    """Both sides of the partial fractional derivative image; the numeric
    side goes through finite differences of a fractional integral."""
    a1, b1 = args.alpha - orders.mu, args.beta - orders.zeta
    _, _, d = _support(args)
    reach_s = d if d is not None else 0
    for s in range(reach_s + 1):
        if nonpositive_integer(a1 + s, POLE_TOL) is not None and d is not None:
            raise ValueError(f"closed form hits a gamma pole at alpha - mu + {s} + 1")
    if nonpositive_integer(b1, POLE_TOL) is not None and d is not None:
        raise ValueError("closed form hits a gamma pole at beta - zeta + 1")
    nq = nquad or _auto_nquad(args)
    lp = (args.alpha - 1, args.beta - 1)
    numeric = rl_partial_derivative(_scaled_jkml(args, orders, scales), orders, x, y, h, nq, lp)
    return numeric, _closed_image(args, orders, scales, x, y, -1)


def _termwise(args: JkmlArgs, orders: FracOrderPair, scales: ScaledArgs, x, y, sign: int, max_terms: int = 40):
    """Per-monomial comparison of the power rule against the closed-form term.

    Returns the largest relative deviation over the support (or the
    ``max_terms`` triangle for non-terminating parameters).
    """
    _, _, d = _support(args)
    D = d if d is not None else max_terms
    k = args.kappa
    hx, hy = x - orders.a, y - orders.b
    a2, b2 = args.alpha + sign * orders.mu, args.beta + sign * orders.zeta
    rule = rl_power_integral if sign > 0 else rl_power_derivative
    worst = 0.0
    for s in range(D + 1):
        for r in range(D + 1 - s):
            c = jkml_term(args.at(scales.w1, scales.w2), s, r)
            if c == 0.0:
                continue
            lhs = c * rule(args.alpha - 1 + s, orders.mu, hx) * rule(args.beta - 1 + k * r, orders.zeta, hy)
            rhs = (
                pochhammer(args.gamma1, s + r) * pochhammer(args.gamma2, s)
                * (scales.w1 * hx) ** s * (scales.w2 * hy) ** (k * r)
                * rgamma(a2 + s) * rgamma(b2 + k * r) / (math.factorial(s) * math.factorial(r))
                * hx ** (a2 - 1) * hy ** (b2 - 1)
            )
            scale = max(abs(lhs), abs(rhs))
            if scale > 0:
                worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def termwise_integral_check(args, orders, scales, x, y, max_terms: int = 40) -> float:
    return _termwise(args, orders, scales, x, y, +1, max_terms)


def termwise_derivative_check(args, orders, scales, x, y, max_terms: int = 40) -> float:
    return _termwise(args, orders, scales, x, y, -1, max_terms)


# --- polynomial corollaries ------------------------------------------------


def _poly_image(n, params: ParamSet, orders, scales, x, y, sign, numeric_route):
    a, b = params.alpha, params.beta

    def f(t, u):
        return jk_poly(n, params, 1 - 2 * scales.w1 * (t - orders.a), scales.w2 * (u - orders.b), check_domain=False)

    shifted = ParamSet(a + sign * orders.mu, b + sign * orders.zeta, params.kappa)
    closed = (
        gamma_fn(1 + a + n) * rgamma(1 + a + n + sign * orders.mu)
        * (x - orders.a) ** (a + sign * orders.mu) * (y - orders.b) ** (b + sign * orders.zeta)
        * jk_poly(n, shifted, 1 - 2 * scales.w1 * (x - orders.a), scales.w2 * (y - orders.b), check_domain=False)
    )
    return numeric_route(f, (a, b)), closed


def frac_integral_corollary(
    n: int, params: ParamSet, orders: FracOrderPair, scales: ScaledArgs, x: float, y: float
) -> tuple[float, float]:
    """Numeric image of ``(t-a)^a (u-b)^b P_n(1 - 2 w1 (t-a), w2 (u-b))`` under
    ``I^{(mu,zeta)}`` and the polynomial closed form with prefactor
    ``Gamma(1+a+n)/Gamma(1+a+n+mu)`` and parameters ``(a+mu, b+zeta)``."""
    nq = (params.kappa * n) // 2 + 2
    return _poly_image(
        n, params, orders, scales, x, y, +1,
        lambda f, lp: rl_double_integral(f, orders, x, y, nq, lp),
    )


def frac_derivative_corollary(
    n: int, params: ParamSet, orders: FracOrderPair, scales: ScaledArgs, x: float, y: float, h: float = 1e-4
) -> tuple[float, float]:
    """Derivative counterpart of :func:`frac_integral_corollary`."""
    nq = (params.kappa * n) // 2 + 2
    return _poly_image(
        n, params, orders, scales, x, y, -1,
        lambda f, lp: rl_partial_derivative(f, orders, x, y, h, nq, lp),
    )
