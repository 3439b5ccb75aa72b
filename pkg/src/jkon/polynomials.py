"""Bivariate Jacobi-Konhauser polynomials, their dual family and the
generating-function diagnostic.

The reference definition is the double sum

    P_n(x, y) = Gamma(1+a+n)/n! sum_{s+r<=n} (-n)_{s+r} (1+a+b+n)_s
                ((1-x)/2)^s y^{k r} / (s! r! Gamma(1+a+s) Gamma(b+1+k r)).

Other representations are provided as independent evaluation routes.
``EXPLICIT_JAC2..4`` swap in the alternative one-variable Jacobi sums;
they agree with the reference only on ``y = 0``.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .jkml import JkmlArgs, jkml_eval
from .kdf import KdFSpec, SSeriesSpec, kdf_f_eval, kdf_s_eval
from .quadrature import QuadratureRule
from .special import ParamSet, gamma_fn, jacobi_poly, konhauser_y, konhauser_z, pochhammer, rgamma


class JKPolyForm(enum.Enum):
    EXPLICIT_JAC = "jac"
    EXPLICIT_JAC2 = "jac2"
    EXPLICIT_JAC3 = "jac3"
    EXPLICIT_JAC4 = "jac4"
    Z_FORM = "z"
    KDF_FORM = "kdf"
    ML_FORM = "ml"


class InsufficientDegreeError(ValueError):
    """A quadrature rule cannot integrate the requested polynomial exactly."""


def _check_n(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise ValueError(f"degree must be a nonnegative integer, got {n!r}")
    return int(n)


def _double_sum(n, p: ParamSet, coef_x, powers_x, y) -> float:
    """Shared body of the explicit forms: sum over s + r <= n with a
    form-specific s-coefficient ``coef_x(s)`` and s-power ``powers_x(s)``."""
    k = p.kappa
    terms = []
    for s in range(n + 1):
        cx = coef_x(s) * powers_x(s)
        for r in range(n - s + 1):
            terms.append(
                pochhammer(-n, s + r) * cx * y ** (k * r) * rgamma(p.beta + 1 + k * r)
                / (math.factorial(s) * math.factorial(r))
            )
    return math.fsum(terms)


def _jac(n, p, x, y):
    a, b = p.alpha, p.beta
    u = (1 - x) / 2
    body = _double_sum(n, p, lambda s: pochhammer(1 + a + b + n, s) * rgamma(1 + a + s), lambda s: u**s, y)
    return gamma_fn(1 + a + n) / math.factorial(n) * body


def _jac2(n, p, x, y):
    # ((x+1)/2)^n ((x-1)/(x+1))^s distributed as ((x+1)/2)^(n-s) ((x-1)/2)^s
    a, b = p.alpha, p.beta
    u, v = (x + 1) / 2, (x - 1) / 2
    body = _double_sum(
        n, p, lambda s: pochhammer(-b - n, s) * rgamma(1 + a + s), lambda s: u ** (n - s) * v**s, y
    )
    return gamma_fn(1 + a + n) / math.factorial(n) * body


def _jac3(n, p, x, y):
    a, b = p.alpha, p.beta
    u = (1 + x) / 2
    body = _double_sum(n, p, lambda s: pochhammer(1 + a + b + n, s) * rgamma(1 + b + s), lambda s: u**s, y)
    return (-1) ** n * gamma_fn(1 + b + n) / math.factorial(n) * body


def _jac4(n, p, x, y):
    a, b = p.alpha, p.beta
    u, v = (x - 1) / 2, (x + 1) / 2
    body = _double_sum(
        n, p, lambda s: pochhammer(-a - n, s) * rgamma(1 + b + s), lambda s: u ** (n - s) * v**s, y
    )
    return gamma_fn(1 + b + n) / math.factorial(n) * body


def _z_form(n, p, x, y):
    a, b, k = p.alpha, p.beta, p.kappa
    u = (1 - x) / 2
    terms = [
        (-1) ** s * pochhammer(1 + a + b + n, s) * u**s * konhauser_z(n - s, b, k, y)
        * rgamma(1 + a + s) * rgamma(1 + b + k * (n - s)) / math.factorial(s)
        for s in range(n + 1)
    ]
    return gamma_fn(1 + a + n) * math.fsum(terms)


def kdf_spec_for(n: int, p: ParamSet) -> KdFSpec:
    """Double hypergeometric parameters of the KdF representation; arguments
    are ``(1-x)/2`` and ``(y/kappa)^kappa``."""
    k = p.kappa
    return KdFSpec(
        upper_joint=(-n,),
        upper_x=(1 + p.alpha + p.beta + n,),
        lower_x=(1 + p.alpha,),
        lower_y=tuple((p.beta + 1 + j) / k for j in range(k)),
    )


def _kdf_form(n, p, x, y):
    k = p.kappa
    res = kdf_f_eval(kdf_spec_for(n, p), (1 - x) / 2, (y / k) ** k)
    return pochhammer(1 + p.alpha, n) / (gamma_fn(1 + p.beta) * math.factorial(n)) * res.value


def _ml_form(n, p, x, y):
    args = JkmlArgs(p.alpha + 1, p.beta + 1, p.kappa, -n, 1 + p.alpha + p.beta + n, (1 - x) / 2, y)
    return gamma_fn(1 + p.alpha + n) / math.factorial(n) * jkml_eval(args).value


_FORMS = {
    JKPolyForm.EXPLICIT_JAC: _jac,
    JKPolyForm.EXPLICIT_JAC2: _jac2,
    JKPolyForm.EXPLICIT_JAC3: _jac3,
    JKPolyForm.EXPLICIT_JAC4: _jac4,
    JKPolyForm.Z_FORM: _z_form,
    JKPolyForm.KDF_FORM: _kdf_form,
    JKPolyForm.ML_FORM: _ml_form,
}


def jk_poly(
    n: int,
    params: ParamSet,
    x: float,
    y: float,
    form: JKPolyForm | str = JKPolyForm.EXPLICIT_JAC,
    check_domain: bool = True,
) -> float:
    """Evaluate ``P_n(x, y)`` through the chosen representation.

    ``check_domain=False`` lifts the ``x in [-1, 1], y >= 0`` restriction,
    which is useful for polynomial-structure checks on integer grids.
    """
    n = _check_n(n)
    if isinstance(form, str):
        form = JKPolyForm[form.upper()] if form.upper() in JKPolyForm.__members__ else JKPolyForm(form.lower())
    if check_domain and not (-1 <= x <= 1 and y >= 0):
        raise ValueError(f"(x, y) = ({x}, {y}) outside [-1, 1] x [0, inf)")
    return _FORMS[form](n, params, float(x), float(y))


def jk_poly_term_scale(n: int, params: ParamSet, x: float, y: float) -> float:
    """Sum of absolute summands of the reference double sum: the natural
    magnitude against which rounding in any representation is measured."""
    n = _check_n(n)
    a, b, k = params.alpha, params.beta, params.kappa
    u = abs((1 - x) / 2)
    terms = [
        abs(pochhammer(-n, s + r) * pochhammer(1 + a + b + n, s) * rgamma(1 + a + s) * rgamma(b + 1 + k * r))
        * u**s * abs(y) ** (k * r) / (math.factorial(s) * math.factorial(r))
        for s in range(n + 1)
        for r in range(n - s + 1)
    ]
    return gamma_fn(1 + a + n) / math.factorial(n) * math.fsum(terms)


def q_poly(m: int, params: ParamSet, x: float, y: float) -> float:
    """Dual family ``Q_m(x, y) = P_m(x) sum_{j<=m} Y_j(y)``."""
    m = _check_n(m)
    ysum = math.fsum(konhauser_y(j, params.beta, params.kappa, y) for j in range(m + 1))
    return jacobi_poly(m, params.alpha, params.beta, x) * ysum


def biorthogonality_norm(n: int, params: ParamSet) -> float:
    """Closed-form diagonal entry of the biorthogonality matrix."""
    a, b = params.alpha, params.beta
    return (
        2 ** (1 + a + b) * gamma_fn(1 + a + n) * gamma_fn(1 + b + n)
        / ((2 * n + a + b + 1) * gamma_fn(1 + a + b + n) * math.factorial(n))
    )


def biorthogonality_matrix(nmax: int, params: ParamSet, rule_x: QuadratureRule, rule_y: QuadratureRule) -> np.ndarray:
    """Entries ``int int w(x, y) P_n Q_m`` by exact tensor Gauss quadrature."""
    nmax = _check_n(nmax)
    a, b, k = params.alpha, params.beta, params.kappa
    if rule_x.kind != "GAUSS_JACOBI" or not np.allclose(rule_x.params, (a, b)):
        raise ValueError("rule_x must be Gauss-Jacobi with exponents (alpha, beta)")
    if rule_y.kind != "GAUSS_LAGUERRE" or not np.allclose(rule_y.params, (b,)):
        raise ValueError("rule_y must be generalized Gauss-Laguerre with exponent beta")
    if rule_x.exact_degree < 2 * nmax:
        raise InsufficientDegreeError(f"x rule exact to degree {rule_x.exact_degree}, need {2 * nmax}")
    need_y = k * nmax + nmax
    if rule_y.exact_degree < need_y:
        raise InsufficientDegreeError(f"y rule exact to degree {rule_y.exact_degree}, need {need_y}")

    xs, ys = rule_x.nodes, rule_y.nodes
    P = np.array([[[jk_poly(n, params, x, y) for y in ys] for x in xs] for n in range(nmax + 1)])
    jac = np.array([[jacobi_poly(m, a, b, x) for x in xs] for m in range(nmax + 1)])
    ycum = np.cumsum([[konhauser_y(j, b, k, y) for y in ys] for j in range(nmax + 1)], axis=0)
    W = np.outer(rule_x.weights, rule_y.weights)
    out = np.empty((nmax + 1, nmax + 1))
    for n in range(nmax + 1):
        for m in range(nmax + 1):
            integrand = W * P[n] * np.outer(jac[m], ycum[m])
            out[n, m] = math.fsum(integrand.ravel())
    return out


# --- generating function ----------------------------------------------------

GF_VARIANTS = ("statement", "proof")


def generating_function_sspec(params: ParamSet) -> SSeriesSpec:
    a, b, k = params.alpha, params.beta, params.kappa
    return SSeriesSpec(joint_num=((1 + a + b, 2.0, 1.0),), x_den=((a + 1, 1.0),), y_den=((b + 1, float(k)),))


def generating_function_check(
    params: ParamSet, x: float, y: float, t: float, N: int = 40, variant: str = "statement", tail_tol: float = 1e-10
) -> tuple[float, float]:
    """Truncated LHS ``sum_{n<=N} (1+a+b)_n Gamma(b+1)/(1+a)_n P_n t^n`` and
    the closed S-series RHS.

    ``variant="statement"`` uses the y-argument ``t y^k / ((t-1) k^k)``;
    ``variant="proof"`` uses ``t y^k / (t-1)``. The two coincide for k = 1.
    Neither is asserted equal to the LHS here.
    """
    if variant not in GF_VARIANTS:
        raise ValueError(f"variant must be one of {GF_VARIANTS}")
    if abs(t) > 0.1:
        raise ValueError("generating-function check needs |t| <= 0.1")
    a, b, k = params.alpha, params.beta, params.kappa
    terms = [
        pochhammer(1 + a + b, n) * gamma_fn(b + 1) / pochhammer(1 + a, n) * jk_poly(n, params, x, y) * t**n
        for n in range(N + 1)
    ]
    if N > 0 and abs(terms[-1]) > tail_tol:
        raise ArithmeticError(f"generating-function tail ~{abs(terms[-1]):.3g} exceeds {tail_tol:g}")
    lhs = math.fsum(terms)

    u = t * (x - 1) / (2 * (1 - t) ** 2)
    v = t * y**k / (t - 1)
    if variant == "statement":
        v /= k**k
    pref = (1 - t) ** (-(1 + a + b)) * gamma_fn(1 + a) * gamma_fn(1 + b) / gamma_fn(1 + a + b)
    res = kdf_s_eval(generating_function_sspec(params), u, v)
    if not res.converged:
        raise ArithmeticError("generating-function S-series did not converge")
    return lhs, pref * res.value
