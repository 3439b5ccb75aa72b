"""Scalar special functions and the one-variable polynomial families.

Everything here is a pure function of its arguments. Terminating
hypergeometric sums are evaluated as exact finite sums built from
Pochhammer products, so an upper parameter ``-n`` truncates exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

POLE_TOL = 1e-12
# series termination only on exact integers; a near-integer still has nonzero tail terms
INT_TOL = 0.0


@dataclass(frozen=True)
class ParamSet:
    """Parameter tuple shared by the polynomials, the JKML function and xi."""

    alpha: float
    beta: float
    kappa: int = 1
    gamma1: float = 0.0
    gamma2: float = 0.0

    def __post_init__(self):
        if isinstance(self.kappa, bool) or int(self.kappa) != self.kappa or self.kappa < 1:
            raise ValueError(f"kappa must be a positive integer, got {self.kappa!r}")
        object.__setattr__(self, "kappa", int(self.kappa))
        if not (self.alpha > -1 and self.beta > -1):
            raise ValueError(f"alpha and beta must exceed -1, got ({self.alpha}, {self.beta})")


@dataclass(frozen=True)
class SeriesResult:
    value: float
    abs_error_estimate: float
    terms_used: int
    converged: bool

    def __float__(self):
        return float(self.value)


def nonpositive_integer(z: float, tol: float = INT_TOL) -> int | None:
    """Return ``k`` if ``z`` is within ``tol`` of ``-k`` (k >= 0), else None."""
    k = round(-z)
    if k >= 0 and abs(z + k) <= tol:
        return k
    return None


def gamma_fn(z: float) -> float:
    """Euler's gamma function for real ``z``.

    Raises ValueError at the poles ``0, -1, -2, ...`` and OverflowError
    when the result is not representable as a double.
    """
    if nonpositive_integer(z, POLE_TOL) is not None:
        raise ValueError(f"gamma has a pole at {z}")
    return math.gamma(z)


def rgamma(z: float) -> float:
    """Reciprocal gamma, entire: zero at the poles of gamma."""
    if nonpositive_integer(z, POLE_TOL) is not None:
        return 0.0
    if z > 171.0:
        return math.exp(-math.lgamma(z))
    return 1.0 / math.gamma(z)


def lgamma_sign(z: float) -> tuple[float, int]:
    """``(log|Gamma(z)|, sign Gamma(z))``; raises at poles."""
    if nonpositive_integer(z, POLE_TOL) is not None:
        raise ValueError(f"gamma has a pole at {z}")
    if z > 0:
        return math.lgamma(z), 1
    return math.lgamma(z), -1 if math.floor(z) % 2 else 1


def pochhammer(a: float, n: int) -> float:
    """Rising factorial ``a (a+1) ... (a+n-1)`` by direct product."""
    if n < 0:
        raise ValueError("pochhammer needs n >= 0")
    out = 1.0
    for k in range(n):
        out *= a + k
    return out


def hyp2f1_terminating(n: int, b: float, c: float, z: float) -> float:
    """``2F1(-n, b; c; z)`` as the exact (n+1)-term sum."""
    k = nonpositive_integer(c, POLE_TOL)
    if k is not None and k < n:
        raise ValueError(f"2F1 denominator parameter {c} hits zero before termination")
    terms = [1.0]
    t = 1.0
    for s in range(n):
        t *= (-n + s) * (b + s) * z / ((s + 1) * (c + s))
        terms.append(t)
    return math.fsum(terms)


def hyp2f0_terminating(n: int, b: float, z: float) -> float:
    """``2F0(-n, b; -; z)`` as the exact (n+1)-term sum."""
    terms = [1.0]
    t = 1.0
    for s in range(n):
        t *= (-n + s) * (b + s) * z / (s + 1)
        terms.append(t)
    return math.fsum(terms)


def jacobi_poly(n: int, alpha: float, beta: float, x: float, form: str = "F1") -> float:
    """Jacobi polynomial via one of its four terminating 2F1 forms.

    F2 and F4 are evaluated with the powers distributed,
    ``((x+1)/2)^(n-s) ((x-1)/2)^s``, which removes the apparent
    singularity of ``(x-1)/(x+1)`` at ``x = -1`` (and symmetrically for F4).
    """
    if not (alpha > -1 and beta > -1):
        raise ValueError("alpha and beta must exceed -1")
    form = form.upper()
    if form == "F1":
        return pochhammer(1 + alpha, n) / math.factorial(n) * hyp2f1_terminating(
            n, 1 + alpha + beta + n, 1 + alpha, (1 - x) / 2
        )
    if form == "F3":
        return (-1) ** n * pochhammer(1 + beta, n) / math.factorial(n) * hyp2f1_terminating(
            n, 1 + alpha + beta + n, 1 + beta, (1 + x) / 2
        )
    if form == "F2":
        lead, b, c, u, v = pochhammer(1 + alpha, n), -beta - n, 1 + alpha, (x + 1) / 2, (x - 1) / 2
    elif form == "F4":
        lead, b, c, u, v = pochhammer(1 + beta, n), -alpha - n, 1 + beta, (x - 1) / 2, (x + 1) / 2
    else:
        raise ValueError(f"unknown Jacobi form {form!r}")
    terms = []
    coef = 1.0
    for s in range(n + 1):
        terms.append(coef * u ** (n - s) * v**s)
        coef *= (-n + s) * (b + s) / ((s + 1) * (c + s))
    return lead / math.factorial(n) * math.fsum(terms)


def laguerre_poly(n: int, alpha: float, x: float) -> float:
    """Generalized Laguerre polynomial by the three-term recurrence."""
    if n == 0:
        return 1.0
    prev, cur = 1.0, 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def konhauser_z(n: int, beta: float, kappa: int, x: float) -> float:
    """Konhauser polynomial ``Z_n^beta(x; kappa)`` (degree kappa*n in x)."""
    terms = [
        pochhammer(-n, r) * x ** (kappa * r) / (math.factorial(r) * gamma_fn(beta + 1 + kappa * r))
        for r in range(n + 1)
    ]
    return gamma_fn(1 + beta + kappa * n) / math.factorial(n) * math.fsum(terms)


def konhauser_y_coeffs(n: int, beta: float, kappa: int) -> list[float]:
    """Power-basis coefficients of ``Y_n^beta(y; kappa)``.

    The defining inner sum ``sum_j (-1)^j C(i, j) ((j+beta+1)/kappa)_n`` is an
    i-th forward difference of a polynomial in j, so it equals
    ``(-1)^i i!`` times that polynomial's falling-factorial coefficient.
    Building those coefficients factor by factor with
    ``(j + c) j^(k) = j^(k+1) + (k + c) j^(k)`` keeps every quantity
    positive for beta > -1, avoiding the cancellation of the direct sum.
    """
    a = [1.0]
    for l in range(n):
        c = beta + 1 + kappa * l
        nxt = [0.0] * (len(a) + 1)
        for k, ak in enumerate(a):
            nxt[k + 1] += ak / kappa
            nxt[k] += (k + c) * ak / kappa
        a = nxt
    nf = math.factorial(n)
    return [(-1) ** i * ai / nf for i, ai in enumerate(a)]


def konhauser_y(n: int, beta: float, kappa: int, y: float) -> float:
    """Biorthogonal partner ``Y_n^beta(y; kappa)`` (degree n in y)."""
    return math.fsum(c * y**i for i, c in enumerate(konhauser_y_coeffs(n, beta, kappa)))


def bessel_poly(n: int, a: float, b_param: float, x: float) -> float:
    """Generalized Bessel polynomial ``y_n(x; a, b) = 2F0(-n, a-1+n; -; -x/b)``."""
    if b_param == 0:
        raise ValueError("Bessel polynomial needs b != 0")
    return hyp2f0_terminating(n, a - 1 + n, -x / b_param)
