"""Runnable verification suites, one per acceptance criterion.

Each suite returns a :class:`SuiteReport` built from named checks. A check
measures a maximum deviation against a tolerance; diagnostic checks are
reported but never fail their suite. Randomised draws come from a seeded
numpy Generator so a fixed seed reproduces a run exactly.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Mapping

import numpy as np

from .fractional import (
    FracOrderPair,
    ScaledArgs,
    frac_derivative_corollary,
    frac_derivative_image_jkml,
    frac_integral_corollary,
    frac_integral_image_jkml,
    termwise_derivative_check,
)
from .jkml import JkmlArgs, jkml_eval
from .polynomials import (
    GF_VARIANTS,
    JKPolyForm,
    biorthogonality_matrix,
    biorthogonality_norm,
    generating_function_check,
    jk_poly,
    jk_poly_term_scale,
)
from .quadrature import gauss_jacobi_rule, gauss_laguerre_rule
from .special import ParamSet, gamma_fn, konhauser_y, konhauser_z
from .xi import (
    BoxDomain,
    XiSpec,
    laplace2_numeric,
    laplace_jkml_closed,
    xi_apply_kernel,
    xi_apply_series,
    xi_bound_constant,
    xi_composition_check,
    xi_exp_image,
    xi_exp_series,
    xi_power_image,
)
from .fractional import rl_double_integral

CORE_FORMS = (JKPolyForm.EXPLICIT_JAC, JKPolyForm.Z_FORM, JKPolyForm.KDF_FORM, JKPolyForm.ML_FORM)
AB_GRID = [(a, b) for a in (-0.5, 0.5, 2.0) for b in (-0.5, 0.5, 2.0)]


@dataclass
class CheckResult:
    name: str
    max_deviation: float
    tolerance: float
    diagnostic: bool = False
    notes: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.max_deviation <= self.tolerance)


@dataclass
class SuiteReport:
    name: str
    checks: list[CheckResult] = field(default_factory=list)
    notes: str = ""

    @property
    def hard_checks(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.diagnostic]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.hard_checks)

    @property
    def max_deviation(self) -> float:
        hard = self.hard_checks or self.checks
        return max((c.max_deviation for c in hard), default=0.0)

    @property
    def tolerance(self) -> float:
        hard = self.hard_checks or self.checks
        return min((c.tolerance for c in hard), default=0.0)

    @property
    def diagnostic(self) -> bool:
        return bool(self.checks) and not self.hard_checks

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "notes": self.notes,
            "checks": [dict(asdict(c), passed=c.passed) for c in self.checks],
        }


def rel_dev(a: float, b: float, scale: float | None = None) -> float:
    s = max(abs(a), abs(b)) if scale is None else scale
    if s == 0:
        return 0.0 if a == b else math.inf
    return abs(a - b) / s


class _Tol:
    """Tolerance lookup with overrides keyed ``suite.check`` or ``suite``."""

    def __init__(self, suite: str, overrides: Mapping[str, float] | None):
        self.suite = suite
        self.overrides = dict(overrides or {})

    def __call__(self, check: str, default: float) -> float:
        for key in (f"{self.suite}.{check}", self.suite):
            if key in self.overrides:
                return float(self.overrides[key])
        return default


# --- suites --------------------------------------------------------------


def suite_representation_equivalence(rng: np.random.Generator, tol: _Tol) -> SuiteReport:
    core = alt = 0.0
    for kappa in (1, 2, 3):
        for a, b in AB_GRID:
            p = ParamSet(a, b, kappa)
            for _ in range(20):
                x, y = rng.uniform(-0.99, 0.99), rng.uniform(0.0, 3.0)
                for n in range(9):
                    scale = jk_poly_term_scale(n, p, x, y)
                    ref = jk_poly(n, p, x, y, JKPolyForm.EXPLICIT_JAC)
                    for form in JKPolyForm:
                        d = rel_dev(jk_poly(n, p, x, y, form), ref, scale)
                        if form in CORE_FORMS:
                            core = max(core, d)
                        else:
                            alt = max(alt, d)
    return SuiteReport(
        "representation_equivalence",
        [
            CheckResult("all_forms", max(core, alt), tol("all_forms", 1e-10)),
            CheckResult("core_forms", core, tol("core_forms", 1e-10), notes="JAC, Z, KDF, ML"),
        ],
        notes="deviation relative to the absolute term sum of the reference double sum",
    )


def suite_biorthogonality(rng: np.random.Generator, tol: _Tol) -> SuiteReport:
    nmax = 6
    diag = off = upper = 0.0
    for kappa in (1, 2, 3):
        for a, b in ((0.0, 0.0), (0.5, 0.25), (2.0, 1.0)):
            p = ParamSet(a, b, kappa)
            rx = gauss_jacobi_rule(nmax + 1, a, b)
            ry = gauss_laguerre_rule((kappa * nmax + nmax) // 2 + 2, b)
            M = biorthogonality_matrix(nmax, p, rx, ry)
            norms = [biorthogonality_norm(n, p) for n in range(nmax + 1)]
            for n in range(nmax + 1):
                diag = max(diag, rel_dev(M[n, n], norms[n], abs(norms[n])))
                for m in range(nmax + 1):
                    if n != m:
                        d = abs(M[n, m]) / max(norms[n], norms[m])
                        off = max(off, d)
                        if m > n:
                            upper = max(upper, d)
    return SuiteReport(
        "biorthogonality",
        [
            CheckResult("diagonal", diag, tol("diagonal", 1e-10)),
            CheckResult("off_diagonal", off, tol("off_diagonal", 1e-9)),
            CheckResult("upper_triangle", upper, tol("upper_triangle", 1e-9), notes="entries with m > n"),
        ],
    )


def suite_konhauser_pair(rng: np.random.Generator, tol: _Tol) -> SuiteReport:
    worst = 0.0
    for kappa in (1, 2, 3):
        for b in (-0.5, 0.0, 0.5, 2.0):
            rule = gauss_laguerre_rule((kappa * 5 + 5) // 2 + 2, b)
            Z = [np.array([konhauser_z(n, b, kappa, y) for y in rule.nodes]) for n in range(6)]
            Y = [np.array([konhauser_y(m, b, kappa, y) for y in rule.nodes]) for m in range(6)]
            D = [gamma_fn(kappa * n + b + 1) / math.factorial(n) for n in range(6)]
            for n in range(6):
                for m in range(6):
                    v = rule.integrate(Z[n] * Y[m])
                    target = D[n] if n == m else 0.0
                    worst = max(worst, abs(v - target) / max(D[n], D[m]))
    return SuiteReport(
        "konhauser_pair",
        [CheckResult("pairing", worst, tol("pairing", 1e-10))],
        notes="deviation relative to the larger of the two diagonal norms",
    )


def suite_rel_bridge(rng: np.random.Generator, tol: _Tol) -> SuiteReport:
    worst = 0.0
    for kappa in (1, 2, 3):
        for a, b in AB_GRID:
            p = ParamSet(a, b, kappa)
            for _ in range(20):
                x, y = rng.uniform(-0.99, 0.99), rng.uniform(0.0, 3.0)
                for n in range(9):
                    args = JkmlArgs(a + 1, b + 1, kappa, -n, 1 + a + b + n, (1 - x) / 2, y)
                    via_ml = gamma_fn(1 + a + n) / math.factorial(n) * jkml_eval(args).value
                    ref = jk_poly(n, p, x, y)
                    worst = max(worst, rel_dev(via_ml, ref, jk_poly_term_scale(n, p, x, y)))
    return SuiteReport("rel_bridge", [CheckResult("jk_poly_vs_jkml", worst, tol("jk_poly_vs_jkml", 1e-12))])


def suite_frac_integral(rng: np.random.Generator, tol: _Tol) -> SuiteReport:
    x, y = 0.7, 0.9
    ident = coro = 0.0
    a, b = 0.5, 0.5
    for kappa in (1, 2, 3):
        for n in range(5):
            for mu in (0.25, 0.5, 0.75):
                for zeta in (0.25, 0.5, 0.75):
                    orders = FracOrderPair(mu, zeta)
                    w1, w2 = rng.uniform(0.2, 1.0), rng.uniform(0.2, 1.0)
                    scales = ScaledArgs(w1, w2)
                    args = JkmlArgs(a + 1, b + 1, kappa, -n, 1 + a + b + n, 0.0, 0.0)
                    num, closed = frac_integral_image_jkml(args, orders, scales, x, y)
                    ident = max(ident, rel_dev(num, closed))
                    num, closed = frac_integral_corollary(n, ParamSet(a, b, kappa), orders, scales, x, y)
                    coro = max(coro, rel_dev(num, closed))
    return SuiteReport(
        "frac_integral",
        [
            CheckResult("jkml_image", ident, tol("jkml_image", 1e-8)),
            CheckResult("polynomial_corollary", coro, tol("polynomial_corollary", 1e-8)),
        ],
    )


def suite_frac_derivative(rng: np.random.Generator, tol: _Tol) -> SuiteReport:
    x, y = 0.7, 0.9
    term = fd = coro = 0.0
    for kappa in (1, 2, 3):
        for n in range(4):
            for mu in (0.25, 0.5, 0.75):
                zeta = 1 - mu
                orders = FracOrderPair(mu, zeta)
                scales = ScaledArgs(rng.uniform(0.2, 1.0), rng.uniform(0.2, 1.0))
                a, b = 0.5, 1.5
                args = JkmlArgs(a + 1, b + 1, kappa, -n, 1 + a + b + n, 0.0, 0.0)
                term = max(term, termwise_derivative_check(args, orders, scales, x, y))
                nt = JkmlArgs(a + 1, b + 1, kappa, rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0), 0.0, 0.0)
                term = max(term, termwise_derivative_check(nt, orders, scales, x, y))
                if kappa == 1 or n <= 2:
                    num, closed = frac_derivative_image_jkml(args, orders, scales, x, y)
                    fd = max(fd, rel_dev(num, closed))
                if kappa == 1 and n <= 2:
                    num, closed = frac_derivative_corollary(n, ParamSet(a, b, kappa), orders, scales, x, y)
                    coro = max(coro, rel_dev(num, closed))
    return SuiteReport(
        "frac_derivative",
        [
            CheckResult("termwise", term, tol("termwise", 1e-10)),
            CheckResult("finite_difference", fd, tol("finite_difference", 1e-4)),
            CheckResult(
                "polynomial_corollary", coro, tol("polynomial_corollary", 1e-4), diagnostic=True,
                notes="prefactor Gamma(1+a+n)/Gamma(1+a+n-mu); recorded only",
            ),
        ],
    )


def suite_laplace(rng: np.random.Generator, tol: _Tol) -> SuiteReport:
    worst = 0.0
    for kappa in (1, 2, 3):
        for a, b in ((0.0, 0.0), (0.5, 1.5), (2.0, 0.25)):
            p = ParamSet(a, b, kappa)
            for n in range(4):
                p1, p2 = rng.uniform(0.8, 2.5), rng.uniform(0.8, 2.5)
                w1, w2 = rng.uniform(-1.0, 1.0), rng.uniform(-0.5, 0.5) * p2
                closed = laplace_jkml_closed(p, w1, w2, p1, p2, "polynomial", n)

                def g(X, Y, n=n, p=p, w1=w1, w2=w2):
                    return np.vectorize(lambda s, t: jk_poly(n, p, 1 - 2 * w1 * s, w2 * t, check_domain=False))(X, Y)

                numeric = laplace2_numeric(g, p1, p2, a, b, (kappa * n) // 2 + 2)
                worst = max(worst, rel_dev(numeric, closed))
    return SuiteReport("laplace", [CheckResult("polynomial_corollary", worst, tol("polynomial_corollary", 1e-8))])


def _random_poly(rng: np.random.Generator, deg: int, b: float, d: float):
    C = rng.normal(size=(deg + 1, deg + 1))
    C[np.add.outer(np.arange(deg + 1), np.arange(deg + 1)) > deg] = 0.0

    def f(T, U):
        return np.polynomial.polynomial.polyval2d(T - b, U - d, C)

    return f


def suite_xi(rng: np.random.Generator, tol: _Tol) -> SuiteReport:
    b0, d0, x, y = 0.1, 0.2, 0.9, 1.1
    # reduction to the RL double integral
    red = 0.0
    for alpha, beta in ((0.5, 0.5), (1.3, 0.7), (2.0, 1.0)):
        spec = XiSpec(ParamSet(alpha, beta, 2, 0.0, 0.0), rng.uniform(-1, 1), rng.uniform(-1, 1), b0, d0)
        for deg in range(7):
            f = _random_poly(rng, deg, b0, d0)
            ser = xi_apply_series(spec, f, x, y).value
            rl = rl_double_integral(f, FracOrderPair(alpha, beta, b0, d0), x, y, 8)
            red = max(red, rel_dev(ser, rl))
    # power image against the series form and the kernel form
    pser = pker = 0.0
    for n in range(4):
        for kappa in (1, 2, 3):
            for mu in (0.0, 0.5, 1.0):
                for zeta in (0.0, 0.5, 1.0):
                    P = ParamSet(0.8, 1.2, kappa, -n, rng.uniform(0.5, 2.0))
                    spec = XiSpec(P, rng.uniform(-1, 1), rng.uniform(-1, 1), b0, d0)
                    img = xi_power_image(spec, mu, zeta, x, y)
                    one = lambda T, U: np.ones_like(T)  # noqa: E731
                    ser = xi_apply_series(spec, one, x, y, nquad=4, lower_powers=(mu, zeta)).value
                    ker = xi_apply_kernel(spec, one, x, y, nquad=8, lower_powers=(mu, zeta))
                    pser = max(pser, rel_dev(img, ser))
                    pker = max(pker, rel_dev(img, ker))
    # exponential image against the termwise series oracle
    ex = 0.0
    for n in range(4):
        for kappa in (1, 2, 3):
            delta, sigma = rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)
            w1, w2 = rng.uniform(-0.5, 0.5) * delta, rng.uniform(-0.5, 0.5) * sigma
            spec = XiSpec(ParamSet(0.7, 1.4, kappa, -n, rng.uniform(0.5, 2.0)), w1, w2)
            ex = max(ex, rel_dev(xi_exp_image(spec, delta, sigma, 0.3, -0.2), xi_exp_series(spec, delta, sigma, 0.3, -0.2).value))
    # boundedness on the unit box
    box = BoxDomain(1.0, 0.0, 1.0, 0.0)
    spec = XiSpec(ParamSet(0.6, 1.3, 2, 0.75, 1.25), 0.5, -0.7, 0.0, 0.0)
    K = xi_bound_constant(spec, box)
    gl = gauss_jacobi_rule(10, 0.0, 0.0)
    nodes, weights = (gl.nodes + 1) / 2, gl.weights / 2
    excess = -math.inf
    for _ in range(10):
        c = rng.normal(size=4)
        f = lambda T, U, c=c: c[0] + c[1] * np.sin(3 * T + c[2]) * np.cos(2 * U) + c[3] * T * U  # noqa: E731
        Ff = f(*np.meshgrid(nodes, nodes, indexing="ij"))
        norm_f = float(np.sum(np.outer(weights, weights) * np.abs(Ff)))
        Xi = np.array([[xi_apply_kernel(spec, f, xx, yy, nquad=16) for yy in nodes] for xx in nodes])
        norm_xi = float(np.sum(np.outer(weights, weights) * np.abs(Xi)))
        excess = max(excess, norm_xi - K * norm_f)
    # compositions
    comp = 0.0
    spec = XiSpec(ParamSet(0.8, 1.2, 2, -1, 1.5), 0.6, -0.4, b0, d0)
    for kind in ("integral", "derivative"):
        for mono in ((1.0, 1.0), (2.0, 0.5), (0.5, 3.0)):
            for mu, zeta in ((0.5, 0.5), (0.25, 0.75)):
                vals = xi_composition_check(spec, FracOrderPair(mu, zeta, b0, d0), mono, x, y, kind)
                scale = max(abs(v) for v in vals)
                comp = max(comp, (max(vals) - min(vals)) / scale)
    return SuiteReport(
        "xi_operator",
        [
            CheckResult("reduction", red, tol("reduction", 1e-12)),
            CheckResult("power_image_series", pser, tol("power_image_series", 1e-10)),
            CheckResult("power_image_kernel", pker, tol("power_image_kernel", 1e-8)),
            CheckResult("exp_image", ex, tol("exp_image", 1e-8)),
            CheckResult("boundedness", max(excess, 0.0), tol("boundedness", 1e-9), notes=f"K = {K:.6g}"),
            CheckResult("composition", comp, tol("composition", 1e-9)),
        ],
    )


def _jacobi_moment(a: float, b: float) -> float:
    """``int (1-x)^a (1+x)^b dx``; direct gammas keep ulp-level accuracy
    where exponentiated log-gammas would not."""
    return 2 ** (a + b + 1) * math.gamma(a + 1) * math.gamma(b + 1) / math.gamma(a + b + 2)


def suite_quadrature(rng: np.random.Generator, tol: _Tol) -> SuiteReport:
    jac = lag = 0.0
    for a, b in ((0.0, 0.0), (-0.5, 0.5), (0.5, 0.25), (2.0, 1.0), (-0.75, -0.25)):
        for n in (1, 2, 5, 10, 20, 40, 64):
            rule = gauss_jacobi_rule(n, a, b)
            for k in range(rule.exact_degree + 1):
                # (1-x)^k and (1+x)^k against (1-x)^a (1+x)^b
                m1 = _jacobi_moment(a + k, b)
                m2 = _jacobi_moment(a, b + k)
                jac = max(jac, rel_dev(rule.integrate((1 - rule.nodes) ** k), m1, m1))
                jac = max(jac, rel_dev(rule.integrate((1 + rule.nodes) ** k), m2, m2))
    for b in (0.0, -0.5, 0.5, 2.0):
        for n in (1, 2, 5, 10, 20, 40, 64):
            rule = gauss_laguerre_rule(n, b)
            for k in range(rule.exact_degree + 1):
                m = math.gamma(b + k + 1)
                lag = max(lag, rel_dev(rule.integrate(rule.nodes**k), m, m))
    return SuiteReport(
        "quadrature",
        [
            CheckResult("gauss_jacobi", jac, tol("gauss_jacobi", 1e-13)),
            CheckResult("gauss_laguerre", lag, tol("gauss_laguerre", 1e-13)),
        ],
    )


def suite_generating_function(rng: np.random.Generator, tol: _Tol) -> SuiteReport:
    zero = red = 0.0
    full = {v: 0.0 for v in GF_VARIANTS}
    for kappa in (1, 2, 3):
        for a, b in ((0.0, 0.0), (0.5, 0.5), (2.0, 1.0)):
            p = ParamSet(a, b, kappa)
            for v in GF_VARIANTS:
                lhs, rhs = generating_function_check(p, rng.uniform(-0.9, 0.9), rng.uniform(0, 2), 0.0, 0, v)
                zero = max(zero, rel_dev(lhs, 1.0), rel_dev(rhs, 1.0))
                lhs, rhs = generating_function_check(p, 1.0, 0.0, 0.05, 40, v)
                closed = (1 - 0.05) ** (-(1 + a + b))
                red = max(red, rel_dev(lhs, closed), rel_dev(rhs, closed))
                for t in (0.02, -0.05, 0.1):
                    lhs, rhs = generating_function_check(p, rng.uniform(-0.9, 0.9), rng.uniform(0, 2), t, 60, v)
                    full[v] = max(full[v], rel_dev(lhs, rhs))
    return SuiteReport(
        "generating_function",
        [
            CheckResult("t_zero", zero, tol("t_zero", 1e-10)),
            CheckResult("x1_y0_reduction", red, tol("x1_y0_reduction", 1e-10)),
        ]
        + [
            CheckResult(f"full_identity_{v}", full[v], tol(f"full_identity_{v}", 1e-10), diagnostic=True)
            for v in GF_VARIANTS
        ],
        notes="full identity is a diagnostic; 'statement' carries the k^k factor, 'proof' omits it",
    )


SUITES: dict[str, Callable[[np.random.Generator, _Tol], SuiteReport]] = {
    "representation_equivalence": suite_representation_equivalence,
    "biorthogonality": suite_biorthogonality,
    "konhauser_pair": suite_konhauser_pair,
    "rel_bridge": suite_rel_bridge,
    "frac_integral": suite_frac_integral,
    "frac_derivative": suite_frac_derivative,
    "laplace": suite_laplace,
    "xi_operator": suite_xi,
    "quadrature": suite_quadrature,
    "generating_function": suite_generating_function,
}


def run_suite(name: str, seed: int = 0, tolerance_overrides: Mapping[str, float] | None = None) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    # each suite gets its own stream so running one suite alone reproduces it
    rng = np.random.default_rng([seed, list(SUITES).index(name)])
    return SUITES[name](rng, _Tol(name, tolerance_overrides))


def run_all(seed: int = 0, tolerance_overrides: Mapping[str, float] | None = None, names=None) -> list[SuiteReport]:
    return [run_suite(n, seed, tolerance_overrides) for n in (names or SUITES)]
