"""Bivariate Jacobi-Konhauser Mittag-Leffler function

    E(x, y) = sum_{s,r} (g1)_{r+s} (g2)_s x^s y^{kappa r} / (r! s! Gamma(alpha+s) Gamma(beta+kappa r))

with exact summation in the terminating case ``g1 = -n`` and a rigorous
majorant bound on the truncation tail otherwise. For non-terminating
``g1, g2`` the s-direction behaves like a 2F1 in x, so the series only
converges for ``|x| < 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kdf import DEFAULT_POLICY, TruncationPolicy, _min_opt, sum_diagonals
from .special import SeriesResult, nonpositive_integer, pochhammer, rgamma


@dataclass(frozen=True)
class JkmlArgs:
    alpha: float
    beta: float
    kappa: int
    gamma1: float
    gamma2: float
    x: float
    y: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError(f"JKML needs alpha, beta > 0, got ({self.alpha}, {self.beta})")
        if isinstance(self.kappa, bool) or int(self.kappa) != self.kappa or self.kappa < 1:
            raise ValueError(f"kappa must be a positive integer, got {self.kappa!r}")
        object.__setattr__(self, "kappa", int(self.kappa))

    def at(self, x: float, y: float) -> JkmlArgs:
        return JkmlArgs(self.alpha, self.beta, self.kappa, self.gamma1, self.gamma2, x, y)


def _support(args: JkmlArgs) -> tuple[int | None, int | None, int | None]:
    """Exact (s, r, s+r) support limits implied by terminating parameters."""
    n1 = nonpositive_integer(args.gamma1)
    n2 = nonpositive_integer(args.gamma2)
    s_stop = n2
    if args.x == 0:
        s_stop = 0
    r_stop = 0 if args.y == 0 else None
    if n1 is not None:
        s_stop = n1 if s_stop is None else min(s_stop, n1)
        r_stop = n1 if r_stop is None else min(r_stop, n1)
    return s_stop, r_stop, n1


def jkml_term(args: JkmlArgs, s: int, r: int) -> float:
    """Single series term, computed directly from Pochhammer products."""
    k = args.kappa
    return (
        pochhammer(args.gamma1, r + s)
        * pochhammer(args.gamma2, s)
        * args.x**s
        * args.y ** (k * r)
        * rgamma(args.alpha + s)
        * rgamma(args.beta + k * r)
        / (math.factorial(r) * math.factorial(s))
    )


def _log_tables(args: JkmlArgs, length: int):
    k = args.kappa
    idx = np.arange(length)
    lfact = np.array([math.lgamma(i + 1) for i in range(length)])

    def poch(p):
        steps = p + np.arange(length - 1)
        with np.errstate(divide="ignore"):
            lg = np.concatenate([[0.0], np.cumsum(np.log(np.abs(steps)))])
        sg = np.concatenate([[1.0], np.cumprod(np.sign(steps))])
        return lg, sg

    LJ, SJ = poch(args.gamma1)
    l2, s2 = poch(args.gamma2)
    with np.errstate(divide="ignore"):
        lx = idx * math.log(abs(args.x)) if args.x != 0 else np.where(idx == 0, 0.0, -np.inf)
        ly = k * idx * math.log(abs(args.y)) if args.y != 0 else np.where(idx == 0, 0.0, -np.inf)
    lga = np.array([math.lgamma(args.alpha + i) for i in range(length)])
    lgb = np.array([math.lgamma(args.beta + k * i) for i in range(length)])
    LX = l2 + lx - lfact - lga
    SX = s2 * (-1.0 if args.x < 0 else 1.0) ** idx
    LY = ly - lfact - lgb
    SY = (-1.0 if (args.y < 0 and k % 2) else 1.0) ** idx
    return LJ, SJ, LX, SX, LY, SY


def jkml_eval(args: JkmlArgs, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    """Evaluate the JKML double series under ``policy``.

    Terminating cases (``gamma1`` or ``gamma2`` a nonpositive integer with
    a finite support) are summed exactly from Pochhammer products.
    """
    s_stop, r_stop, d_stop = _support(args)
    s_eff, r_eff = _min_opt(s_stop, d_stop), _min_opt(r_stop, d_stop)
    if s_eff is not None and r_eff is not None and s_eff <= 170 and r_eff <= 170:
        d_max = s_eff + r_eff if d_stop is None else min(d_stop, s_eff + r_eff)
        terms = [jkml_term(args, s, r) for s in range(s_eff + 1) for r in range(r_eff + 1) if s + r <= d_max]
        return SeriesResult(math.fsum(terms), 0.0, len(terms), True)

    LJ, SJ, LX, SX, LY, SY = _log_tables(args, policy.max_s + policy.max_r + 2)

    def block(d, s_lo, s_hi):
        s = np.arange(s_lo, s_hi + 1)
        r = d - s
        with np.errstate(over="ignore", invalid="ignore"):
            return SJ[d] * SX[s] * SY[r] * np.exp(LJ[d] + LX[s] + LY[r])

    return sum_diagonals(block, policy, s_stop, r_stop, d_stop)


def jkml(alpha, beta, kappa, gamma1, gamma2, x, y, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Convenience wrapper returning just the value; raises if not converged."""
    res = jkml_eval(JkmlArgs(alpha, beta, kappa, gamma1, gamma2, x, y), policy)
    if not res.converged:
        raise ArithmeticError(f"JKML series did not converge (terms={res.terms_used}, err~{res.abs_error_estimate:g})")
    return res.value


# --- rigorous tail majorant -------------------------------------------------


def _log_poch_abs(g: float, n: int) -> float:
    """log (g)_n for g >= 0 (majorant Pochhammer)."""
    if n == 0:
        return 0.0
    if g == 0:
        return -math.inf
    return math.lgamma(g + n) - math.lgamma(g)


def _majorant_term(g, h, alpha, beta, kappa, X, Yk, s, r) -> float:
    """``(g)_{s+r} (h)_s X^s Yk^r / (s! r! Gamma(alpha+s) Gamma(beta+kappa r))``."""
    lg = _log_poch_abs(g, s + r) + _log_poch_abs(h, s)
    if s:
        lg += s * math.log(X) if X > 0 else -math.inf
    if r:
        lg += r * math.log(Yk) if Yk > 0 else -math.inf
    lg -= math.lgamma(s + 1) + math.lgamma(r + 1) + math.lgamma(alpha + s) + math.lgamma(beta + kappa * r)
    return math.exp(lg) if lg > -745 else 0.0


def _mittag_sum_bound(z: float, beta: float, kappa: int) -> float:
    """Upper bound on ``sum_r z^r / Gamma(beta + kappa r)`` for z >= 0."""
    total, r = 0.0, 0
    t = rgamma(beta)
    while math.isfinite(t) and r < 100000:
        total += t
        # z / (beta + kappa r)^kappa bounds every later term ratio
        q = z / (beta + kappa * r) ** kappa
        if q < 0.5 and t * q / (1 - q) <= 1e-17 * total:
            return total + t * q / (1 - q)
        t *= z / math.prod(beta + kappa * r + j for j in range(kappa))
        r += 1
    return math.inf


def majorant_tail(g, h, alpha, beta, kappa, X, Yk, S, R) -> float:
    """Bound on the sum of majorant terms outside ``{s <= S, r <= R}``.

    ``g = |gamma1|``, ``h = |gamma2|``, ``X = |x|``, ``Yk = |y|^kappa``.
    Region ``s <= S, r > R``: per-s geometric bound in r. Region ``s > S``:
    Cauchy estimate ``(g+s)_r / r! <= (1-rho)^{-(g+s)} rho^{-r}`` decouples
    the indices, then a geometric bound in s; rho is optimised on a grid.
    """
    tail_b = 0.0
    if Yk > 0:
        denom = (beta + kappa * (R + 1)) ** kappa
        for s in range(S + 1):
            first = _majorant_term(g, h, alpha, beta, kappa, X, Yk, s, R + 1)
            if first == 0.0:
                continue
            q = Yk * max(1.0, (g + s + R + 1) / (R + 2)) / denom
            if q >= 1:
                return math.inf
            tail_b += first / (1 - q)

    tail_a = 0.0
    if X > 0 and h > 0:
        best = math.inf
        for rho in np.linspace(0.0, 1.0, 202)[1:-1]:
            z = X / (1 - rho)
            q = z * max(1.0, (g + S + 1) / (S + 2)) * max(1.0, (h + S + 1) / (alpha + S + 1))
            if q >= 1:
                continue
            s1 = S + 1
            la = (
                _log_poch_abs(g, s1)
                + _log_poch_abs(h, s1)
                + s1 * math.log(z)
                - math.lgamma(s1 + 1)
                - math.lgamma(alpha + s1)
            )
            if la == -math.inf:
                best = 0.0
                break
            w = _mittag_sum_bound(Yk / rho, beta, kappa)
            bound = math.exp(la - g * math.log1p(-rho)) * w / (1 - q)
            best = min(best, bound)
        tail_a = best
    return tail_a + tail_b


def jkml_tail_bound(args: JkmlArgs, S: int, R: int) -> float:
    """Rigorous bound on ``|sum of terms with s > S or r > R|``."""
    s_stop, r_stop, d_stop = _support(args)
    if d_stop is not None:
        # finite support: sum the left-over terms exactly in absolute value
        left = [
            abs(jkml_term(args, s, r))
            for s in range(d_stop + 1)
            for r in range(d_stop + 1 - s)
            if (s > S or r > R)
            and (s_stop is None or s <= s_stop)
            and (r_stop is None or r <= r_stop)
        ]
        return math.fsum(left)
    g, h = abs(args.gamma1), abs(args.gamma2)
    X, Yk = abs(args.x), abs(args.y) ** args.kappa
    if s_stop is not None and s_stop <= S:
        X = 0.0
    if r_stop is not None and r_stop <= R:
        Yk = 0.0
    if X == 0.0 and Yk == 0.0:
        return 0.0
    return majorant_tail(g, h, args.alpha, args.beta, args.kappa, X, Yk, S, R)


def choose_truncation(args: JkmlArgs, tol: float, cap: int = 400) -> tuple[int, int]:
    """Smallest square ``S = R`` (doubling search) with tail bound <= tol."""
    s_stop, r_stop, d_stop = _support(args)
    if d_stop is not None:
        return d_stop, d_stop
    S = 8
    while S <= cap:
        if jkml_tail_bound(args, S, S) <= tol:
            return S, S
        S *= 2
    raise ArithmeticError("JKML tail bound did not reach the requested tolerance; |x| may be >= 1")


def jkml_grid(
    alpha: float,
    beta: float,
    kappa: int,
    gamma1: float,
    gamma2: float,
    xs,
    ys,
    tol: float = 1e-15,
) -> np.ndarray:
    """Vectorised JKML on the tensor grid ``xs x ys`` (shape ``len(xs), len(ys)``).

    The truncation rectangle is chosen from the tail bound at the largest
    ``|x|, |y|`` on the grid, then ``E = V_x C V_y^T``.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    probe = JkmlArgs(alpha, beta, kappa, gamma1, gamma2, float(np.max(np.abs(xs), initial=0.0)), float(np.max(np.abs(ys), initial=0.0)))
    S, R = choose_truncation(probe, tol)
    LJ, SJ, LX, SX, LY, SY = _log_tables(probe.at(1.0, 1.0), S + R + 2)
    s = np.arange(S + 1)
    r = np.arange(R + 1)
    d = s[:, None] + r[None, :]
    with np.errstate(over="ignore", invalid="ignore"):
        C = SJ[d] * SX[s][:, None] * SY[r][None, :] * np.exp(LJ[d] + LX[s][:, None] + LY[r][None, :])
    C = np.nan_to_num(C, nan=0.0)
    Vx = xs[:, None] ** s[None, :]
    Vy = ys[:, None] ** (kappa * r)[None, :]
    return Vx @ C @ Vy.T
