"""Double hypergeometric series: Kampe de Feriet F-series and the S-series.

Both evaluators sum over anti-diagonal blocks ``s + r = d`` and stop once
``tail_window`` consecutive blocks carry absolute mass below
``abs_tol / tail_window``. When an upper parameter is a nonpositive
integer the support is finite and the sum is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .special import SeriesResult, lgamma_sign, nonpositive_integer, pochhammer


@dataclass(frozen=True)
class TruncationPolicy:
    max_s: int = 200
    max_r: int = 200
    abs_tol: float = 1e-14
    tail_window: int = 3

    def __post_init__(self):
        if self.abs_tol <= 0:
            raise ValueError("abs_tol must be positive")
        if self.max_s < 1 or self.max_r < 1 or self.tail_window < 1:
            raise ValueError("max_s, max_r and tail_window must be >= 1")


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class KdFSpec:
    """Parameter groups of ``F^{n,p,q}_{k,l,m}``.

    ``*_joint`` parameters carry the coupled index ``s + r``; ``*_x``
    parameters the x-index ``s``; ``*_y`` parameters the y-index ``r``.
    """

    upper_joint: tuple[float, ...] = ()
    upper_x: tuple[float, ...] = ()
    upper_y: tuple[float, ...] = ()
    lower_joint: tuple[float, ...] = ()
    lower_x: tuple[float, ...] = ()
    lower_y: tuple[float, ...] = ()

    def __post_init__(self):
        for name in ("upper_joint", "upper_x", "upper_y", "lower_joint", "lower_x", "lower_y"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))

    def swapped(self) -> KdFSpec:
        return KdFSpec(self.upper_joint, self.upper_y, self.upper_x, self.lower_joint, self.lower_y, self.lower_x)


@dataclass(frozen=True)
class SSeriesSpec:
    """Gamma-ratio double series with per-index steps.

    Each joint entry is ``(a, theta, phi)`` contributing ``Gamma(a + s*theta + r*phi)``;
    each single-index entry is ``(b, psi)`` contributing ``Gamma(b + s*psi)`` (x group)
    or ``Gamma(b + r*psi)`` (y group).
    """

    joint_num: tuple[tuple[float, float, float], ...] = ()
    x_num: tuple[tuple[float, float], ...] = ()
    y_num: tuple[tuple[float, float], ...] = ()
    joint_den: tuple[tuple[float, float, float], ...] = ()
    x_den: tuple[tuple[float, float], ...] = ()
    y_den: tuple[tuple[float, float], ...] = ()


def _termination(params: Sequence[float]) -> int | None:
    """Smallest ``n`` among parameters equal to ``-n``; None if none terminate."""
    ks = [k for k in (nonpositive_integer(p) for p in params) if k is not None]
    return min(ks) if ks else None


def _log_poch_table(params: Sequence[float], length: int) -> tuple[np.ndarray, np.ndarray]:
    """log|prod_i (p_i)_k| and its sign for k = 0..length-1."""
    logs = np.zeros(length)
    signs = np.ones(length)
    for p in params:
        steps = p + np.arange(length - 1)
        with np.errstate(divide="ignore"):
            lg = np.log(np.abs(steps))
        logs[1:] += np.cumsum(lg)
        signs[1:] *= np.cumprod(np.sign(steps))
    return logs, signs


def _min_opt(*vals: int | None) -> int | None:
    vals = [v for v in vals if v is not None]
    return min(vals) if vals else None


def sum_diagonals(
    block: Callable[[int, int, int], np.ndarray],
    policy: TruncationPolicy,
    s_stop: int | None = None,
    r_stop: int | None = None,
    d_stop: int | None = None,
) -> SeriesResult:
    """Sum a double series block-by-block along ``s + r = d``.

    ``block(d, s_lo, s_hi)`` returns the terms for ``s_lo <= s <= s_hi``,
    ``r = d - s``. ``s_stop``/``r_stop``/``d_stop`` are known exact support
    limits (from terminating parameters).
    """
    s_eff = _min_opt(s_stop, d_stop)
    r_eff = _min_opt(r_stop, d_stop)
    exact = (
        s_eff is not None and r_eff is not None and s_eff <= policy.max_s and r_eff <= policy.max_r
    )
    s_cap = policy.max_s if s_eff is None else min(s_eff, policy.max_s)
    r_cap = policy.max_r if r_eff is None else min(r_eff, policy.max_r)
    d_last = s_cap + r_cap if d_stop is None else min(d_stop, s_cap + r_cap)

    clipped_s = s_eff is None or s_eff > policy.max_s
    clipped_r = r_eff is None or r_eff > policy.max_r

    small_limit = policy.abs_tol / policy.tail_window
    parts: list[float] = []
    masses: list[float] = []
    quiet = 0
    used = 0
    for d in range(d_last + 1):
        if (clipped_s and d > s_cap) or (clipped_r and d > r_cap):
            # a cap would now cut the diagonal short, so the sum is unreliable
            break
        s_lo, s_hi = max(0, d - r_cap), min(d, s_cap)
        if s_lo > s_hi:
            masses.append(0.0)
            continue
        terms = block(d, s_lo, s_hi)
        if not np.all(np.isfinite(terms)):
            return SeriesResult(math.fsum(parts), math.inf, used, False)
        parts.extend(terms.tolist())
        used += terms.size
        mass = float(np.sum(np.abs(terms)))
        masses.append(mass)
        if exact:
            continue
        quiet = quiet + 1 if mass <= small_limit else 0
        if quiet >= policy.tail_window:
            err = math.fsum(masses[-policy.tail_window:])
            return SeriesResult(math.fsum(parts), err, used, True)
    if exact:
        return SeriesResult(math.fsum(parts), 0.0, used, True)
    err = math.fsum(masses[-policy.tail_window:]) if masses else 0.0
    return SeriesResult(math.fsum(parts), err, used, False)


def _check_lower(lower: Sequence[float], reach: int | None, what: str):
    for p in lower:
        k = nonpositive_integer(p)
        if k is not None and (reach is None or reach > k):
            raise ValueError(f"lower {what} parameter {p} hits zero inside the summation support")


def _f_term_direct(spec: KdFSpec, s: int, r: int, x: float, y: float) -> float:
    num = (
        math.prod(pochhammer(a, s + r) for a in spec.upper_joint)
        * math.prod(pochhammer(b, s) for b in spec.upper_x)
        * math.prod(pochhammer(c, r) for c in spec.upper_y)
    )
    den = (
        math.prod(pochhammer(d, s + r) for d in spec.lower_joint)
        * math.prod(pochhammer(f, s) for f in spec.lower_x)
        * math.prod(pochhammer(g, r) for g in spec.lower_y)
    )
    return num / den * x**s * y**r / (math.factorial(s) * math.factorial(r))


def kdf_f_eval(spec: KdFSpec, x: float, y: float, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    """Kampe de Feriet F-series

    ``sum_{s,r} prod(a)_{s+r} prod(b)_s prod(c)_r / (prod(d)_{s+r} prod(f)_s prod(g)_r)
    * x^s y^r / (s! r!)``.
    """
    n_joint = _termination(spec.upper_joint)
    n_x = _termination(spec.upper_x)
    n_y = _termination(spec.upper_y)
    if x == 0:
        n_x = 0
    if y == 0:
        n_y = 0
    s_reach = _min_opt(n_x, n_joint)
    r_reach = _min_opt(n_y, n_joint)
    d_reach = n_joint
    if d_reach is None and s_reach is not None and r_reach is not None:
        d_reach = s_reach + r_reach
    _check_lower(spec.lower_joint, d_reach, "joint")
    _check_lower(spec.lower_x, s_reach, "x")
    _check_lower(spec.lower_y, r_reach, "y")

    small_support = s_reach is not None and r_reach is not None and s_reach <= 170 and r_reach <= 170
    if small_support:
        d_max = s_reach + r_reach if n_joint is None else min(n_joint, s_reach + r_reach)
        terms = [
            _f_term_direct(spec, s, r, x, y)
            for s in range(s_reach + 1)
            for r in range(r_reach + 1)
            if s + r <= d_max
        ]
        return SeriesResult(math.fsum(terms), 0.0, len(terms), True)

    length = policy.max_s + policy.max_r + 2
    lj_u, sj_u = _log_poch_table(spec.upper_joint, length)
    lj_l, sj_l = _log_poch_table(spec.lower_joint, length)
    lx_u, sx_u = _log_poch_table(spec.upper_x, length)
    lx_l, sx_l = _log_poch_table(spec.lower_x, length)
    ly_u, sy_u = _log_poch_table(spec.upper_y, length)
    ly_l, sy_l = _log_poch_table(spec.lower_y, length)
    idx = np.arange(length)
    lfact = np.array([math.lgamma(k + 1) for k in range(length)])
    with np.errstate(divide="ignore"):
        lx = idx * np.log(abs(x)) if x != 0 else np.where(idx == 0, 0.0, -np.inf)
        ly = idx * np.log(abs(y)) if y != 0 else np.where(idx == 0, 0.0, -np.inf)
    LJ, SJ = lj_u - lj_l, sj_u * sj_l
    LX, SX = lx_u - lx_l + lx - lfact, sx_u * sx_l * (np.sign(x) if x < 0 else 1.0) ** idx
    LY, SY = ly_u - ly_l + ly - lfact, sy_u * sy_l * (np.sign(y) if y < 0 else 1.0) ** idx

    def block(d, s_lo, s_hi):
        s = np.arange(s_lo, s_hi + 1)
        r = d - s
        with np.errstate(over="ignore", invalid="ignore"):
            return SJ[d] * SX[s] * SY[r] * np.exp(LJ[d] + LX[s] + LY[r])

    return sum_diagonals(block, policy, s_reach, r_reach, n_joint)


def _s_log_term(spec: SSeriesSpec, s: int, r: int) -> tuple[float, int]:
    logv, sign = 0.0, 1
    for a, th, ph in spec.joint_num:
        lg, sg = lgamma_sign(a + s * th + r * ph)
        logv += lg
        sign *= sg
    for b, ps in spec.x_num:
        lg, sg = lgamma_sign(b + s * ps)
        logv += lg
        sign *= sg
    for b, ps in spec.y_num:
        lg, sg = lgamma_sign(b + r * ps)
        logv += lg
        sign *= sg
    dens = [c + s * de + r * ep for c, de, ep in spec.joint_den]
    dens += [d + s * xi for d, xi in spec.x_den]
    dens += [d + r * xi for d, xi in spec.y_den]
    for z in dens:
        if nonpositive_integer(z, 1e-12) is not None:
            return -math.inf, 0
        lg, sg = lgamma_sign(z)
        logv -= lg
        sign *= sg
    return logv, sign


def kdf_s_eval(spec: SSeriesSpec, x: float, y: float, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    """S-type double series with gamma-function numerators and denominators.

    Gamma ratios are formed as ``exp(sum log|Gamma|)`` with the signs tracked
    separately. A denominator gamma at a pole contributes a zero term; a
    numerator gamma at a pole raises ValueError.
    """
    s_stop = 0 if x == 0 else None
    r_stop = 0 if y == 0 else None
    lx = math.log(abs(x)) if x != 0 else 0.0
    ly = math.log(abs(y)) if y != 0 else 0.0
    sgx = -1 if x < 0 else 1
    sgy = -1 if y < 0 else 1

    def block(d, s_lo, s_hi):
        out = np.empty(s_hi - s_lo + 1)
        for i, s in enumerate(range(s_lo, s_hi + 1)):
            r = d - s
            lg, sg = _s_log_term(spec, s, r)
            if sg == 0:
                out[i] = 0.0
                continue
            lg += s * lx + r * ly - math.lgamma(s + 1) - math.lgamma(r + 1)
            out[i] = sg * sgx**s * sgy**r * math.exp(lg) if lg < 709 else math.inf
        return out

    return sum_diagonals(block, policy, s_stop, r_stop, None)
