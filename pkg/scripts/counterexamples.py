"""Concrete points where displayed identities fail, each next to the
independent route that shows it.

1. alternative Jacobi sums inside the bivariate polynomial (y != 0);
2. a lower-triangle biorthogonality entry;
3. the polynomial fractional-integral image with w1 != 0;
4. convergence of the JKML series for |x| > 1;
5. the tail-bound threshold at S = R = 40.
"""

from __future__ import annotations

import math

from jkon.fractional import FracOrderPair, ScaledArgs, frac_integral_corollary
from jkon.jkml import JkmlArgs, jkml_eval, jkml_tail_bound, jkml_term
from jkon.kdf import TruncationPolicy
from jkon.polynomials import JKPolyForm, biorthogonality_matrix, jk_poly
from jkon.quadrature import gauss_jacobi_rule, gauss_laguerre_rule
from jkon.special import ParamSet


def main() -> int:
    p = ParamSet(0.5, 0.25, 2)
    print("[1] forms at n=3, (x, y) = (0.3, 1.1)")
    for form in JKPolyForm:
        print(f"    {form.name:14s} {jk_poly(3, p, 0.3, 1.1, form): .15g}")

    q = ParamSet(0.0, 0.0, 1)
    M = biorthogonality_matrix(1, q, gauss_jacobi_rule(2, 0, 0), gauss_laguerre_rule(3, 0))
    print(f"[2] entry (1,0) at alpha=beta=0, kappa=1: {M[1, 0]: .15g} (diagonal {M[0, 0]:.15g}, {M[1, 1]:.15g})")

    for w1 in (0.0, 0.5):
        num, closed = frac_integral_corollary(1, ParamSet(0.5, 0.5, 1), FracOrderPair(0.5, 0.5), ScaledArgs(w1, 0.8), 0.7, 0.9)
        print(f"[3] w1={w1}: quadrature {num: .15g}  closed {closed: .15g}")

    res = jkml_eval(JkmlArgs(1.0, 1.0, 1, 1.0, 1.0, 1.2, 0.3), TruncationPolicy(max_s=120, max_r=120))
    print(f"[4] x=1.2: converged={res.converged} last estimate {res.value:.6g} +- {res.abs_error_estimate:.3g}")

    args = JkmlArgs(1, 1, 1, 1, 1, 0.5, 0.5)
    part = math.fsum(jkml_term(args, s, r) for s in range(41) for r in range(41))
    full = jkml_eval(args).value
    print(f"[5] true tail beyond S=R=40 {full - part:.4g}; bound at S=R=40 {jkml_tail_bound(args, 40, 40):.4g}")
    print(f"    closed form 2e = {2 * math.e:.17g}, series {full:.17g}")
    return 0


if __name__ == "__main__":
    main()
