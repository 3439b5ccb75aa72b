"""Full biorthogonality matrix next to the closed-form diagonal.

Prints one block per (kappa, alpha, beta): entries scaled by the larger of
the two diagonal norms, so the upper triangle reads ~1e-16 and the lower
triangle shows the nonvanishing entries.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from jkon.polynomials import biorthogonality_matrix, biorthogonality_norm
from jkon.quadrature import gauss_jacobi_rule, gauss_laguerre_rule
from jkon.special import ParamSet


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=4)
    ns = ap.parse_args(argv)
    np.set_printoptions(precision=2, linewidth=140)
    for kappa in (1, 2, 3):
        for a, b in ((0.0, 0.0), (0.5, 0.25), (2.0, 1.0)):
            p = ParamSet(a, b, kappa)
            rx = gauss_jacobi_rule(ns.nmax + 1, a, b)
            ry = gauss_laguerre_rule((kappa * ns.nmax + ns.nmax) // 2 + 2, b)
            M = biorthogonality_matrix(ns.nmax, p, rx, ry)
            D = np.array([biorthogonality_norm(n, p) for n in range(ns.nmax + 1)])
            S = np.maximum.outer(D, D)
            diag_dev = np.max(np.abs(np.diag(M) - D) / D)
            print(f"kappa={kappa} alpha={a} beta={b}  max diagonal rel dev {diag_dev:.2e}")
            print(M / S)
            print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
