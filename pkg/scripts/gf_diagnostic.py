"""Generating-function diagnostic: left side vs both right-side variants.

Writes a CSV (stdout or --out) with one row per (kappa, alpha, beta, x, y, t).
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from jkon.polynomials import GF_VARIANTS, generating_function_check
from jkon.special import ParamSet


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--points", type=int, default=5)
    ap.add_argument("--out")
    ns = ap.parse_args(argv)
    rng = np.random.default_rng(ns.seed)
    fh = open(ns.out, "w", newline="") if ns.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["kappa", "alpha", "beta", "x", "y", "t", "lhs"] + [f"rhs_{v}" for v in GF_VARIANTS]
               + [f"reldev_{v}" for v in GF_VARIANTS])
    for kappa in (1, 2, 3):
        for a, b in ((0.0, 0.0), (0.5, 0.5), (2.0, 1.0)):
            p = ParamSet(a, b, kappa)
            for _ in range(ns.points):
                x, y, t = rng.uniform(-0.9, 0.9), rng.uniform(0.0, 1.5), rng.uniform(-0.1, 0.1)
                rhs = []
                for v in GF_VARIANTS:
                    lhs, r = generating_function_check(p, x, y, t, N=40, variant=v)
                    rhs.append(r)
                devs = [abs(r - lhs) / max(abs(lhs), 1e-300) for r in rhs]
                w.writerow([kappa, a, b] + [format(v, ".17g") for v in (x, y, t, lhs, *rhs, *devs)])
    if ns.out:
        fh.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
