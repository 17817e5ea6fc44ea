"""Refinement study for y^2 Lap f - (y/4) f = 0 with exact solution I0(sqrt y).

Writes ``solver_convergence.csv`` (h, max probe error, observed order).
"""
import argparse

import numpy as np
from scipy import special

from eulerlab.operator import Coefficients, HalfPlaneRect
from eulerlab.solver import BoundarySpec, Problem, observed_orders, refinement_study


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", type=int, default=5)
    ap.add_argument("--out", default="solver_convergence.csv")
    args = ap.parse_args(argv)
    co = Coefficients(b2=1.0, c=lambda x, y: -np.asarray(y, float) / 4 + 0 * x)
    exact = lambda x, y: special.i0(np.sqrt(np.asarray(y, float))) + 0 * np.asarray(x, float)
    d = HalfPlaneRect(-1, 1, 1, 17, 17)
    pr = Problem(co, d, BoundarySpec.from_function(exact, d), exact=exact,
                 probes=((0.0, 0.5), (0.5, 0.25), (-0.5, 0.75)))
    study = refinement_study(pr, args.levels)
    orders = np.concatenate([[np.nan], observed_orders(study)])
    rows = np.column_stack([[h for h, _ in study], [e for _, e in study], orders])
    np.savetxt(args.out, rows, delimiter=",", header="h,error,order", comments="")
    for h, e, p in rows:
        print(f"h={h:.5f}  error={e:.3e}  order={p:.2f}")


if __name__ == "__main__":
    main()
