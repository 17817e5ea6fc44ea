"""Bottom data influence under refinement: b2 = 3 forgets it, b2 = 0.5 does not.

At b2 = 2 the first-row stencil weight on the bottom node, 1 - b2/2, is zero,
so the discrepancy vanishes identically.
"""
import argparse

from eulerlab.verify import unspecifiability_pair


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", type=int, default=4)
    args = ap.parse_args(argv)
    for b2 in (0.5, 1.0, 2.0, 3.0):
        r = unspecifiability_pair(b2, args.levels, expect_pass=b2 >= 1)
        disc = ", ".join(f"{d:.2e}" for d in r.measured_constants["discrepancy"])
        print(f"b2={b2:.1f}  discrepancy at (0, 0.5): {disc}  decays={r.passed}")


if __name__ == "__main__":
    main()
