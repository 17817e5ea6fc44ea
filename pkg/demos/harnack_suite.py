"""Seeded discrete Harnack solves: f(0, 0) against (1/9) inf of the top row."""
import argparse

from eulerlab.verify import DEFAULT_SEED, harnack_suite


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--out", default="harnack_suite.jsonl")
    args = ap.parse_args(argv)
    reps = harnack_suite(args.seed)
    with open(args.out, "w") as fh:
        for r in reps:
            fh.write(r.to_json() + "\n")
    worst = min(reps, key=lambda r: r.margin)
    print(f"{sum(r.passed for r in reps)}/{len(reps)} passed; "
          f"worst margin {worst.margin:.4f} ({worst.label})")


if __name__ == "__main__":
    main()
