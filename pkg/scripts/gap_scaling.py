"""Gap ensembles per n, their statistics, and the exponential fit of median gap / n.

    python scripts/gap_scaling.py --n 8 10 12 --alpha 3 --count 200
"""

import argparse

from adspec.config import RunConfig
from adspec.gaps import ensemble_stats, scaling_table
from adspec.pipeline import run_gap_ensembles


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[8, 10, 12])
    ap.add_argument("--alpha", type=float, default=3.0)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=0)
    args = ap.parse_args()

    cfg = RunConfig(command="gaps", n=tuple(args.n), alpha=args.alpha, count=args.count,
                    seed=args.seed, jobs=args.jobs)
    cfg.validate()
    records, failures = run_gap_ensembles(cfg)
    stats = [ensemble_stats(records[n]) for n in args.n if len(records[n]) >= 2]

    print(f"{'n':>3} {'count':>5} {'median/n':>10} {'mean/n':>10} {'min/n':>10} {'1/(2sqrtN)':>11} {'s<0.25':>7}")
    for s in stats:
        print(f"{s.n:3d} {s.count:5d} {s.median / s.n:10.5f} {s.mean / s.n:10.5f} "
              f"{s.min / s.n:10.5f} {0.5 / 2 ** (s.n / 2):11.5f} {s.fraction_below(0.25):7.3f}")
    if len(stats) >= 3:
        table = scaling_table(stats)
        print(f"fitted rate {table.rate:.4f} per variable; 1/(2 sqrt N) line has {table.reference_rate:.4f}")
    for seed, n, reason in failures:
        print(f"failed seed {seed} n={n}: {reason}")


if __name__ == "__main__":
    main()
