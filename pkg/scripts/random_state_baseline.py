"""Averaged PPT eigenvalue and half-cut entropy of random real Gaussian states.

    python scripts/random_state_baseline.py --n 10 --count 100
"""

import argparse

import numpy as np

from adspec.entangle import entropy_half, ppt_avg, random_state


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--count", type=int, default=100)
    args = ap.parse_args()

    V = np.stack([random_state(args.n, s) for s in range(args.count)], axis=1)
    ppt, ent = ppt_avg(V), entropy_half(V)
    print(f"n={args.n}, {args.count} states")
    print(f"ppt_avg   mean {ppt.mean():.4f}  std {ppt.std(ddof=1):.4f}")
    print(f"entropy   mean {ent.mean():.4f}  std {ent.std(ddof=1):.4f}  (maximum {args.n / 2:g})")


if __name__ == "__main__":
    main()
