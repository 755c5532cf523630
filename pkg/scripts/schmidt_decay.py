"""Schmidt weights of the ground state and of a mid-spectrum state at t_min.

    python scripts/schmidt_decay.py --n 10 --seed 0
"""

import argparse

import numpy as np

from adspec.eigen import eig_full
from adspec.entangle import entropy_half, ppt_avg, schmidt_spectrum
from adspec.gaps import find_min_gap
from adspec.hamiltonian import build_ht
from adspec.sat import generate_single_solution_instance


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--alpha", type=float, default=3.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--precision", type=float, default=1e-3)
    args = ap.parse_args()

    inst = generate_single_solution_instance(args.n, args.alpha, args.seed)
    rec = find_min_gap(inst)
    es = eig_full(build_ht(inst, rec.t_min))
    print(f"t_min {rec.t_min:.6f}  delta {rec.delta:.6f}")
    for label, i in (("ground", 0), ("mid", es.count // 2)):
        psi = es.vectors[:, i]
        lam = schmidt_spectrum(psi)
        # vectors needed so the discarded weight falls below the precision
        tail = np.cumsum(lam[::-1])[::-1]
        needed = int(np.argmax(tail < args.precision)) if np.any(tail < args.precision) else len(lam)
        print(f"{label:>6} i={i:4d}: S={entropy_half(psi):.3f}  ppt_avg={ppt_avg(psi):+.4f}  "
              f"vectors for {args.precision:g}: {needed}")


if __name__ == "__main__":
    main()
