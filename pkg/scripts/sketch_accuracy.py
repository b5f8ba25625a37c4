"""Relative error of the bilinear cycle sketch versus width t and repetitions R."""

import argparse

import numpy as np

from smoothschatten.estimators import BilinearCycleSketch
from smoothschatten.schatten import schatten_norm


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=4)
    ap.add_argument("--dim", type=int, default=8)
    ap.add_argument("--rank", type=int, default=2)
    ap.add_argument("--rows", type=int, default=100)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    mats = [rng.standard_normal((args.rows, args.rank)) @ rng.standard_normal((args.rank, args.dim))
            for _ in range(args.trials)]
    truth = [schatten_norm(a, args.p) for a in mats]
    print("t,reps,median_rel_err,max_rel_err,space_cells")
    for t in (8, 16, 32, 64):
        for reps in (8, 32, 64):
            errs = []
            for k, (a, f) in enumerate(zip(mats, truth)):
                sk = BilinearCycleSketch(args.dim, args.p, t=t, reps=reps, seed=[args.seed, k])
                for row in a:
                    sk.ingest_row(row)
                errs.append(abs(sk.estimate() / f - 1))
            print(f"{t},{reps},{np.median(errs):.4f},{np.max(errs):.4f},{sk.space_cells()}")


if __name__ == "__main__":
    main()
