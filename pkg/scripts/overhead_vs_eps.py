"""Instance count and accuracy of the sliding-window histogram across (p, eps).

Prints a CSV table; instance counts should scale roughly with 1/beta, i.e.
eps^{-p/2} for p >= 2 and 1/eps below that.

    python scripts/overhead_vs_eps.py --rows 3000 --window 512
"""

import argparse
import sys

from smoothschatten.pipeline import BenchRow, RunConfig, bench_cell
from smoothschatten.streams import STREAMS, synthetic_stream


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", default="1,2,4,6")
    ap.add_argument("--eps", default="0.4,0.2,0.1")
    ap.add_argument("--stream", choices=STREAMS, default="iid-normal")
    ap.add_argument("--rows", type=int, default=2000)
    ap.add_argument("--dim", type=int, default=8)
    ap.add_argument("--window", type=int, default=256)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    data = synthetic_stream(args.stream, args.rows, args.dim, args.seed)
    print(BenchRow.HEADER + ",instances_x_beta")
    for p in map(float, args.p.split(",")):
        for eps in map(float, args.eps.split(",")):
            row = bench_cell(RunConfig(p=p, eps=eps, window=args.window), data)
            print(row.csv() + f",{row.max_instances * row.beta:.3f}")
            sys.stdout.flush()


if __name__ == "__main__":
    main()
