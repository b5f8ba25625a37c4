"""Command-line interface: ``run``, ``verify``, ``bench`` and ``reduce-lp``.

Exit codes: 0 ok, 2 input error, 3 guarantee breach, 4 property failure.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys

from .errors import ParameterError
from .pipeline import (
    REDUCE_HEADER,
    RUN_HEADER,
    BenchRow,
    RunConfig,
    bench_cell,
    format_record,
    format_reduce,
    reduce_lp,
    simulate,
)
from .streams import STREAMS, InputError, read_rows, read_updates, synthetic_stream
from .suites import run_suite

EXIT_OK, EXIT_INPUT, EXIT_BREACH, EXIT_PROPERTY = 0, 2, 3, 4


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


@contextlib.contextmanager
def _open_in(path):
    if path in (None, "-"):
        yield sys.stdin
    else:
        with open(path) as fh:
            yield fh


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def cmd_run(args) -> int:
    cfg = RunConfig(p=args.p, eps=args.eps, window=args.window, estimator=args.estimator,
                    sketch_t=args.sketch_t, sketch_reps=args.sketch_reps, seed=args.seed,
                    oracle_every=args.oracle_every, query_mode=args.query_mode,
                    entry_bound=args.entry_bound)
    breaches = 0
    with _open_in(args.input) as fin, _open_out(args.out) as fout:
        fout.write(RUN_HEADER + "\n")
        rows = (row for _, row in read_rows(fin, cfg.entry_bound))
        try:
            for rec in simulate(cfg, rows):
                fout.write(format_record(rec) + "\n")
                if not rec.in_band and cfg.estimator == "exact":
                    breaches += 1
                    print(f"guarantee breach at step {rec.step}: estimate={rec.estimate!r} "
                          f"exact={rec.exact!r}", file=sys.stderr)
        except InputError as exc:
            print(f"input error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    return EXIT_BREACH if breaches else EXIT_OK


def cmd_verify(args) -> int:
    reports = run_suite(args.suite, args.trials, args.seed)
    failed = False
    for rep in reports:
        print(rep.summary())
        if not rep.ok:
            failed = True
            for inst in rep.failures:
                print(json.dumps({"suite": rep.name, "instance": inst}), file=sys.stderr)
    return EXIT_PROPERTY if failed else EXIT_OK


def cmd_bench(args) -> int:
    data = synthetic_stream(args.stream, args.rows, args.dim, args.seed, rank=args.rank)
    with _open_out(args.out) as fout:
        fout.write(BenchRow.HEADER + "\n")
        for p in _floats(args.p_list):
            for eps in _floats(args.eps_list):
                cfg = RunConfig(p=p, eps=eps, window=args.window, estimator=args.estimator,
                                sketch_t=args.sketch_t, sketch_reps=args.sketch_reps,
                                seed=args.seed)
                fout.write(bench_cell(cfg, data, delta=args.delta).csv() + "\n")
    return EXIT_OK


def cmd_reduce_lp(args) -> int:
    breaches = 0
    with _open_in(args.input) as fin, _open_out(args.out) as fout:
        fout.write(REDUCE_HEADER + "\n")
        try:
            updates = ((i, d) for _, i, d in read_updates(fin))
            for rec in reduce_lp(updates, args.p, args.eps, args.window, args.dim):
                fout.write(format_reduce(rec) + "\n")
                breaches += not rec.in_band
        except (InputError, ParameterError) as exc:
            print(f"input error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    return EXIT_BREACH if breaches else EXIT_OK


def _window_args(sp, window_default=100):
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--eps", type=float, default=0.2)
    sp.add_argument("--window", type=int, default=window_default)


def _sketch_args(sp):
    sp.add_argument("--estimator", choices=("exact", "sketch"), default="exact")
    sp.add_argument("--sketch-t", type=int, default=16)
    sp.add_argument("--sketch-reps", type=int, default=16)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smoothschatten",
        description="Sliding-window Schatten p-norm estimation via smooth histograms.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("run", help="stream CSV rows through the sliding-window estimator")
    _window_args(sp)
    _sketch_args(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--oracle-every", type=int, default=0,
                    help="compare against the exact window value every N rows (0 = off)")
    sp.add_argument("--query-mode", choices=("oldest", "second"), default="oldest")
    sp.add_argument("--entry-bound", type=float, default=1e6)
    sp.add_argument("--input", default="-")
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("verify", help="run the numerical inequality suites")
    sp.add_argument("--suite", choices=("pinching", "epsbound", "tracemono", "smooth", "all"),
                    default="all")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("bench", help="instance-count / accuracy grid over (p, eps)")
    sp.add_argument("--p-list", default="4")
    sp.add_argument("--eps-list", default="0.4,0.2,0.1")
    sp.add_argument("--stream", choices=STREAMS, default="iid-normal")
    sp.add_argument("--rows", type=int, default=2000)
    sp.add_argument("--dim", type=int, default=8)
    sp.add_argument("--rank", type=int, default=2, help="rank of the low-rank stream")
    sp.add_argument("--window", type=int, default=256)
    sp.add_argument("--delta", type=float, default=0.05,
                    help="overall failure probability used for the per-instance budget")
    _sketch_args(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("reduce-lp", help="sliding-window l_{p/2} norm of insertion updates")
    _window_args(sp)
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--input", default="-")
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_reduce_lp)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 1) < 1:
        parser.error("--trials must be >= 1")
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
