"""Sliding-window runs with oracle comparison, benchmarks and the l_{p/2} reduction."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import ParameterError
from .estimators import BilinearCycleSketch, ExactGramSummary
from .histogram import SmoothHistogram
from .schatten import diag_embed_row, lp_norm, smoothness_params
from .streams import WindowOracle

SLACK = 1e-9


@dataclass
class RunConfig:
    p: float = 2.0
    eps: float = 0.2
    window: int = 100
    estimator: str = "exact"
    sketch_t: int = 16
    sketch_reps: int = 16
    seed: int = 0
    oracle_every: int = 0
    query_mode: str = "oldest"
    entry_bound: float = 1e6

    def __post_init__(self):
        if self.window < 1:
            raise ParameterError("window must be >= 1")
        if self.oracle_every < 0:
            raise ParameterError("oracle_every must be >= 0")
        if self.estimator not in ("exact", "sketch"):
            raise ParameterError(f"unknown estimator {self.estimator!r}")
        if self.estimator == "sketch" and (self.p % 2 != 0 or self.p <= 0):
            raise ParameterError("sketch estimator requires an even integer p")
        if self.query_mode not in ("oldest", "second"):
            raise ParameterError(f"unknown query mode {self.query_mode!r}")
        if not self.entry_bound > 0:
            raise ParameterError("entry_bound must be positive")
        smoothness_params(self.p, self.eps)


def make_histogram(cfg: RunConfig, dim: int) -> SmoothHistogram:
    params = smoothness_params(cfg.p, cfg.eps)
    if cfg.estimator == "exact":
        def factory(start):
            return ExactGramSummary(dim, cfg.p)
    else:
        def factory(start):
            return BilinearCycleSketch(dim, cfg.p, cfg.sketch_t, cfg.sketch_reps,
                                       seed=np.random.SeedSequence([cfg.seed, start]))
    return SmoothHistogram(params, cfg.window, factory, cfg.query_mode)


def guarantee_band(alpha: float, mode: str) -> tuple[float, float]:
    """Admissible ``query / exact`` range for a zero-error estimator."""
    if mode == "second":
        return 1.0 - alpha, 1.0
    return 1.0, 1.0 / (1.0 - alpha)


def within_band(query: float, exact: float, alpha: float, mode: str = "oldest",
                slack: float = SLACK) -> bool:
    lo, hi = guarantee_band(alpha, mode)
    return (query >= lo * exact * (1 - slack) - slack * (exact == 0)
            and query <= hi * exact + slack * max(1.0, exact))


@dataclass
class StepRecord:
    step: int
    estimate: float
    instances: int
    space_cells: int
    exact: float | None = None
    ratio: float | None = None
    in_band: bool = True


def simulate(cfg: RunConfig, rows: Iterable) -> Iterator[StepRecord]:
    """Push ``rows`` through a histogram, yielding one record per row."""
    hist = None
    oracle = WindowOracle(cfg.window, cfg.p) if cfg.oracle_every else None
    for row in rows:
        row = np.asarray(row, dtype=np.float64)
        if hist is None:
            hist = make_histogram(cfg, row.shape[0])
        hist.push_row(row)
        est = hist.query()
        rec = StepRecord(hist.position, est, hist.instance_count(), hist.space_cells())
        if oracle is not None:
            oracle.push(row)
            if hist.position % cfg.oracle_every == 0:
                exact = oracle.value()
                rec.exact = exact
                rec.ratio = est / exact if exact > 0 else (1.0 if est == 0 else math.inf)
                rec.in_band = within_band(est, exact, hist.params.alpha, cfg.query_mode)
        yield rec


def _fmt(v) -> str:
    return "" if v is None else repr(float(v))


RUN_HEADER = "step,estimate,instances,space_cells,exact,ratio"


def format_record(rec: StepRecord) -> str:
    return (f"{rec.step},{_fmt(rec.estimate)},{rec.instances},{rec.space_cells},"
            f"{_fmt(rec.exact)},{_fmt(rec.ratio)}")


@dataclass
class BenchRow:
    p: float
    eps: float
    beta: float
    max_instances: int
    mean_instances: float
    max_ratio: float
    space_cells_peak: int
    count_bound: float
    instance_delta: float

    HEADER = ("p,eps,beta,max_instances,mean_instances,max_ratio,"
              "space_cells_peak,count_bound,instance_delta")

    def csv(self) -> str:
        return ",".join([repr(self.p), repr(self.eps), repr(self.beta),
                         str(self.max_instances), repr(self.mean_instances),
                         repr(self.max_ratio), str(self.space_cells_peak),
                         repr(self.count_bound), repr(self.instance_delta)])


def instance_count_bound(beta: float, v_max: float, v_min: float, c: float = 4.0) -> float:
    """Envelope ``c / beta * ln(v_max / v_min) + 2`` on live instances."""
    if not 0 < v_min < v_max:
        return 2.0
    return c / beta * math.log(v_max / v_min) + 2.0


def bench_cell(cfg: RunConfig, data: np.ndarray, delta: float = 0.05) -> BenchRow:
    """Run one (p, eps) cell with the oracle on every step."""
    params = smoothness_params(cfg.p, cfg.eps)
    hist = make_histogram(cfg, data.shape[1])
    oracle = WindowOracle(cfg.window, cfg.p)
    counts, max_ratio, peak = [], 0.0, 0
    v_min, v_max = math.inf, 0.0
    for row in data:
        hist.push_row(row)
        oracle.push(row)
        counts.append(hist.instance_count())
        peak = max(peak, hist.space_cells())
        nz = [v for v in hist.values() if v > 0]
        if nz:
            v_min, v_max = min(v_min, min(nz)), max(v_max, max(nz))
        exact = oracle.value()
        if exact > 0:
            max_ratio = max(max_ratio, hist.query() / exact)
    n = cfg.window
    log_n = math.log2(n) if n > 1 else 1.0
    return BenchRow(
        p=float(cfg.p), eps=float(cfg.eps), beta=params.beta,
        max_instances=max(counts) if counts else 0,
        mean_instances=float(np.mean(counts)) if counts else 0.0,
        max_ratio=max_ratio, space_cells_peak=peak,
        count_bound=instance_count_bound(params.beta, v_max, v_min),
        # per-instance failure budget delta * beta / (n log n)
        instance_delta=delta * params.beta / (n * log_n),
    )


@dataclass
class ReduceRecord:
    step: int
    query: float
    direct_lp: float
    in_band: bool

    @property
    def query_sq(self) -> float:
        return self.query ** 2


REDUCE_HEADER = "step,query,query_sq,direct_lp,in_band"


def reduce_lp(updates: Iterable[tuple[int, float]], p: float, eps: float,
              window: int, dim: int) -> Iterator[ReduceRecord]:
    """Sliding-window ``||x||_{p/2}`` through the diagonal Schatten embedding.

    Each insertion ``(i, delta)`` becomes the row ``sqrt(delta) e_i``; the
    squared histogram answer is compared with ``||x_window||_{p/2}`` computed
    straight from the buffered updates.
    """
    cfg = RunConfig(p=p, eps=eps, window=window)
    hist = make_histogram(cfg, dim)
    buf: deque = deque(maxlen=window)
    lo, hi = guarantee_band(hist.params.alpha, "oldest")
    for index, delta in updates:
        hist.push_row(diag_embed_row(index, delta, dim))
        buf.append((index, delta))
        x = np.zeros(dim)
        for i, d in buf:
            x[i - 1] += d
        direct = lp_norm(x, p / 2.0)
        q = hist.query()
        ok = (q * q >= lo * direct * (1 - SLACK)
              and q * q <= hi * hi * direct + SLACK * max(1.0, direct))
        yield ReduceRecord(hist.position, q, direct, ok)


def format_reduce(rec: ReduceRecord) -> str:
    return (f"{rec.step},{_fmt(rec.query)},{_fmt(rec.query_sq)},"
            f"{_fmt(rec.direct_lp)},{int(rec.in_band)}")
