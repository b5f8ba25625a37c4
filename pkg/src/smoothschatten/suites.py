"""Randomized and grid verification suites behind the ``verify`` command.

Every instance gets its own generator seeded by ``(seed, suite, trial)`` so a
failure can be replayed from the serialized record alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import gram, stack
from .props import (
    check_smooth_step,
    check_trace_monotone,
    eps_bound_gap,
    pinching_gap,
    random_matrix,
    random_pair,
    random_smooth_instance,
)
from .schatten import schatten_norm, schatten_power, smoothness_params

PINCHING_P = (2.0, 2.5, 3.0, 4.0, 6.0)
EPSBOUND_EPS = tuple(0.01 * k for k in range(1, 101))
EPSBOUND_P = (2.1, 2.5, 3.0, 4.0, 6.0, 10.0)
TRACEMONO_Q = (0.25, 0.5, 0.75, 0.9)
SMOOTH_P = (0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0)
SMOOTH_EPS = (0.05, 0.1, 0.2, 0.3, 0.5, 0.8)

_SUITE_IDS = {"pinching": 1, "epsbound": 2, "tracemono": 3, "smooth": 4}


@dataclass
class SuiteReport:
    name: str
    checked: int = 0
    failed: int = 0
    # smallest normalized margin seen (negative means a failure)
    worst_margin: float = float("inf")
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, ok: bool, margin: float, instance=None) -> None:
        self.checked += 1
        self.worst_margin = min(self.worst_margin, margin)
        if not ok:
            self.failed += 1
            if instance is not None and len(self.failures) < 5:
                self.failures.append(instance)

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = "".join(f" {k}={v:.3e}" for k, v in self.notes.items())
        return (f"{self.name}: {status} checked={self.checked} failed={self.failed} "
                f"worst_margin={self.worst_margin:.3e}{extra}")


def _rng(seed: int, suite: str, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, _SUITE_IDS[suite], trial])


def _dump(**arrays):
    return {k: (v.tolist() if isinstance(v, np.ndarray) else v) for k, v in arrays.items()}


def run_pinching(trials: int, seed: int) -> SuiteReport:
    rep = SuiteReport("pinching")
    for trial in range(trials):
        rng = _rng(seed, "pinching", trial)
        x, y = random_pair(rng)
        for p in PINCHING_P:
            total = schatten_power(stack(x, y), p)
            gap = pinching_gap(x, y, p)
            rel = gap / total if total > 0 else gap
            rep.record(gap >= -1e-9 * total, rel,
                       _dump(seed=seed, trial=trial, p=p, x=x, y=y, gap=gap))
    return rep


def run_epsbound() -> SuiteReport:
    rep = SuiteReport("epsbound")
    for p in EPSBOUND_P:
        for eps in EPSBOUND_EPS:
            gap = eps_bound_gap(eps, p)
            rep.record(gap >= -1e-12, gap, _dump(eps=eps, p=p, gap=gap))
    return rep


def random_ordered_psd(rng: np.random.Generator):
    """``(a_big, b_small, C)`` with ``b_small = Y^T Y`` and ``a_big = b + X^T X``."""
    m = int(rng.integers(2, 9))
    x, y = random_pair(rng, cols=m)
    rows_c = int(rng.integers(1, 9))
    c = 10.0 ** rng.uniform(-1.5, 1.5) * random_matrix(
        rng, rows_c, m, rank=1 if rng.random() < 0.25 else None)
    b = gram(y)
    return b + gram(x), b, c


def run_tracemono(trials: int, seed: int) -> SuiteReport:
    rep = SuiteReport("tracemono")
    for trial in range(trials):
        rng = _rng(seed, "tracemono", trial)
        a, b, c = random_ordered_psd(rng)
        for q in TRACEMONO_Q:
            ok, margin = check_trace_monotone(a, b, c, q)
            rep.record(ok, margin, _dump(seed=seed, trial=trial, q=q, a_big=a, b_small=b, c=c))
    return rep


def run_smooth(trials: int, seed: int, p_values=SMOOTH_P) -> SuiteReport:
    """Boundary-scaled smooth-step checks, ``trials`` instances per ``p``.

    ``notes['tightest_<p>']`` keeps the smallest conclusion margin relative to
    ``||[A;C]||`` for ``p >= 2``; it documents slack, it is not asserted.
    """
    rep = SuiteReport("smooth")
    premise_misses = 0
    for pi, p in enumerate(p_values):
        tight = float("inf")
        for trial in range(trials):
            rng = _rng(seed, "smooth", pi * 1_000_000 + trial)
            eps = float(rng.choice(SMOOTH_EPS))
            params = smoothness_params(p, eps)
            x, y, c = random_smooth_instance(rng, p, eps)
            v = check_smooth_step(x, y, c, params)
            premise_misses += not v.premise_holds
            fac = schatten_norm(stack(stack(x, y), c), p)
            rel = v.conclusion_margin / fac if fac > 0 else v.conclusion_margin
            tight = min(tight, rel)
            rep.record(not v.violated, rel,
                       _dump(seed=seed, trial=trial, p=p, eps=eps, x=x, y=y, c=c,
                             premise_margin=v.premise_margin,
                             conclusion_margin=v.conclusion_margin))
        if p >= 2:
            rep.notes[f"tightest_p{p:g}"] = tight
    rep.notes["premise_misses"] = float(premise_misses)
    return rep


def run_suite(name: str, trials: int, seed: int) -> list[SuiteReport]:
    if name == "all":
        return [run_pinching(trials, seed), run_epsbound(),
                run_tracemono(trials, seed), run_smooth(trials, seed)]
    if name == "pinching":
        return [run_pinching(trials, seed)]
    if name == "epsbound":
        return [run_epsbound()]
    if name == "tracemono":
        return [run_tracemono(trials, seed)]
    if name == "smooth":
        return [run_smooth(trials, seed)]
    raise ValueError(f"unknown suite {name!r}")
