"""Smooth histogram over a count-based sliding window.

The histogram runs one estimator per retained stream suffix.  After each row
it drops the middle instance of any consecutive triple whose outer values are
within a ``(1 - beta)`` factor, and keeps at most one instance that starts at
or before the window boundary.  With a smooth ``f`` the oldest instance then
over-estimates the window value by at most ``1 / (1 - alpha)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .estimators import OnePassEstimator, estimate_all
from .errors import DimensionError, ParameterError
from .schatten import SmoothnessParams

EstimatorFactory = Callable[[int], OnePassEstimator]


@dataclass
class HistogramInstance:
    start_index: int
    estimator: OnePassEstimator
    last_value: float = 0.0


class SmoothHistogram:
    """Sliding-window wrapper around a one-pass estimator.

    ``factory(start_index)`` must return a fresh estimator; randomized
    estimators should derive their seed from ``start_index`` so runs are
    reproducible.  ``query_mode="oldest"`` reports the straddling instance (an
    over-estimate), ``"second"`` the next one (an under-estimate).
    """

    def __init__(self, params: SmoothnessParams, window: int,
                 factory: EstimatorFactory, query_mode: str = "oldest"):
        if window < 1:
            raise ParameterError(f"window must be >= 1, got {window}")
        if query_mode not in ("oldest", "second"):
            raise ParameterError(f"unknown query mode {query_mode!r}")
        self.params = params
        self.window = int(window)
        self.factory = factory
        self.query_mode = query_mode
        self.instances: list[HistogramInstance] = []
        self.position = 0
        self.dim: int | None = None

    def push_row(self, r) -> None:
        r = np.asarray(r, dtype=np.float64)
        if r.ndim != 1:
            raise DimensionError(f"expected a row vector, got shape {r.shape}")
        if self.dim is None:
            self.dim = r.shape[0]
        elif r.shape[0] != self.dim:
            raise DimensionError(f"row of length {r.shape[0]}, expected {self.dim}")
        self.position += 1
        self.instances.append(HistogramInstance(self.position, self.factory(self.position)))
        for inst in self.instances:
            inst.estimator.ingest_row(r)
        values = estimate_all([inst.estimator for inst in self.instances])
        for inst, v in zip(self.instances, values):
            inst.last_value = v
        self.prune()
        self.expire()

    def prune(self) -> None:
        keep = 1.0 - self.params.beta
        inst = self.instances
        i = 0
        while i + 2 < len(inst):
            if keep * inst[i].last_value <= inst[i + 2].last_value:
                del inst[i + 1]
                # removal can only create a new qualifying triple one step back
                i = max(i - 1, 0)
            else:
                i += 1

    def expire(self) -> None:
        boundary = self.position - self.window + 1
        straddlers = sum(1 for inst in self.instances if inst.start_index <= boundary)
        if straddlers > 1:
            del self.instances[:straddlers - 1]

    def query(self) -> float:
        if not self.instances:
            return 0.0
        oldest = self.instances[0]
        # an oldest instance inside the window already covers it exactly
        covers_exactly = oldest.start_index >= self.position - self.window + 1
        if self.query_mode == "second" and len(self.instances) > 1 and not covers_exactly:
            return self.instances[1].last_value
        return oldest.last_value

    def instance_count(self) -> int:
        return len(self.instances)

    def space_cells(self) -> int:
        return sum(inst.estimator.space_cells() for inst in self.instances)

    def values(self) -> list[float]:
        return [inst.last_value for inst in self.instances]

    def starts(self) -> list[int]:
        return [inst.start_index for inst in self.instances]
