"""One-pass Schatten-norm estimators for row-order streams.

An estimator ingests rows one at a time and reports a non-negative estimate
of ``||A||_{S_p}`` for the rows seen so far.  Two implementations:

* :class:`ExactGramSummary` keeps ``A^T A`` (zero error, ``m^2`` cells).
* :class:`BilinearCycleSketch` keeps ``k = p/2`` bilinear sketches
  ``S_i = G_i^T (A^T A) G_{i+1}`` and estimates ``Tr[(A^T A)^k]`` by the
  normalized cycle trace ``Tr(S_1 ... S_k) / t^k`` (even ``p`` only).
"""

from __future__ import annotations

from typing import Protocol, Sequence

import numpy as np

from .errors import DimensionError, ParameterError
from .linalg import rank1_update
from .schatten import DEFAULT_BACKEND, schatten_from_gram

MOM_GROUP = 8


class OnePassEstimator(Protocol):
    dim: int

    def ingest_row(self, r) -> None: ...

    def estimate(self) -> float: ...

    def space_cells(self) -> int: ...


def _as_row(r, m: int) -> np.ndarray:
    r = np.asarray(r, dtype=np.float64)
    if r.ndim != 1 or r.shape[0] != m:
        raise DimensionError(f"expected a row of length {m}, got shape {r.shape}")
    return r


class ExactGramSummary:
    """Exact estimator: the Gram matrix of every ingested row."""

    def __init__(self, dim: int, p: float, backend: str = DEFAULT_BACKEND):
        if not p > 0:
            raise ParameterError(f"p must be positive, got {p}")
        self.dim = dim
        self.p = float(p)
        self.backend = backend
        self.g = np.zeros((dim, dim))
        self.rows_seen = 0

    def ingest_row(self, r) -> None:
        rank1_update(self.g, _as_row(r, self.dim))
        self.rows_seen += 1

    def estimate(self) -> float:
        if self.rows_seen == 0:
            return 0.0
        return float(schatten_from_gram(self.g, self.p, self.backend))

    def space_cells(self) -> int:
        return self.dim * self.dim + 2

    @staticmethod
    def estimate_many(estimators: Sequence["ExactGramSummary"]) -> list[float]:
        """Batch :meth:`estimate` over summaries sharing ``p`` and ``dim``."""
        if not estimators:
            return []
        first = estimators[0]
        vals = schatten_from_gram(np.stack([e.g for e in estimators]), first.p,
                                  first.backend)
        vals = np.atleast_1d(vals)
        return [0.0 if e.rows_seen == 0 else float(v) for e, v in zip(estimators, vals)]


def median_of_means(values, group: int = MOM_GROUP) -> float:
    values = np.asarray(values, dtype=np.float64)
    n_groups = max(1, values.size // group)
    return float(np.median([chunk.mean() for chunk in np.array_split(values, n_groups)]))


class BilinearCycleSketch:
    """Randomized estimator of ``||A||_{S_p}`` for even integer ``p``.

    Every repetition draws ``k = p/2`` independent Gaussian projections
    ``G_i`` (``m x t``) and maintains ``S_i = G_i^T B G_{i+1 mod k}`` for
    ``B = A^T A``.  Since ``E[G G^T] = t I`` and the factors are independent,
    ``Tr(S_1 ... S_k) / t^k`` is unbiased for ``Tr[B^k] = ||A||_{S_p}^p``.
    Repetitions are aggregated by median-of-means.
    """

    def __init__(self, dim: int, p: float, t: int = 16, reps: int = 16, seed=0):
        k = p / 2.0
        if p <= 0 or k != int(k):
            raise ParameterError(f"cycle sketch needs an even integer p, got {p}")
        if t < 1 or reps < 1:
            raise ParameterError("sketch width and repetitions must be positive")
        self.dim = dim
        self.p = float(p)
        self.k = int(k)
        self.t = int(t)
        self.reps = int(reps)
        self.seed = seed
        rng = np.random.default_rng(seed)
        # (reps, k, m, t)
        self.projections = rng.standard_normal((self.reps, self.k, dim, self.t))
        self.blocks = np.zeros((self.reps, self.k, self.t, self.t))
        self.rows_seen = 0

    def ingest_row(self, r) -> None:
        r = _as_row(r, self.dim)
        z = np.einsum("rkmt,m->rkt", self.projections, r)
        z_next = np.roll(z, -1, axis=1)
        self.blocks += z[:, :, :, None] * z_next[:, :, None, :]
        self.rows_seen += 1

    def cycle_values(self) -> np.ndarray:
        """Per-repetition unbiased estimates of ``Tr[(A^T A)^k]``."""
        prod = self.blocks[:, 0]
        for i in range(1, self.k):
            prod = prod @ self.blocks[:, i]
        return np.trace(prod, axis1=1, axis2=2) / float(self.t) ** self.k

    def estimate(self) -> float:
        if self.rows_seen == 0:
            return 0.0
        agg = median_of_means(self.cycle_values())
        return max(agg, 0.0) ** (1.0 / self.p)

    def space_cells(self) -> int:
        return self.reps * self.k * (self.t * self.t + self.dim * self.t) + 4


def estimate_all(estimators: Sequence[OnePassEstimator]) -> list[float]:
    """``[e.estimate() for e in estimators]``, batching exact summaries."""
    if estimators and all(type(e) is ExactGramSummary for e in estimators):
        return ExactGramSummary.estimate_many(estimators)
    return [e.estimate() for e in estimators]
