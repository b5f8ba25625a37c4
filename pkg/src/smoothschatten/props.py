"""Numerical checks of the Schatten smoothness inequalities.

Each check returns a signed margin (non-negative when the inequality holds) so
that callers can track the worst case.  The random-instance generators at the
bottom are shared by the test suite and the ``verify`` command.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError
from .linalg import as_matrix, gram, stack, sym_eig
from .schatten import (
    SmoothnessParams,
    schatten_norm,
    schatten_power,
    smoothness_params,
    trace_power,
)

REL_TOL = 1e-9


def pinching_gap(x, y, p: float) -> float:
    """``||[X;Y]||_p^p - ||X^T X||_{p/2}^{p/2} - ||Y^T Y||_{p/2}^{p/2}``.

    Superadditivity says this is non-negative for every ``p >= 2``.
    """
    if p < 2:
        raise ParameterError(f"pinching inequality needs p >= 2, got {p}")
    x = as_matrix(x)
    y = as_matrix(y, cols=x.shape[1])
    a = stack(x, y)
    return schatten_power(a, p) - schatten_power(x, p) - schatten_power(y, p)


def eps_bound_gap(eps: float, p: float) -> float:
    """``sqrt(1 - (2 eps^{p/2} - eps^p)^{2/p}) - (1 - eps)``."""
    inner = 2.0 * eps ** (p / 2.0) - eps ** p
    # inner <= 1 analytically; guard the sqrt against a last-ulp overshoot
    return math.sqrt(max(0.0, 1.0 - inner ** (2.0 / p))) - (1.0 - eps)


def trace_diff(g, c, q: float) -> float:
    """``Tr[(g + C^T C)^q - g^q]``."""
    if not 0 < q < 1:
        raise ParameterError(f"q must lie in (0, 1), got {q}")
    g = np.asarray(g, dtype=np.float64)
    c = as_matrix(c, cols=g.shape[0])
    return trace_power(g + gram(c), q) - trace_power(g, q)


def check_trace_monotone(a_big, b_small, c, q: float) -> tuple[bool, float]:
    """Trace-difference monotonicity for ``a_big >= b_small >= 0``.

    Returns ``(holds, margin)`` where ``margin = diff(b) - diff(a)``.
    """
    a_big = np.asarray(a_big, dtype=np.float64)
    b_small = np.asarray(b_small, dtype=np.float64)
    if a_big.shape != b_small.shape:
        raise DimensionError("a_big and b_small must have the same shape")
    for name, mat in (("a_big - b_small", a_big - b_small), ("b_small", b_small)):
        lam = sym_eig(mat, backend="lapack")
        if lam.size and lam[-1] < -1e-8 * max(abs(lam[0]), 1.0):
            raise ParameterError(f"{name} is not PSD (min eigenvalue {lam[-1]:.3e})")
    da = trace_diff(a_big, c, q)
    db = trace_diff(b_small, c, q)
    margin = db - da
    return bool(margin >= -REL_TOL * max(1.0, db)), margin


@dataclass(frozen=True)
class SmoothCheckVerdict:
    premise_holds: bool
    conclusion_holds: bool
    premise_margin: float
    conclusion_margin: float

    @property
    def violated(self) -> bool:
        return self.premise_holds and not self.conclusion_holds


def check_smooth_step(x, y, c, params: SmoothnessParams) -> SmoothCheckVerdict:
    """Evaluate the suffix condition with ``f = ||.||_{S_p}``.

    Premise: ``(1 - beta) f([X;Y]) <= f(Y)``.  Conclusion:
    ``(1 - alpha) f([X;Y;C]) <= f([Y;C])``.
    """
    x = as_matrix(x)
    m = x.shape[1]
    y = as_matrix(y, cols=m)
    c = as_matrix(c, cols=m)
    p = params.p
    a = stack(x, y)
    fa, fy = schatten_norm(a, p), schatten_norm(y, p)
    fac, fyc = schatten_norm(stack(a, c), p), schatten_norm(stack(y, c), p)
    pm = fy - (1 - params.beta) * fa
    cm = fyc - (1 - params.alpha) * fac
    return SmoothCheckVerdict(
        premise_holds=pm >= 0,
        conclusion_holds=cm >= -REL_TOL * max(fac, fyc),
        premise_margin=pm,
        conclusion_margin=cm,
    )


def boundary_scale(x, y, beta: float, p: float, rtol: float = 1e-6,
                   max_iter: int = 200) -> float:
    """Scale ``s`` putting ``[sX; Y]`` on the premise boundary.

    The returned ``s`` satisfies ``0 <= ||Y|| - (1-beta)||[sX;Y]|| <= rtol*||[sX;Y]||``.
    Needs nonzero ``X`` and ``Y``.
    """
    x = as_matrix(x)
    y = as_matrix(y, cols=x.shape[1])
    fy = schatten_norm(y, p)
    if fy == 0 or not np.any(x):
        raise ParameterError("boundary scaling needs nonzero X and Y")

    def margin(s):
        fa = schatten_norm(stack(s * x, y), p)
        return fy - (1 - beta) * fa, fa

    lo, hi = 0.0, 1.0
    while margin(hi)[0] >= 0:
        lo, hi = hi, 2.0 * hi
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        pm, fa = margin(mid)
        if pm >= 0:
            lo = mid
            if pm <= rtol * fa:
                return lo
        else:
            hi = mid
    return lo


# random instances --------------------------------------------------------

def random_matrix(rng: np.random.Generator, rows: int, cols: int,
                  rank: int | None = None) -> np.ndarray:
    if rank is None or rank >= min(rows, cols):
        return rng.standard_normal((rows, cols))
    return rng.standard_normal((rows, rank)) @ rng.standard_normal((rank, cols))


def random_pair(rng: np.random.Generator, cols: int | None = None):
    """Random ``(X, Y)`` with a shared column count, mixing in low rank."""
    m = cols if cols is not None else int(rng.integers(2, 7))
    out = []
    for _ in range(2):
        rows = int(rng.integers(1, 9))
        kind = rng.random()
        if kind < 0.25:
            out.append(random_matrix(rng, rows, m, rank=1))
        elif kind < 0.4:
            out.append(random_matrix(rng, rows, m, rank=2))
        elif kind < 0.5:
            # near-degenerate spectrum: orthonormal rows plus a small perturbation
            q, _ = np.linalg.qr(rng.standard_normal((m, m)))
            k = min(rows, m)
            mat = q[:k] + 1e-6 * rng.standard_normal((k, m))
            out.append(mat)
        else:
            out.append(random_matrix(rng, rows, m))
    return out[0], out[1]


def random_smooth_instance(rng: np.random.Generator, p: float, eps: float):
    """Boundary-scaled ``(X, Y, C)`` for the smooth-step check."""
    x, y = random_pair(rng)
    m = x.shape[1]
    s = boundary_scale(x, y, smoothness_params(p, eps).beta, p)
    rows_c = int(rng.integers(0, 9))
    c_scale = 10.0 ** rng.uniform(-2, 2)
    c = c_scale * random_matrix(rng, rows_c, m, rank=int(rng.integers(1, 3)) if rng.random() < 0.3 else None)
    return s * x, y, c
