"""Schatten p-norms, trace powers and smoothness parameters.

Everything goes through Gram spectra: the singular values of ``A`` are the
square roots of the eigenvalues of ``A^T A`` (or of ``A A^T``; both share the
nonzero part of the spectrum).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ParameterError
from .linalg import as_matrix, sym_eig

# eigenvalues below -NEG_TOL * lambda_max mean the input was not PSD
NEG_TOL = 1e-8
# eigenvalues below NOISE_FLOOR * lambda_max are roundoff and count as zero
NOISE_FLOOR = 1e-12
DEFAULT_BACKEND = "lapack"


def clamp_psd(values: np.ndarray) -> np.ndarray:
    """Zero out the roundoff part of a PSD spectrum (works on stacked spectra)."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        return values
    top = np.max(values, axis=-1, keepdims=True)
    scale = np.maximum(top, 0.0)
    if np.any(values < -NEG_TOL * scale) or np.any((scale == 0) & (values < 0)):
        raise NumericError(
            f"matrix is not PSD: smallest eigenvalue {values.min():.3e}, "
            f"largest {top.max():.3e}")
    return np.where(values <= NOISE_FLOOR * scale, 0.0, values)


def psd_spectrum(g, backend: str = DEFAULT_BACKEND) -> np.ndarray:
    """Clamped, descending spectrum of a PSD matrix (or a stack of them)."""
    return clamp_psd(sym_eig(g, backend=backend))


def trace_power(g, q: float, backend: str = DEFAULT_BACKEND):
    """``Tr[g^q] = sum_i max(lambda_i, 0)^q`` for PSD ``g``.

    A stack of matrices ``(..., d, d)`` gives an array of traces.
    """
    if not q > 0:
        raise ParameterError(f"trace power needs q > 0, got {q}")
    lam = psd_spectrum(g, backend)
    out = np.sum(lam ** q, axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def _check_p(p: float) -> None:
    if not p > 0:
        raise ParameterError(f"Schatten p must be positive (rank p=0 unsupported), got {p}")


def schatten_from_gram(g, p: float, backend: str = DEFAULT_BACKEND):
    """Schatten p-norm of any ``A`` with ``A^T A == g``."""
    _check_p(p)
    tp = trace_power(g, p / 2.0, backend)
    return tp ** (1.0 / p)


def schatten_norm(a, p: float, backend: str = DEFAULT_BACKEND) -> float:
    """``(sum_i sigma_i(a)^p)^(1/p)``; zero for empty or all-zero input."""
    _check_p(p)
    a = as_matrix(a)
    if a.size == 0:
        return 0.0
    # the smaller Gram side has no structural zero eigenvalues
    g = a.T @ a if a.shape[0] >= a.shape[1] else a @ a.T
    g = 0.5 * (g + g.T)
    return float(schatten_from_gram(g, p, backend))


def schatten_power(a, p: float, backend: str = DEFAULT_BACKEND) -> float:
    """``||a||_{S_p}^p``, without the final root."""
    a = as_matrix(a)
    if a.size == 0:
        return 0.0
    g = a.T @ a if a.shape[0] >= a.shape[1] else a @ a.T
    return trace_power(0.5 * (g + g.T), p / 2.0, backend)


@dataclass(frozen=True)
class SmoothnessParams:
    """Smoothness pair for the Schatten p-norm at accuracy ``eps``.

    ``alpha`` relaxes the conclusion and ``beta`` tightens the premise of the
    suffix condition; ``beta <= alpha`` always.
    """

    p: float
    eps: float
    alpha: float
    beta: float

    def __post_init__(self):
        if not (0 < self.beta <= self.alpha < 1):
            raise ParameterError(
                f"need 0 < beta <= alpha < 1, got alpha={self.alpha}, beta={self.beta}")


def smoothness_params(p: float, eps: float) -> SmoothnessParams:
    _check_p(p)
    if not 0 < eps < 1:
        raise ParameterError(f"eps must lie in (0, 1), got {eps}")
    if p >= 2:
        beta = eps ** (p / 2.0) / (p / 2.0)
    else:
        beta = eps
    return SmoothnessParams(p=float(p), eps=float(eps), alpha=float(eps), beta=float(beta))


def diag_embed_row(index: int, delta: float, m: int) -> np.ndarray:
    """Row ``sqrt(delta) * e_index`` (1-based index) for the l_{p/2} embedding.

    Streaming these rows keeps ``A^T A`` diagonal with the running vector
    ``x`` on its diagonal, so ``||A||_{S_p}^2 == ||x||_{p/2}``.
    """
    if not 1 <= index <= m:
        raise ParameterError(f"coordinate {index} outside 1..{m}")
    if not delta > 0:
        raise ParameterError(f"insertion-only: delta must be positive, got {delta}")
    row = np.zeros(m)
    row[index - 1] = math.sqrt(delta)
    return row


def lp_norm(x, q: float) -> float:
    """``(sum_i |x_i|^q)^(1/q)``, quasi-norm when ``q < 1``."""
    x = np.abs(np.asarray(x, dtype=np.float64))
    return float(np.sum(x ** q) ** (1.0 / q))
