"""Small dense real linear algebra.

Matrices are plain 2-D ``float64`` numpy arrays in row-major order.  Symmetric
matrices are stored in full, and every constructor here returns an exactly
symmetric array (``s[i, j] == s[j, i]`` bit for bit).
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, NumericError

EIG_TOL = 1e-11
MAX_SWEEPS = 60


def as_matrix(a, cols: int | None = None) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D float64 array.

    A 1-D input is read as a single row.  ``cols`` fixes the column count,
    which matters for empty (0-row) input.
    """
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.size or cols is None else arr.reshape(0, cols)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {arr.shape}")
    if cols is not None and arr.shape[1] != cols:
        if arr.shape[0] == 0:
            arr = arr.reshape(0, cols)
        else:
            raise DimensionError(f"expected {cols} columns, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise NumericError("matrix has non-finite entries")
    return arr


def empty(cols: int) -> np.ndarray:
    return np.zeros((0, cols))


def stack(top, bottom) -> np.ndarray:
    """Vertically stack two matrices, ``top`` rows first."""
    top = np.asarray(top, dtype=np.float64)
    bottom = np.asarray(bottom, dtype=np.float64)
    if top.ndim != 2 or bottom.ndim != 2:
        raise DimensionError("stack expects 2-D matrices")
    if top.shape[1] != bottom.shape[1]:
        raise DimensionError(
            f"column mismatch: {top.shape[1]} vs {bottom.shape[1]}")
    return np.vstack([top, bottom])


def symmetrize(s) -> np.ndarray:
    s = np.asarray(s, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {s.shape}")
    # (s + s.T) is bitwise symmetric because float addition commutes
    return 0.5 * (s + s.T)


def gram(a) -> np.ndarray:
    """Return ``a.T @ a``, exactly symmetric."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[1] < 1:
        raise DimensionError(f"gram expects an n x m matrix with m >= 1, got {a.shape}")
    return symmetrize(a.T @ a)


def rank1_update(s: np.ndarray, r) -> np.ndarray:
    """In-place ``s += r r^T``; returns ``s``."""
    r = np.asarray(r, dtype=np.float64)
    if r.ndim != 1 or r.shape[0] != s.shape[0]:
        raise DimensionError(f"row of length {r.shape} does not match dim {s.shape[0]}")
    # r_i * r_j == r_j * r_i exactly, so symmetry survives the update
    s += np.outer(r, r)
    return s


def _jacobi_eigvals(a: np.ndarray, tol: float, max_sweeps: int) -> np.ndarray:
    n = a.shape[0]
    a = a.copy()
    fro = np.linalg.norm(a)
    if n < 2 or fro == 0.0:
        return np.diag(a).copy()
    iu = np.triu_indices(n, 1)
    for sweep in range(max_sweeps):
        off = np.sqrt(2.0 * np.sum(a[iu] ** 2))
        if off <= tol * fro:
            return np.diag(a).copy()
        # threshold pivoting for the first sweeps (Rutishauser)
        thresh = 0.2 * off / n**2 if sweep < 3 else 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = 100.0 * abs(apq)
                app, aqq = a[p, p], a[q, q]
                if sweep > 3 and abs(app) + g == abs(app) and abs(aqq) + g == abs(aqq):
                    a[p, q] = a[q, p] = 0.0
                    continue
                if abs(apq) <= thresh or apq == 0.0:
                    continue
                h = aqq - app
                if abs(h) + g == abs(h):
                    # theta would overflow; small-angle limit t = 1 / (2 theta)
                    t = apq / h
                else:
                    theta = 0.5 * h / apq
                    t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(1.0, theta))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
    off = np.sqrt(2.0 * np.sum(a[iu] ** 2))
    if off <= tol * fro:
        return np.diag(a).copy()
    raise NumericError(
        f"Jacobi did not converge in {max_sweeps} sweeps "
        f"(relative off-diagonal residual {off / fro:.3e})")


def sym_eig(s, backend: str = "jacobi", tol: float = EIG_TOL,
            max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues of a symmetric matrix, sorted descending.

    ``backend="jacobi"`` runs cyclic Jacobi with threshold pivoting until the
    off-diagonal Frobenius norm is at most ``tol * ||s||_F``.
    ``backend="lapack"`` defers to ``numpy.linalg.eigvalsh`` and also accepts a
    stack of matrices with shape ``(..., d, d)``.
    """
    s = np.asarray(s, dtype=np.float64)
    if s.ndim < 2 or s.shape[-1] != s.shape[-2]:
        raise DimensionError(f"expected square matrix, got shape {s.shape}")
    if not np.all(np.isfinite(s)):
        raise NumericError("matrix has non-finite entries")
    if backend == "lapack":
        return np.linalg.eigvalsh(s)[..., ::-1]
    if backend != "jacobi":
        raise ValueError(f"unknown eigen backend {backend!r}")
    if s.ndim != 2:
        return np.stack([sym_eig(x, "jacobi", tol, max_sweeps) for x in s])
    if not np.array_equal(s, s.T):
        s = symmetrize(s)
    return np.sort(_jacobi_eigvals(s, tol, max_sweeps))[::-1]
