"""Row sources and the brute-force window oracle."""

from __future__ import annotations

from collections import deque
from typing import Iterator

import numpy as np

from .schatten import schatten_norm


class InputError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def read_rows(lines, entry_bound: float = 1e6) -> Iterator[tuple[int, np.ndarray]]:
    """Parse headerless CSV rows; yields ``(line_number, row)``.

    Blank lines and ``#`` comments are skipped.  Rows must share a length,
    be finite and stay within ``entry_bound`` in absolute value.
    """
    width = None
    for lineno, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            row = np.array([float(tok) for tok in text.split(",")])
        except ValueError as exc:
            raise InputError(lineno, f"not a row of floats ({exc})") from None
        if width is None:
            width = row.size
        elif row.size != width:
            raise InputError(lineno, f"expected {width} entries, got {row.size}")
        if not np.all(np.isfinite(row)):
            raise InputError(lineno, "non-finite entry")
        if np.any(np.abs(row) > entry_bound):
            raise InputError(lineno, f"entry exceeds bound {entry_bound:g}")
        yield lineno, row


def read_updates(lines) -> Iterator[tuple[int, int, float]]:
    """Parse ``index,delta`` insertion updates; yields ``(line, index, delta)``."""
    for lineno, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        parts = [tok.strip() for tok in text.split(",")]
        if len(parts) != 2:
            raise InputError(lineno, "expected 'index,delta'")
        try:
            index, delta = int(parts[0]), float(parts[1])
        except ValueError as exc:
            raise InputError(lineno, str(exc)) from None
        if not delta > 0:
            raise InputError(lineno, f"delta must be positive, got {delta}")
        yield lineno, index, delta


class WindowOracle:
    """Ring buffer of the last ``window`` rows with exact recomputation."""

    def __init__(self, window: int, p: float):
        self.rows: deque = deque(maxlen=window)
        self.p = p

    def push(self, row) -> None:
        self.rows.append(np.asarray(row, dtype=np.float64))

    def value(self) -> float:
        if not self.rows:
            return 0.0
        return schatten_norm(np.vstack(self.rows), self.p)


STREAMS = ("iid-normal", "low-rank", "bursty-scale", "unit-rows")


def synthetic_stream(name: str, rows: int, dim: int, seed: int, rank: int = 2) -> np.ndarray:
    """Built-in stream generators used by ``bench``.

    ``low-rank`` rows live in a fixed random ``rank``-dimensional subspace;
    ``bursty-scale`` multiplies blocks of 50 rows by log-uniform factors in
    ``[0.1, 10]``; ``unit-rows`` repeats ``e_1``.
    """
    rng = np.random.default_rng(seed)
    if name == "iid-normal":
        return rng.standard_normal((rows, dim))
    if name == "low-rank":
        basis = rng.standard_normal((rank, dim))
        return rng.standard_normal((rows, rank)) @ basis
    if name == "bursty-scale":
        data = rng.standard_normal((rows, dim))
        n_blocks = -(-rows // 50)
        scales = 10.0 ** rng.uniform(-1, 1, size=n_blocks)
        return data * np.repeat(scales, 50)[:rows, None]
    if name == "unit-rows":
        data = np.zeros((rows, dim))
        data[:, 0] = 1.0
        return data
    raise ValueError(f"unknown stream {name!r}; choose from {', '.join(STREAMS)}")
