"""Sliding-window Schatten p-norm estimation with smooth histograms."""

from .errors import DimensionError, NumericError, ParameterError
from .estimators import BilinearCycleSketch, ExactGramSummary
from .histogram import SmoothHistogram
from .linalg import gram, rank1_update, stack, sym_eig
from .schatten import (
    SmoothnessParams,
    diag_embed_row,
    schatten_from_gram,
    schatten_norm,
    smoothness_params,
    trace_power,
)

__all__ = [
    "BilinearCycleSketch",
    "DimensionError",
    "ExactGramSummary",
    "NumericError",
    "ParameterError",
    "SmoothHistogram",
    "SmoothnessParams",
    "diag_embed_row",
    "gram",
    "rank1_update",
    "schatten_from_gram",
    "schatten_norm",
    "smoothness_params",
    "stack",
    "sym_eig",
    "trace_power",
]
