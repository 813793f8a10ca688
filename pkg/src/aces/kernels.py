"""Similarity kernel dispatch.

Selects the compiled extension when it was built, the numpy fallback
otherwise. Both expose identical semantics; `active_implementation()`
reports which one is in use.
"""

from __future__ import annotations

import numpy as np

from .config import DISTANCE_TECHNIQUES
from .errors import ConfigError, DimensionMismatchError, EmptyGroupError

try:
    from . import _kernel as _impl
except ImportError:  # extension not built; pure numpy path
    from . import _kernel_py as _impl

_TECHNIQUE_CODES = {name: code for code, name in enumerate(DISTANCE_TECHNIQUES)}


def active_implementation() -> str:
    return _impl.IMPLEMENTATION


def _as_matrix(vectors: np.ndarray) -> np.ndarray:
    matrix = np.ascontiguousarray(vectors, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] == 0:
        raise EmptyGroupError("expected a non-empty 2-d array of embeddings")
    return matrix


def _technique_code(technique: str) -> int:
    try:
        return _TECHNIQUE_CODES[technique.lower()]
    except KeyError:
        raise ConfigError(
            "distance_technique", f"must be one of {DISTANCE_TECHNIQUES}"
        ) from None


def pr_re(cand: np.ndarray, ref: np.ndarray, technique: str = "cosine") -> tuple[float, float]:
    """Category precision/recall from stacked candidate and reference embeddings.

    Precision is the mean over reference tokens of the best candidate
    similarity; recall is the mean over candidate tokens of the best
    reference similarity.
    """
    cand_matrix = _as_matrix(cand)
    ref_matrix = _as_matrix(ref)
    if cand_matrix.shape[1] != ref_matrix.shape[1]:
        raise DimensionMismatchError(
            f"dimension {cand_matrix.shape[1]} vs {ref_matrix.shape[1]}"
        )
    precision, recall = _impl.pr_re(cand_matrix, ref_matrix, _technique_code(technique))
    return float(precision), float(recall)


def similarity_matrix(cand: np.ndarray, ref: np.ndarray, technique: str = "cosine") -> np.ndarray:
    """Pairwise similarity matrix, shape (len(cand), len(ref))."""
    cand_matrix = _as_matrix(cand)
    ref_matrix = _as_matrix(ref)
    if cand_matrix.shape[1] != ref_matrix.shape[1]:
        raise DimensionMismatchError(
            f"dimension {cand_matrix.shape[1]} vs {ref_matrix.shape[1]}"
        )
    return _impl.similarity_matrix(cand_matrix, ref_matrix, _technique_code(technique))
