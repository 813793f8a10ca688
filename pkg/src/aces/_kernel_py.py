"""Numpy implementation of the similarity kernels.

Used when the compiled extension is unavailable. Both implementations
share the same contract: float64 C-contiguous inputs, technique code
0 = cosine (plain dot product of unit vectors), 1 = euclidean
(1 / (1 + distance)).
"""

from __future__ import annotations

import numpy as np

IMPLEMENTATION = "numpy"


def similarity_matrix(cand: np.ndarray, ref: np.ndarray, technique: int) -> np.ndarray:
    """Pairwise similarities, shape (len(cand), len(ref))."""
    if technique == 0:
        return cand @ ref.T
    diff = cand[:, None, :] - ref[None, :, :]
    return 1.0 / (1.0 + np.sqrt(np.sum(diff * diff, axis=2)))


def pr_re(cand: np.ndarray, ref: np.ndarray, technique: int) -> tuple[float, float]:
    """Max-mean reduction over the similarity matrix.

    Precision averages, over reference tokens, the best-matching candidate
    similarity; recall averages, over candidate tokens, the best-matching
    reference similarity.
    """
    sims = similarity_matrix(cand, ref, technique)
    precision = float(np.mean(np.max(sims, axis=0)))
    recall = float(np.mean(np.max(sims, axis=1)))
    return precision, recall
