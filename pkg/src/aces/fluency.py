"""Disfluency detection: error probability plus the binary penalty flag.

Detectors target the usual caption defects: incomplete sentences,
repeated events or adverbs, missing conjunctions, missing verbs. The
scoring pipeline uses the thresholded flag, not the raw probability.
"""

from __future__ import annotations

from typing import Mapping, Protocol, Sequence

import numpy as np

from .errors import EmptyTextError, InferenceError


class FluencyBackend(Protocol):
    def error_probabilities(self, text: str) -> Sequence[float]: ...


class StubFluencyBackend:
    """Explicit text -> probability table; unlisted texts score `default`."""

    def __init__(self, table: Mapping[str, float] | None = None, default: float = 0.01):
        self.table = dict(table or {})
        self.default = default

    def error_probabilities(self, text: str) -> Sequence[float]:
        return [self.table.get(text, self.default)]


def fluency_error_probability(text: str, backend: FluencyBackend) -> float:
    """Probability the caption contains any fluency error.

    Multi-head detectors report one probability per error category; the
    maximum over categories is taken. The result is clamped to [0, 1].
    """
    if not text or not text.strip():
        raise EmptyTextError("cannot judge fluency of empty text")
    probabilities = np.asarray(backend.error_probabilities(text), dtype=np.float64)
    if probabilities.size == 0 or not np.all(np.isfinite(probabilities)):
        raise InferenceError("fluency backend returned no finite probabilities")
    return float(min(1.0, max(0.0, float(np.max(probabilities)))))


def fluency_flag(probability: float, threshold: float) -> int:
    """1 iff probability strictly exceeds the threshold."""
    if not 0.0 <= probability <= 1.0:
        raise ValueError(f"probability {probability} outside [0, 1]")
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold {threshold} outside [0, 1]")
    return 1 if probability > threshold else 0
