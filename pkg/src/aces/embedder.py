"""Text embedding backends and similarity.

Every backend maps a text to a deterministic unit-norm float64 vector of
a fixed dimension. Real sentence-embedding models are loaded through
aces.runtime; the backends defined here are deterministic stand-ins that
make the whole metric verifiable without model files.
"""

from __future__ import annotations

import hashlib
from typing import Protocol

import numpy as np

from .errors import ConfigError, DimensionMismatchError, EmptyTextError, InferenceError

NORM_TOLERANCE = 1e-6


class EmbedderBackend(Protocol):
    dimension: int

    def embed(self, text: str) -> np.ndarray: ...


class HashEmbedderBackend:
    """Deterministic stub: seeded hash stream mapped to a unit vector.

    Block i of four float64 values comes from sha256("{seed}:{text}:{i}"),
    reading the 32-byte digest as four little-endian uint64 and scaling
    each to [-1, 1); blocks are concatenated, truncated to the requested
    dimension, then L2-normalized.
    """

    def __init__(self, dimension: int = 16, seed: int = 0):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        self.dimension = dimension
        self.seed = seed

    def embed(self, text: str) -> np.ndarray:
        values = np.empty(self.dimension, dtype=np.float64)
        filled = 0
        block = 0
        while filled < self.dimension:
            digest = hashlib.sha256(f"{self.seed}:{text}:{block}".encode()).digest()
            chunk = np.frombuffer(digest, dtype="<u8").astype(np.float64)
            chunk = chunk / 2.0**64 * 2.0 - 1.0
            take = min(len(chunk), self.dimension - filled)
            values[filled : filled + take] = chunk[:take]
            filled += take
            block += 1
        norm = float(np.linalg.norm(values))
        if norm < 1e-12:
            raise InferenceError(f"degenerate hash vector for {text!r}")
        return values / norm


class PresetEmbedderBackend:
    """Stub with an explicit text -> vector table, normalized at load."""

    def __init__(self, vectors: dict[str, np.ndarray]):
        if not vectors:
            raise ValueError("vector table must not be empty")
        dimensions = {np.asarray(vector).shape for vector in vectors.values()}
        if len(dimensions) != 1:
            raise DimensionMismatchError(f"mixed vector shapes {sorted(dimensions)}")
        self._vectors = {}
        for text, vector in vectors.items():
            array = np.asarray(vector, dtype=np.float64)
            norm = float(np.linalg.norm(array))
            if norm < 1e-12:
                raise ValueError(f"zero vector for {text!r}")
            self._vectors[text] = array / norm
        self.dimension = next(iter(self._vectors.values())).shape[0]

    def embed(self, text: str) -> np.ndarray:
        try:
            return self._vectors[text]
        except KeyError:
            raise InferenceError(f"no preset vector for {text!r}") from None


def embed_text(text: str, backend: EmbedderBackend) -> np.ndarray:
    """Embed one text, enforcing the unit-norm contract."""
    if not text or not text.strip():
        raise EmptyTextError("cannot embed empty text")
    vector = np.asarray(backend.embed(text), dtype=np.float64)
    if vector.ndim != 1 or vector.shape[0] != backend.dimension:
        raise InferenceError(
            f"backend returned shape {vector.shape}, expected ({backend.dimension},)"
        )
    norm = float(np.linalg.norm(vector))
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise InferenceError(f"embedding norm {norm} violates unit-norm contract")
    return vector


def similarity(a: np.ndarray, b: np.ndarray, technique: str = "cosine") -> float:
    """Similarity of two embeddings.

    cosine: plain dot product (vectors are unit-norm), in [-1, 1];
    euclidean: 1 / (1 + distance), in (0, 1].
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shape {a.shape} vs {b.shape}")
    technique = technique.lower()
    if technique == "cosine":
        return float(np.dot(a, b))
    if technique == "euclidean":
        return float(1.0 / (1.0 + np.linalg.norm(a - b)))
    raise ConfigError("distance_technique", f"unknown technique {technique!r}")
