"""Assembly of the deterministic stub backend trio.

The stubs make every pipeline runnable and exactly reproducible without
model files: a word -> label lookup tagger, a hashed-text embedder and a
text -> probability fluency table. `--stub-backends` on the CLI uses the
built-in demo tables, or, when the models directory contains
``stub_tagger.json`` / ``stub_embedder.json`` / ``stub_fluency.json``,
the tables defined there.
"""

from __future__ import annotations

import json
from pathlib import Path

from .embedder import HashEmbedderBackend
from .fluency import StubFluencyBackend
from .scoring import Backends
from .tagger import StubTaggerBackend

# Small demo vocabulary for smoke runs and the `tag` subcommand.
DEMO_TAGGER_TABLE = {
    "person": "WHO",
    "man": "WHO",
    "woman": "WHO",
    "birds": "WHO",
    "bird": "WHO",
    "dog": "WHO",
    "walking": "HOW",
    "on": "HOW",
    "barking": "HOW",
    "caws": "HOW",
    "croaks": "HOW",
    "falls": "HOW",
    "falling": "HOW",
    "hard": "WHAT/WHERE",
    "surface": "WHAT/WHERE",
    "rain": "WHAT",
    "thunder": "WHAT",
    "door": "WHAT",
    "keyboard": "WHAT",
    "distance": "WHERE",
    "background": "WHERE",
    "loud": "SOUND PROPERTY",
    "quiet": "SOUND PROPERTY",
}

DEMO_FLUENCY_TABLE = {
    "a door is followed by a": 0.99,
    "rain falls": 0.01,
}


def demo_stub_backends(dimension: int = 16, seed: int = 0) -> Backends:
    return Backends(
        tagger=StubTaggerBackend(DEMO_TAGGER_TABLE),
        embedder=HashEmbedderBackend(dimension=dimension, seed=seed),
        fluency=StubFluencyBackend(DEMO_FLUENCY_TABLE),
    )


def load_stub_backends(models_dir: str | Path | None) -> Backends:
    """Stub trio, overridden by stub_*.json files when present."""
    if models_dir is None:
        return demo_stub_backends()
    models_dir = Path(models_dir)

    tagger_table = DEMO_TAGGER_TABLE
    tagger_path = models_dir / "stub_tagger.json"
    if tagger_path.exists():
        with open(tagger_path, encoding="utf-8") as handle:
            tagger_table = json.load(handle)

    dimension, seed = 16, 0
    embedder_path = models_dir / "stub_embedder.json"
    if embedder_path.exists():
        with open(embedder_path, encoding="utf-8") as handle:
            meta = json.load(handle)
        dimension = int(meta.get("dimension", dimension))
        seed = int(meta.get("seed", seed))

    fluency_table = DEMO_FLUENCY_TABLE
    default_probability = 0.01
    fluency_path = models_dir / "stub_fluency.json"
    if fluency_path.exists():
        with open(fluency_path, encoding="utf-8") as handle:
            spec = json.load(handle)
        fluency_table = spec.get("table", {})
        default_probability = float(spec.get("default", default_probability))

    return Backends(
        tagger=StubTaggerBackend(tagger_table),
        embedder=HashEmbedderBackend(dimension=dimension, seed=seed),
        fluency=StubFluencyBackend(fluency_table, default=default_probability),
    )
