"""Labeled-caption dataset handling: JSON Lines IO, dedup, splits, kappa."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .labels import LABELS_13


class DataError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledCaption:
    """Caption words with one category label per word."""

    words: tuple[str, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.words) != len(self.labels):
            raise DataError(
                f"{len(self.words)} words but {len(self.labels)} labels"
            )
        if not self.words:
            raise DataError("empty caption")
        unknown = set(self.labels) - set(LABELS_13)
        if unknown:
            raise DataError(f"unknown labels {sorted(unknown)}")

    @property
    def text(self) -> str:
        return " ".join(self.words)


def load_labeled_captions(path: str | Path) -> list[LabeledCaption]:
    """Read JSON Lines with parallel ``words`` and ``labels`` arrays."""
    captions = []
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                captions.append(
                    LabeledCaption(words=record["words"], labels=record["labels"])
                )
            except (json.JSONDecodeError, KeyError, TypeError, DataError) as exc:
                raise DataError(f"line {line_number}: {exc}") from exc
    return captions


def save_labeled_captions(captions: Sequence[LabeledCaption], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for caption in captions:
            handle.write(
                json.dumps(
                    {"words": list(caption.words), "labels": list(caption.labels)},
                    ensure_ascii=False,
                )
                + "\n"
            )


def dedup_captions(captions: Sequence[LabeledCaption]) -> list[LabeledCaption]:
    """Drop repeated captions (case-insensitive text match), keeping the first.

    Annotator overlap produces duplicates; training on them would weight
    those captions multiple times per epoch and leak into the test split.
    """
    seen = set()
    unique = []
    for caption in captions:
        key = caption.text.lower()
        if key in seen:
            continue
        seen.add(key)
        unique.append(caption)
    return unique


def train_test_split(
    captions: Sequence[LabeledCaption], train_fraction: float = 0.8, seed: int = 0
) -> tuple[list[LabeledCaption], list[LabeledCaption]]:
    """Seeded shuffle split; membership is reproducible for a fixed seed."""
    if not 0.0 < train_fraction < 1.0:
        raise DataError(f"train_fraction {train_fraction} outside (0, 1)")
    indices = list(range(len(captions)))
    random.Random(seed).shuffle(indices)
    cut = round(len(captions) * train_fraction)
    train = [captions[i] for i in sorted(indices[:cut])]
    test = [captions[i] for i in sorted(indices[cut:])]
    return train, test


def cohen_kappa(labels_a: Sequence[str], labels_b: Sequence[str]) -> float:
    """Inter-annotator agreement between two parallel label sequences."""
    if len(labels_a) != len(labels_b):
        raise DataError("label sequences differ in length")
    if not labels_a:
        raise DataError("empty label sequences")
    n = len(labels_a)
    observed = sum(a == b for a, b in zip(labels_a, labels_b)) / n
    counts_a: dict[str, int] = {}
    counts_b: dict[str, int] = {}
    for a, b in zip(labels_a, labels_b):
        counts_a[a] = counts_a.get(a, 0) + 1
        counts_b[b] = counts_b.get(b, 0) + 1
    expected = sum(
        counts_a.get(label, 0) * counts_b.get(label, 0) for label in counts_a
    ) / (n * n)
    if expected == 1.0:
        return 1.0
    return (observed - expected) / (1.0 - expected)
