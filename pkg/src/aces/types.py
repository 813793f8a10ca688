"""Shared value objects: tagged captions, descriptor groups, score reports.

All types here are immutable and safe to share between threads.
"""

from __future__ import annotations

import string
from dataclasses import dataclass

from .labels import DescriptorLabel, render_label

# Mapping from descriptor category to the member span texts, in caption
# order. Built by the tagger; consumed by the scoring core. Never contains
# O, and contains OTHER only when explicitly configured; token lists are
# never empty.
DescriptorGroups = dict[DescriptorLabel, list[str]]


def normalize_word(word: str) -> str:
    """Lowercase a word and strip terminal punctuation.

    A word that is pure punctuation normalizes to the empty string; such
    words keep their position in the word list but are always labeled O.
    """
    return word.lower().rstrip(string.punctuation)


def caption_words(text: str) -> list[str]:
    """Whitespace-split a caption into normalized words."""
    return [normalize_word(word) for word in text.split()]


@dataclass(frozen=True)
class TaggedSpan:
    """One or more adjacent words sharing a descriptor category.

    ``text`` is the normalized words joined by single spaces; word indices
    are half-open positions into the caption's whitespace word list.
    """

    text: str
    label: DescriptorLabel
    word_start: int
    word_end: int
    confidence: float

    def __post_init__(self):
        if not self.word_start < self.word_end:
            raise ValueError(f"empty span [{self.word_start}, {self.word_end})")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")


@dataclass(frozen=True)
class TaggedCaption:
    """A caption with its labeled word spans.

    Spans are non-overlapping, sorted by start position, and each span's
    text equals the normalized words of ``text`` it covers.
    """

    text: str
    spans: tuple[TaggedSpan, ...]

    def __post_init__(self):
        object.__setattr__(self, "spans", tuple(self.spans))
        words = caption_words(self.text)
        previous_end = 0
        for span in self.spans:
            if span.word_start < previous_end:
                raise ValueError(f"overlapping or unsorted span at word {span.word_start}")
            if span.word_end > len(words):
                raise ValueError(f"span [{span.word_start}, {span.word_end}) beyond caption")
            covered = " ".join(words[span.word_start : span.word_end])
            if span.text != covered:
                raise ValueError(f"span text {span.text!r} != caption words {covered!r}")
            previous_end = span.word_end


@dataclass(frozen=True)
class CategoryScore:
    """Precision/recall/F for one descriptor category of one pair."""

    precision: float
    recall: float
    f_score: float


@dataclass(frozen=True)
class ScoreReport:
    """Full per-pair breakdown of the metric.

    ``penalty`` is the amount actually subtracted, so the identity
    ``aces_1 == f_single - penalty`` holds on every path. On the
    no-overlap path with the embedding fallback enabled, ``f_single``
    holds the mean whole-caption similarity and ``fallback_used`` is set;
    with the fallback disabled both are zero.
    """

    per_category: dict[DescriptorLabel, CategoryScore]
    overlap_count: int
    f_single: float
    penalty: float
    aces_1: float
    fluency_probability: float
    fluency_flagged: bool
    fallback_used: bool
    final: float

    def __post_init__(self):
        if self.overlap_count != len(self.per_category):
            raise ValueError("overlap_count must equal the number of scored categories")

    def to_json_dict(self) -> dict:
        return {
            "per_category": {
                render_label(label): {
                    "precision": scores.precision,
                    "recall": scores.recall,
                    "f_score": scores.f_score,
                }
                for label, scores in self.per_category.items()
            },
            "overlap_count": self.overlap_count,
            "f_single": self.f_single,
            "penalty": self.penalty,
            "aces_1": self.aces_1,
            "fluency_probability": self.fluency_probability,
            "fluency_flagged": self.fluency_flagged,
            "fallback_used": self.fallback_used,
            "final": self.final,
        }


@dataclass(frozen=True)
class ScoreRequest:
    """One scoring job: a candidate caption against its references."""

    id: str
    candidate: str
    references: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "references", tuple(self.references))
        if not self.references:
            raise ValueError("references must be non-empty")
