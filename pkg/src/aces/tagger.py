"""Word-level descriptor tagging.

A tagger backend turns a list of normalized caption words into subtoken
predictions; this module aggregates those to one label per word, merges
adjacent same-label words into spans, and regroups span texts by label.
Words that receive no subtokens (pure punctuation) are labeled O.

Labels are plain per-word categories; models emitting BIO-style tags
would need an adapter in front of the span merge.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping, Protocol, Sequence

from .config import AVERAGE_STRATEGIES, AcesConfig
from .errors import ConfigError, EmptyGroupError
from .labels import ALL_LABELS, DescriptorLabel, parse_label
from .types import DescriptorGroups, TaggedCaption, TaggedSpan, caption_words

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SubtokenPrediction:
    """Softmax scores over the label inventory for one subtoken."""

    subtoken_text: str
    word_index: int
    label_scores: Mapping[DescriptorLabel, float]


class TaggerBackend(Protocol):
    label_inventory: tuple[DescriptorLabel, ...]
    max_sequence_length: int

    def predict(self, words: Sequence[str]) -> list[SubtokenPrediction]: ...


class StubTaggerBackend:
    """Deterministic word -> label lookup table with one-hot scores.

    Words absent from the table (and empty normalized words) get no
    subtoken, so they end up labeled O. One subtoken per word.
    """

    def __init__(
        self,
        table: Mapping[str, DescriptorLabel | str],
        label_inventory: Sequence[DescriptorLabel] = ALL_LABELS,
        max_sequence_length: int = 512,
    ):
        self.table: dict[str, DescriptorLabel] = {
            word.lower(): label if isinstance(label, DescriptorLabel) else parse_label(label)
            for word, label in table.items()
        }
        self.label_inventory = tuple(label_inventory)
        self.max_sequence_length = max_sequence_length

    def _one_hot(self, label: DescriptorLabel) -> dict[DescriptorLabel, float]:
        return {each: 1.0 if each is label else 0.0 for each in self.label_inventory}

    def predict(self, words: Sequence[str]) -> list[SubtokenPrediction]:
        predictions = []
        consumed = 0
        for index, word in enumerate(words):
            if not word:
                continue
            if consumed >= self.max_sequence_length:
                logger.warning(
                    "caption exceeds %d subtokens; truncating", self.max_sequence_length
                )
                break
            consumed += 1
            label = self.table.get(word)
            if label is None:
                continue
            predictions.append(
                SubtokenPrediction(
                    subtoken_text=word,
                    word_index=index,
                    label_scores=self._one_hot(label),
                )
            )
        return predictions


def _argmax(scores: Mapping[DescriptorLabel, float]) -> tuple[DescriptorLabel, float]:
    # First label wins ties; mapping order is the backend's inventory order.
    best_label = None
    best_score = float("-inf")
    for label, score in scores.items():
        if score > best_score:
            best_label, best_score = label, score
    if best_label is None:
        raise EmptyGroupError("subtoken prediction with no label scores")
    return best_label, best_score


def aggregate_subtokens(
    predictions: Sequence[SubtokenPrediction], strategy: str
) -> dict[int, tuple[DescriptorLabel, float]]:
    """Collapse subtoken predictions to one (label, confidence) per word.

    first: the first subtoken's argmax, confidence = its winning score.
    max: the label of the single highest score anywhere in the word.
    average: argmax of the per-label mean, confidence = the winning mean.
    simple: per-subtoken argmax then majority vote (ties -> the first
    subtoken's argmax), confidence = the majority share.
    """
    strategy = strategy.lower()
    if strategy not in AVERAGE_STRATEGIES:
        raise ConfigError("average_strategy", f"must be one of {AVERAGE_STRATEGIES}")

    groups: dict[int, list[SubtokenPrediction]] = {}
    for prediction in predictions:
        groups.setdefault(prediction.word_index, []).append(prediction)

    result: dict[int, tuple[DescriptorLabel, float]] = {}
    for word_index, group in groups.items():
        if strategy == "first":
            result[word_index] = _argmax(group[0].label_scores)
        elif strategy == "max":
            best = max((_argmax(p.label_scores) for p in group), key=lambda pair: pair[1])
            result[word_index] = best
        elif strategy == "average":
            order = list(group[0].label_scores)
            means = {
                label: sum(p.label_scores.get(label, 0.0) for p in group) / len(group)
                for label in order
            }
            result[word_index] = _argmax(means)
        else:  # simple: majority vote over per-subtoken argmaxes
            votes: dict[DescriptorLabel, int] = {}
            for prediction in group:
                label, _ = _argmax(prediction.label_scores)
                votes[label] = votes.get(label, 0) + 1
            top = max(votes.values())
            winners = [label for label, count in votes.items() if count == top]
            if len(winners) == 1:
                winner = winners[0]
            else:
                winner, _ = _argmax(group[0].label_scores)
            result[word_index] = (winner, votes[winner] / len(group))
    return result


def tag_caption(text: str, backend: TaggerBackend, strategy: str = "max") -> TaggedCaption:
    """Label every word of a caption and merge adjacent same-label words.

    Every word gets exactly one label; O-labeled words produce no span;
    the empty caption yields zero spans.
    """
    words = caption_words(text)
    if not words:
        return TaggedCaption(text=text, spans=())

    predictions = backend.predict(words)
    per_word = aggregate_subtokens(predictions, strategy)
    labels = [per_word.get(i, (DescriptorLabel.O, 1.0)) for i in range(len(words))]

    spans = []
    start = 0
    while start < len(words):
        label = labels[start][0]
        end = start + 1
        while end < len(words) and labels[end][0] is label:
            end += 1
        if label is not DescriptorLabel.O:
            confidences = [labels[i][1] for i in range(start, end)]
            spans.append(
                TaggedSpan(
                    text=" ".join(words[start:end]),
                    label=label,
                    word_start=start,
                    word_end=end,
                    confidence=min(1.0, sum(confidences) / len(confidences)),
                )
            )
        start = end
    return TaggedCaption(text=text, spans=tuple(spans))


def group_by_label(tagged: TaggedCaption, config: AcesConfig | None = None) -> DescriptorGroups:
    """Regroup span texts by label, in caption order.

    O never appears; OTHER is excluded unless the config opts in.
    """
    include_other = bool(config and config.include_other_label)
    groups: DescriptorGroups = {}
    for span in tagged.spans:
        if span.label is DescriptorLabel.O:
            continue
        if span.label is DescriptorLabel.OTHER and not include_other:
            continue
        groups.setdefault(span.label, []).append(span.text)
    return groups
