"""The metric core: category precision/recall, recall-weighted F, penalty
and the final per-pair and corpus scores.

Similarities are used as-is and may in principle be negative under the
cosine technique; real sentence-embedding similarities on caption text
are empirically positive, so scores land in [0, 1] minus at most the
small entity-count penalty.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .config import AcesConfig, validate_config
from .embedder import EmbedderBackend, embed_text, similarity
from .errors import (
    EmptyCorpusError,
    EmptyGroupError,
    EmptyReferencesError,
    EmptyTextError,
    OverlapOutOfRangeError,
)
from .fluency import FluencyBackend, fluency_error_probability, fluency_flag
from .labels import DescriptorLabel
from .tagger import TaggerBackend, group_by_label, tag_caption
from .types import CategoryScore, DescriptorGroups, ScoreReport


class _NoOverlap:
    """Sentinel: candidate and reference descriptor sets are disjoint."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "NO_OVERLAP"


NO_OVERLAP = _NoOverlap()


@dataclass(frozen=True)
class Backends:
    """The three model backends one scoring call needs."""

    tagger: TaggerBackend
    embedder: EmbedderBackend
    fluency: FluencyBackend


def merge_reference_groups(refs: Sequence[DescriptorGroups]) -> DescriptorGroups:
    """Concatenate the per-category token lists of all references.

    Order within each category follows reference order; duplicates stay.
    """
    merged: DescriptorGroups = {}
    for groups in refs:
        for label, tokens in groups.items():
            merged.setdefault(label, []).extend(tokens)
    return merged


def _embed_cached(
    text: str, backend: EmbedderBackend, cache: dict[str, np.ndarray] | None
) -> np.ndarray:
    if cache is None:
        return embed_text(text, backend)
    vector = cache.get(text)
    if vector is None:
        vector = embed_text(text, backend)
        cache[text] = vector
    return vector


def category_pr_re(
    cand_tokens: Sequence[str],
    ref_tokens: Sequence[str],
    backend: EmbedderBackend,
    technique: str = "cosine",
    cache: dict[str, np.ndarray] | None = None,
) -> tuple[float, float]:
    """Max-mean precision and recall for one shared category.

    Each token string is embedded independently; precision averages the
    best candidate match per reference token, recall the best reference
    match per candidate token.
    """
    if not cand_tokens or not ref_tokens:
        raise EmptyGroupError("both token groups must be non-empty")
    cand_matrix = np.stack([_embed_cached(t, backend, cache) for t in cand_tokens])
    ref_matrix = np.stack([_embed_cached(t, backend, cache) for t in ref_tokens])
    return kernels.pr_re(cand_matrix, ref_matrix, technique)


def f_beta(precision: float, recall: float, beta: float = 9.0) -> float:
    """Recall-weighted F: ((1 + beta) * Pr * Re) / (Re + beta * Pr).

    beta is the recall:precision sensitivity ratio; 0 when both are 0.
    """
    denominator = recall + beta * precision
    if denominator == 0.0:
        return 0.0
    return (1.0 + beta) * precision * recall / denominator


def _category_scores(
    cand: DescriptorGroups,
    refs_merged: DescriptorGroups,
    backend: EmbedderBackend,
    config: AcesConfig,
    cache: dict[str, np.ndarray] | None = None,
) -> dict[DescriptorLabel, CategoryScore]:
    scores: dict[DescriptorLabel, CategoryScore] = {}
    for label, cand_tokens in cand.items():
        ref_tokens = refs_merged.get(label)
        if not ref_tokens:
            continue
        precision, recall = category_pr_re(
            cand_tokens, ref_tokens, backend, config.distance_technique, cache
        )
        scores[label] = CategoryScore(
            precision=precision,
            recall=recall,
            f_score=f_beta(precision, recall, config.f_beta),
        )
    return scores


def f_single(
    cand: DescriptorGroups,
    refs_merged: DescriptorGroups,
    backend: EmbedderBackend,
    config: AcesConfig,
) -> float | _NoOverlap:
    """Mean F over the categories present on both sides, or NO_OVERLAP."""
    scores = _category_scores(cand, refs_merged, backend, config)
    if not scores:
        return NO_OVERLAP
    return sum(score.f_score for score in scores.values()) / len(scores)


def overlap_penalty(overlap_count: int, config: AcesConfig) -> float:
    """Entity-count penalty: (L - overlap) / L / penalty_score.

    L is the total number of descriptor categories; the penalty nudges
    the metric toward captions that cover more categories. Zero when
    disabled.
    """
    if not 0 <= overlap_count <= config.total_labels:
        raise OverlapOutOfRangeError(
            f"overlap {overlap_count} outside [0, {config.total_labels}]"
        )
    if not config.apply_penalty:
        return 0.0
    return (config.total_labels - overlap_count) / config.total_labels / config.penalty_score


def aces_pair(
    candidate: str,
    references: Sequence[str],
    backends: Backends,
    config: AcesConfig | None = None,
) -> ScoreReport:
    """Score one candidate caption against its reference captions.

    Pipeline: tag both sides, group by category, merge the references,
    average the per-category recall-weighted F, subtract the entity-count
    penalty, then damp by the fluency flag. When no category is shared,
    either fall back to whole-caption embedding similarity (minus the
    penalty) or return 0, per config.
    """
    if not candidate or not candidate.strip():
        raise EmptyTextError("candidate caption is empty")
    references = list(references)
    if not references:
        raise EmptyReferencesError("at least one reference caption is required")
    config = validate_config(config if config is not None else AcesConfig())

    cache: dict[str, np.ndarray] = {}
    cand_groups = group_by_label(
        tag_caption(candidate, backends.tagger, config.average_strategy), config
    )
    ref_groups = [
        group_by_label(tag_caption(ref, backends.tagger, config.average_strategy), config)
        for ref in references
    ]
    merged = merge_reference_groups(ref_groups)

    per_category = _category_scores(cand_groups, merged, backends.embedder, config, cache)
    fallback_used = False
    if per_category:
        f_single_value = sum(s.f_score for s in per_category.values()) / len(per_category)
        penalty = overlap_penalty(len(per_category), config)
    elif config.sbert_fallback:
        candidate_vector = _embed_cached(candidate, backends.embedder, cache)
        sims = [
            similarity(
                candidate_vector,
                _embed_cached(ref, backends.embedder, cache),
                config.distance_technique,
            )
            for ref in references
        ]
        f_single_value = sum(sims) / len(sims)
        penalty = overlap_penalty(0, config)
        fallback_used = True
    else:
        f_single_value = 0.0
        penalty = 0.0
    aces_1 = f_single_value - penalty

    probability = fluency_error_probability(candidate, backends.fluency)
    flagged = fluency_flag(probability, config.fluency_threshold)
    final = aces_1 - config.fluency_weight * flagged * aces_1

    return ScoreReport(
        per_category=per_category,
        overlap_count=len(per_category),
        f_single=f_single_value,
        penalty=penalty,
        aces_1=aces_1,
        fluency_probability=probability,
        fluency_flagged=bool(flagged),
        fallback_used=fallback_used,
        final=final,
    )


def corpus_score(pairs: Sequence[ScoreReport]) -> float:
    """Arithmetic mean of the per-pair final scores."""
    if not pairs:
        raise EmptyCorpusError("no score reports to average")
    return sum(report.final for report in pairs) / len(pairs)
