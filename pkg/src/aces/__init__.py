"""Audio-caption evaluation on sound-descriptor semantics.

Captions are tagged into sound-descriptor categories (who makes the
sound, what vibrates, how, where, when, ...), category token groups are
matched by embedding similarity with recall-weighted F scoring, a small
entity-count penalty rewards descriptive captions, and a fluency flag
halves the score of broken sentences. A pairwise benchmark harness
measures agreement with human caption preferences.
"""

from .benchmark import (
    BenchmarkReport,
    EvalItem,
    benchmark_accuracy,
    judge_pair,
    load_eval_set,
)
from .config import AcesConfig, load_config, parse_config, save_config, validate_config
from .embedder import HashEmbedderBackend, PresetEmbedderBackend, embed_text, similarity
from .fluency import StubFluencyBackend, fluency_error_probability, fluency_flag
from .labels import ALL_LABELS, TEN_LABEL_INVENTORY, DescriptorLabel, parse_label, render_label
from .scoring import (
    NO_OVERLAP,
    Backends,
    aces_pair,
    category_pr_re,
    corpus_score,
    f_beta,
    f_single,
    merge_reference_groups,
    overlap_penalty,
)
from .stubs import demo_stub_backends, load_stub_backends
from .tagger import StubTaggerBackend, aggregate_subtokens, group_by_label, tag_caption
from .types import CategoryScore, ScoreReport, ScoreRequest, TaggedCaption, TaggedSpan

__version__ = "0.1.0"

__all__ = [
    "AcesConfig",
    "ALL_LABELS",
    "Backends",
    "BenchmarkReport",
    "CategoryScore",
    "DescriptorLabel",
    "EvalItem",
    "HashEmbedderBackend",
    "NO_OVERLAP",
    "PresetEmbedderBackend",
    "ScoreReport",
    "ScoreRequest",
    "StubFluencyBackend",
    "StubTaggerBackend",
    "TEN_LABEL_INVENTORY",
    "TaggedCaption",
    "TaggedSpan",
    "aces_pair",
    "aggregate_subtokens",
    "benchmark_accuracy",
    "category_pr_re",
    "corpus_score",
    "demo_stub_backends",
    "embed_text",
    "f_beta",
    "f_single",
    "fluency_error_probability",
    "fluency_flag",
    "group_by_label",
    "judge_pair",
    "load_config",
    "load_eval_set",
    "load_stub_backends",
    "merge_reference_groups",
    "overlap_penalty",
    "parse_config",
    "parse_label",
    "render_label",
    "save_config",
    "similarity",
    "tag_caption",
    "validate_config",
]
