"""Training and export pipeline for the audio-caption evaluation engine.

Fine-tunes the sound-descriptor word classifier on annotated captions,
reports per-category F1, and exports tagger/embedder/fluency model
directories in the layout the scoring engine loads.
"""

from .data import (
    LabeledCaption,
    cohen_kappa,
    dedup_captions,
    load_labeled_captions,
    save_labeled_captions,
    train_test_split,
)
from .evaluation import F1Table, evaluate_classifier, predict_word_labels, token_f1
from .export import (
    ExportVerificationError,
    export_embedder,
    export_fluency,
    export_models,
    export_tagger,
    tagger_parity,
)
from .labels import LABELS_10, LABELS_13
from .training import TrainConfig, TrainResult, finetune_token_classifier

__version__ = "0.1.0"

__all__ = [
    "ExportVerificationError",
    "F1Table",
    "LABELS_10",
    "LABELS_13",
    "LabeledCaption",
    "TrainConfig",
    "TrainResult",
    "cohen_kappa",
    "dedup_captions",
    "evaluate_classifier",
    "export_embedder",
    "export_fluency",
    "export_models",
    "export_tagger",
    "finetune_token_classifier",
    "load_labeled_captions",
    "predict_word_labels",
    "save_labeled_captions",
    "tagger_parity",
    "token_f1",
    "train_test_split",
]
