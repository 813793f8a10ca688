"""Token-level F1 evaluation of a trained classifier.

F1 is computed at the word level against the gold labels: micro-averaged
over all categories except O, plus the per-category scores reported for
HOW / WHAT / WHERE / WHO. Scores are percentages.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .data import DataError, LabeledCaption
from .labels import REPORTED_CATEGORIES


@dataclass(frozen=True)
class F1Table:
    overall: float
    per_category: dict[str, float]

    def to_json_dict(self) -> dict:
        return {"overall": self.overall, **self.per_category}


def _f1(tp: int, fp: int, fn: int) -> float:
    denominator = 2 * tp + fp + fn
    if denominator == 0:
        return 0.0
    return 100.0 * 2 * tp / denominator


def token_f1(gold: Sequence[Sequence[str]], predicted: Sequence[Sequence[str]]) -> F1Table:
    """Word-level F1 from parallel gold/predicted label sequences."""
    if len(gold) != len(predicted):
        raise DataError("gold and predicted caption counts differ")
    tp: dict[str, int] = {}
    fp: dict[str, int] = {}
    fn: dict[str, int] = {}
    for gold_labels, predicted_labels in zip(gold, predicted):
        if len(gold_labels) != len(predicted_labels):
            raise DataError("caption label lengths differ")
        for gold_label, predicted_label in zip(gold_labels, predicted_labels):
            if gold_label == predicted_label:
                tp[gold_label] = tp.get(gold_label, 0) + 1
            else:
                fp[predicted_label] = fp.get(predicted_label, 0) + 1
                fn[gold_label] = fn.get(gold_label, 0) + 1

    scored = {label for label in (*tp, *fp, *fn) if label != "O"}
    overall = _f1(
        sum(tp.get(label, 0) for label in scored),
        sum(fp.get(label, 0) for label in scored),
        sum(fn.get(label, 0) for label in scored),
    )
    per_category = {
        label: _f1(tp.get(label, 0), fp.get(label, 0), fn.get(label, 0))
        for label in REPORTED_CATEGORIES
    }
    return F1Table(overall=overall, per_category=per_category)


def predict_word_labels(model, tokenizer, captions: Sequence[LabeledCaption]) -> list[list[str]]:
    """First-subtoken argmax label for every word of every caption."""
    import torch

    id2label = model.config.id2label
    model.eval()
    predictions = []
    with torch.no_grad():
        for caption in captions:
            encoding = tokenizer(
                list(caption.words),
                is_split_into_words=True,
                truncation=True,
                return_tensors="pt",
            )
            logits = model(**encoding).logits[0]
            argmax = logits.argmax(dim=-1).tolist()
            word_ids = encoding.word_ids(0)
            labels = ["O"] * len(caption.words)
            seen: set[int] = set()
            for position, word_id in enumerate(word_ids):
                if word_id is None or word_id in seen:
                    continue
                seen.add(word_id)
                labels[word_id] = id2label[argmax[position]]
            predictions.append(labels)
    return predictions


def evaluate_classifier(model, tokenizer, test_split: Sequence[LabeledCaption]) -> F1Table:
    """F1 table of a classifier on held-out captions."""
    predicted = predict_word_labels(model, tokenizer, test_split)
    return token_f1([caption.labels for caption in test_split], predicted)
