"""Pairwise human-agreement harness.

Each evaluation item holds two candidate captions, shared references and
the human majority choice, in one of four pair categories: both captions
human-written for the same sound (HC), a mismatched human caption (HI),
human vs machine (HM), machine vs machine (MM). A metric agrees with the
humans when it assigns the strictly higher score to their choice; ties
count as disagreement and are reported separately.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from .errors import (
    EmptyCorpusError,
    MetricEvaluationError,
    NonFiniteScoreError,
    ParseError,
    ValidationError,
)

CATEGORIES = ("HC", "HI", "HM", "MM")
CHOICES = ("A", "B")

# metric(caption_a, caption_b, references) -> (score_a, score_b)
PairMetric = Callable[[str, str, Sequence[str]], tuple[float, float]]


@dataclass(frozen=True)
class EvalItem:
    id: str
    caption_a: str
    caption_b: str
    references: tuple[str, ...]
    category: str
    human_choice: str

    def __post_init__(self):
        object.__setattr__(self, "references", tuple(self.references))
        if not self.references:
            raise ValueError("references must be non-empty")
        if self.category not in CATEGORIES:
            raise ValueError(f"category must be one of {CATEGORIES}")
        if self.human_choice not in CHOICES:
            raise ValueError(f"human_choice must be one of {CHOICES}")


@dataclass(frozen=True)
class CategoryAccuracy:
    n_items: int
    n_correct: int

    @property
    def percent(self) -> float:
        return 100.0 * self.n_correct / self.n_items if self.n_items else 0.0


@dataclass(frozen=True)
class BenchmarkReport:
    """Per-category and pooled agreement with the human choices.

    ``total`` is the accuracy over all items pooled, not the mean of the
    category accuracies (category sizes differ).
    """

    per_category: dict[str, CategoryAccuracy]
    total: float
    n_items: int
    n_ties: int
    per_item: tuple[dict, ...] = field(default=(), repr=False)

    def to_json_dict(self) -> dict:
        return {
            "per_category": {
                category: {
                    "accuracy": accuracy.percent,
                    "n_items": accuracy.n_items,
                    "n_correct": accuracy.n_correct,
                }
                for category, accuracy in self.per_category.items()
            },
            "total": self.total,
            "n_items": self.n_items,
            "n_ties": self.n_ties,
        }

    def to_table(self) -> str:
        rows = [("category", "items", "correct", "accuracy")]
        for category, accuracy in self.per_category.items():
            rows.append(
                (
                    category,
                    str(accuracy.n_items),
                    str(accuracy.n_correct),
                    f"{accuracy.percent:.1f}",
                )
            )
        rows.append(("Total", str(self.n_items), "", f"{self.total:.1f}"))
        widths = [max(len(row[col]) for row in rows) for col in range(4)]
        lines = ["  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in rows]
        lines.append(f"ties: {self.n_ties}")
        return "\n".join(lines)


def _validate_item(record: dict, line: int) -> EvalItem:
    for key in ("id", "caption_a", "caption_b", "references", "category", "human_choice"):
        if key not in record:
            raise ValidationError(line, f"missing field {key!r}")
    references = record["references"]
    if not isinstance(references, list) or not references:
        raise ValidationError(line, "references must be a non-empty list")
    if not all(isinstance(ref, str) and ref for ref in references):
        raise ValidationError(line, "references must be non-empty strings")
    category = str(record["category"]).upper()
    if category not in CATEGORIES:
        raise ValidationError(line, f"category must be one of {CATEGORIES}")
    choice = str(record["human_choice"]).upper()
    if choice not in CHOICES:
        raise ValidationError(line, f"human_choice must be one of {CHOICES}")
    return EvalItem(
        id=str(record["id"]),
        caption_a=str(record["caption_a"]),
        caption_b=str(record["caption_b"]),
        references=tuple(references),
        category=category,
        human_choice=choice,
    )


def load_eval_set(path: str | Path) -> list[EvalItem]:
    """Read a JSON Lines evaluation set; malformed rows name their line."""
    items = []
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(line_number, exc.msg) from exc
            if not isinstance(record, dict):
                raise ValidationError(line_number, "expected a JSON object")
            items.append(_validate_item(record, line_number))
    return items


def save_eval_set(items: Sequence[EvalItem], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for item in items:
            handle.write(
                json.dumps(
                    {
                        "id": item.id,
                        "caption_a": item.caption_a,
                        "caption_b": item.caption_b,
                        "references": list(item.references),
                        "category": item.category,
                        "human_choice": item.human_choice,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def judge_pair(score_a: float, score_b: float) -> str:
    """Which caption the metric prefers: 'A', 'B', or 'Tie'."""
    if not (math.isfinite(score_a) and math.isfinite(score_b)):
        raise NonFiniteScoreError(f"scores ({score_a}, {score_b})")
    if score_a > score_b:
        return "A"
    if score_b > score_a:
        return "B"
    return "Tie"


def benchmark_accuracy(
    items: Sequence[EvalItem],
    metric: PairMetric,
    keep_per_item: bool = False,
) -> BenchmarkReport:
    """Agreement between a metric and the human choices.

    Items are scored independently, so any evaluation order produces the
    same report. Metric failures are re-raised with the item id attached.
    """
    if not items:
        raise EmptyCorpusError("no evaluation items")
    counts = {category: [0, 0] for category in CATEGORIES}  # [items, correct]
    n_ties = 0
    n_correct = 0
    per_item = []
    for item in items:
        try:
            score_a, score_b = metric(item.caption_a, item.caption_b, item.references)
            verdict = judge_pair(score_a, score_b)
        except Exception as exc:
            raise MetricEvaluationError(f"item {item.id}: {exc}") from exc
        if verdict == "Tie":
            n_ties += 1
        correct = verdict == item.human_choice
        counts[item.category][0] += 1
        if correct:
            counts[item.category][1] += 1
            n_correct += 1
        if keep_per_item:
            per_item.append(
                {
                    "id": item.id,
                    "category": item.category,
                    "score_a": score_a,
                    "score_b": score_b,
                    "verdict": verdict,
                    "human_choice": item.human_choice,
                    "correct": correct,
                }
            )
    per_category = {
        category: CategoryAccuracy(n_items=pair[0], n_correct=pair[1])
        for category, pair in counts.items()
        if pair[0] > 0
    }
    return BenchmarkReport(
        per_category=per_category,
        total=100.0 * n_correct / len(items),
        n_items=len(items),
        n_ties=n_ties,
        per_item=tuple(per_item),
    )
