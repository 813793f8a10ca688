"""Fine-tuning of the word-category classifier.

A pretrained encoder gets a token-classification head and is fine-tuned
with AdamW (weight decay on) for a fixed number of epochs on an 80/20
caption split. Only the first subtoken of each word carries the word's
label; continuation subtokens are masked out of the loss.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .data import DataError, LabeledCaption, dedup_captions, train_test_split
from .evaluation import F1Table, evaluate_classifier
from .labels import LABELS_13

logger = logging.getLogger(__name__)

MIN_DATASET_SIZE = 50
IGNORED_LABEL_ID = -100


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 2e-5
    weight_decay: float = 0.01
    epochs: int = 5
    train_fraction: float = 0.8
    seed: int = 0
    batch_size: int = 16
    label_inventory: tuple[str, ...] = LABELS_13


@dataclass
class TrainResult:
    model: object
    tokenizer: object
    metrics: F1Table
    n_train: int
    n_test: int
    checkpoint_dir: Path | None


def encode_batch(tokenizer, captions: Sequence[LabeledCaption], label2id: dict[str, int]):
    """Tokenize captions and align labels to first subtokens."""
    import torch

    encoding = tokenizer(
        [list(caption.words) for caption in captions],
        is_split_into_words=True,
        truncation=True,
        padding=True,
        return_tensors="pt",
    )
    label_rows = []
    for row, caption in enumerate(captions):
        word_ids = encoding.word_ids(row)
        row_labels = []
        previous = None
        for word_id in word_ids:
            if word_id is None or word_id == previous:
                row_labels.append(IGNORED_LABEL_ID)
            else:
                row_labels.append(label2id[caption.labels[word_id]])
            previous = word_id
        label_rows.append(row_labels)
    encoding["labels"] = torch.tensor(label_rows, dtype=torch.long)
    return encoding


def finetune_token_classifier(
    dataset: Sequence[LabeledCaption],
    base_model_name: str | Path,
    config: TrainConfig = TrainConfig(),
    output_dir: str | Path | None = None,
) -> TrainResult:
    """Fine-tune, evaluate on the held-out split, optionally save.

    Duplicate captions are filtered before splitting; datasets smaller
    than 50 unique captions abort.
    """
    import torch
    from transformers import AutoModelForTokenClassification, AutoTokenizer

    dataset = dedup_captions(dataset)
    if len(dataset) < MIN_DATASET_SIZE:
        raise DataError(
            f"dataset has {len(dataset)} unique captions, need >= {MIN_DATASET_SIZE}"
        )
    inventory = config.label_inventory
    bad = {label for caption in dataset for label in caption.labels} - set(inventory)
    if bad:
        raise DataError(f"dataset labels {sorted(bad)} missing from the inventory")

    train_set, test_set = train_test_split(dataset, config.train_fraction, config.seed)
    logger.info("training on %d captions, evaluating on %d", len(train_set), len(test_set))

    id2label = {index: label for index, label in enumerate(inventory)}
    label2id = {label: index for index, label in id2label.items()}
    tokenizer = AutoTokenizer.from_pretrained(str(base_model_name))
    model = AutoModelForTokenClassification.from_pretrained(
        str(base_model_name),
        num_labels=len(inventory),
        id2label=id2label,
        label2id=label2id,
        ignore_mismatched_sizes=True,
    )

    torch.manual_seed(config.seed)
    optimizer = torch.optim.AdamW(
        model.parameters(), lr=config.learning_rate, weight_decay=config.weight_decay
    )
    order = list(range(len(train_set)))
    shuffler = torch.Generator().manual_seed(config.seed)
    model.train()
    for epoch in range(config.epochs):
        permutation = torch.randperm(len(order), generator=shuffler).tolist()
        epoch_loss = 0.0
        for start in range(0, len(permutation), config.batch_size):
            batch = [train_set[i] for i in permutation[start : start + config.batch_size]]
            encoding = encode_batch(tokenizer, batch, label2id)
            optimizer.zero_grad()
            loss = model(**encoding).loss
            loss.backward()
            optimizer.step()
            epoch_loss += float(loss.detach())
        logger.info("epoch %d loss %.4f", epoch + 1, epoch_loss)

    metrics = evaluate_classifier(model, tokenizer, test_set)
    logger.info("held-out overall F1 %.1f", metrics.overall)

    checkpoint_dir = None
    if output_dir is not None:
        checkpoint_dir = Path(output_dir)
        checkpoint_dir.mkdir(parents=True, exist_ok=True)
        model.save_pretrained(checkpoint_dir)
        tokenizer.save_pretrained(checkpoint_dir)

    return TrainResult(
        model=model,
        tokenizer=tokenizer,
        metrics=metrics,
        n_train=len(train_set),
        n_test=len(test_set),
        checkpoint_dir=checkpoint_dir,
    )
