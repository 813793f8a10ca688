"""Export model directories consumed by the scoring engine.

Each component becomes a directory holding a serialized graph, the
tokenizer files and a small metadata JSON:

    tagger/    model.pt [model.onnx]  tokenizer.json  labels.json
    embedder/  model.pt [model.onnx]  tokenizer.json  meta.json
    fluency/   model.pt [model.onnx]  tokenizer.json

Graphs take ``input_ids`` + ``attention_mask``. TorchScript (model.pt)
is always written; ONNX is written too when the onnx package is
installed. ``precision="fp16"`` halves the weights before serializing,
roughly halving the file size of real checkpoints.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Sequence

import torch
from torch import nn

from .labels import LABELS_10, LABELS_13

logger = logging.getLogger(__name__)

PRECISIONS = ("fp32", "fp16")
PARITY_THRESHOLDS = {"fp32": 0.99, "fp16": 0.98}


class ExportVerificationError(RuntimeError):
    """Exported graph disagrees with native inference beyond tolerance."""


class _TaggerGraph(nn.Module):
    def __init__(self, model):
        super().__init__()
        self.model = model

    def forward(self, input_ids, attention_mask):
        return self.model(input_ids=input_ids, attention_mask=attention_mask).logits


class _EmbedderGraph(nn.Module):
    """Mean pooling over the attention mask, then L2 normalization."""

    def __init__(self, model):
        super().__init__()
        self.model = model

    def forward(self, input_ids, attention_mask):
        hidden = self.model(input_ids=input_ids, attention_mask=attention_mask)[0]
        mask = attention_mask.unsqueeze(-1).to(hidden.dtype)
        pooled = (hidden * mask).sum(dim=1) / mask.sum(dim=1).clamp(min=1e-9)
        return pooled / pooled.norm(dim=-1, keepdim=True).clamp(min=1e-12)


class _FluencyGraph(nn.Module):
    """Per-head error probabilities from a sequence classifier.

    One logit -> sigmoid; two classes -> softmax probability of the
    error class; more heads -> independent sigmoids (multi-label).
    """

    def __init__(self, model, n_labels: int):
        super().__init__()
        self.model = model
        self.n_labels = n_labels

    def forward(self, input_ids, attention_mask):
        logits = self.model(input_ids=input_ids, attention_mask=attention_mask).logits
        if self.n_labels == 2:
            return torch.softmax(logits, dim=-1)[:, 1:2]
        return torch.sigmoid(logits)


def _example_inputs(tokenizer):
    encoding = tokenizer("typing on a keyboard in a quiet room", return_tensors="pt")
    return encoding["input_ids"], encoding["attention_mask"]


def _serialize(graph: nn.Module, tokenizer, out_dir: Path, output_name: str) -> list[str]:
    graph.eval()
    input_ids, attention_mask = _example_inputs(tokenizer)
    formats = []
    with torch.no_grad():
        traced = torch.jit.trace(graph, (input_ids, attention_mask), check_trace=False)
    torch.jit.save(traced, str(out_dir / "model.pt"))
    formats.append("torchscript")
    try:
        import onnx  # noqa: F401  (torch.onnx.export requires it)

        torch.onnx.export(
            graph,
            (input_ids, attention_mask),
            str(out_dir / "model.onnx"),
            input_names=["input_ids", "attention_mask"],
            output_names=[output_name],
            dynamic_axes={
                "input_ids": {0: "batch", 1: "sequence"},
                "attention_mask": {0: "batch", 1: "sequence"},
                output_name: {0: "batch"},
            },
            dynamo=False,
        )
        formats.append("onnx")
    except ImportError:
        logger.info("onnx not installed; wrote TorchScript only to %s", out_dir)
    return formats


def _prepare(model, precision: str):
    if precision not in PRECISIONS:
        raise ValueError(f"precision must be one of {PRECISIONS}")
    model = model.eval()
    return model.half() if precision == "fp16" else model.float()


def export_tagger(
    source: str | Path, out_dir: str | Path, precision: str = "fp32"
) -> dict:
    from transformers import AutoModelForTokenClassification, AutoTokenizer

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tokenizer = AutoTokenizer.from_pretrained(str(source))
    model = _prepare(AutoModelForTokenClassification.from_pretrained(str(source)), precision)

    id2label = model.config.id2label
    inventory = [id2label[index] for index in range(len(id2label))]
    if tuple(inventory) not in (LABELS_13, LABELS_10) and len(inventory) not in (10, 13):
        raise ExportVerificationError(
            f"checkpoint declares {len(inventory)} labels, expected 10 or 13"
        )
    formats = _serialize(_TaggerGraph(model), tokenizer, out_dir, "logits")
    tokenizer.save_pretrained(out_dir)
    with open(out_dir / "labels.json", "w", encoding="utf-8") as handle:
        json.dump({str(i): label for i, label in enumerate(inventory)}, handle, indent=2)
    return {"source": str(source), "precision": precision, "formats": formats}


def export_embedder(
    source: str | Path, out_dir: str | Path, precision: str = "fp32"
) -> dict:
    from transformers import AutoModel, AutoTokenizer

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tokenizer = AutoTokenizer.from_pretrained(str(source))
    model = _prepare(AutoModel.from_pretrained(str(source)), precision)
    formats = _serialize(_EmbedderGraph(model), tokenizer, out_dir, "sentence_embedding")
    tokenizer.save_pretrained(out_dir)
    with open(out_dir / "meta.json", "w", encoding="utf-8") as handle:
        json.dump({"dimension": int(model.config.hidden_size)}, handle)
    return {"source": str(source), "precision": precision, "formats": formats}


def export_fluency(
    source: str | Path, out_dir: str | Path, precision: str = "fp32"
) -> dict:
    from transformers import AutoModelForSequenceClassification, AutoTokenizer

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tokenizer = AutoTokenizer.from_pretrained(str(source))
    model = _prepare(
        AutoModelForSequenceClassification.from_pretrained(str(source)), precision
    )
    graph = _FluencyGraph(model, int(model.config.num_labels))
    formats = _serialize(graph, tokenizer, out_dir, "error_probs")
    tokenizer.save_pretrained(out_dir)
    return {"source": str(source), "precision": precision, "formats": formats}


def tagger_parity(
    source: str | Path, exported_dir: str | Path, probe_captions: Sequence[Sequence[str]]
) -> float:
    """Fraction of words whose argmax label agrees, native vs exported."""
    from transformers import AutoModelForTokenClassification, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(str(source))
    native = AutoModelForTokenClassification.from_pretrained(str(source)).eval()
    exported = torch.jit.load(str(Path(exported_dir) / "model.pt"), map_location="cpu")
    exported.eval()

    agree = 0
    total = 0
    with torch.no_grad():
        for words in probe_captions:
            encoding = tokenizer(
                list(words), is_split_into_words=True, truncation=True, return_tensors="pt"
            )
            native_argmax = native(**encoding).logits.argmax(dim=-1)[0].tolist()
            exported_argmax = (
                exported(encoding["input_ids"], encoding["attention_mask"])
                .float()
                .argmax(dim=-1)[0]
                .tolist()
            )
            seen: set[int] = set()
            for position, word_id in enumerate(encoding.word_ids(0)):
                if word_id is None or word_id in seen:
                    continue
                seen.add(word_id)
                total += 1
                if native_argmax[position] == exported_argmax[position]:
                    agree += 1
    return agree / total if total else 1.0


def export_models(
    tagger_source: str | Path,
    embedder_source: str | Path,
    fluency_source: str | Path,
    out_dir: str | Path,
    precision: str = "fp32",
    probe_captions: Sequence[Sequence[str]] | None = None,
) -> dict:
    """Export the full trio and write a manifest.

    When probe captions are given, tagger parity between native and
    exported inference is verified against the precision's threshold.
    """
    out_dir = Path(out_dir)
    manifest = {
        "precision": precision,
        "tagger": export_tagger(tagger_source, out_dir / "tagger", precision),
        "embedder": export_embedder(embedder_source, out_dir / "embedder", precision),
        "fluency": export_fluency(fluency_source, out_dir / "fluency", precision),
    }
    if probe_captions is not None:
        agreement = tagger_parity(tagger_source, out_dir / "tagger", probe_captions)
        manifest["tagger"]["parity"] = agreement
        threshold = PARITY_THRESHOLDS[precision]
        if agreement < threshold:
            raise ExportVerificationError(
                f"tagger parity {agreement:.4f} below {threshold} for {precision}"
            )
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2)
    return manifest
