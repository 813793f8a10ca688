"""Backends over exported model directories.

A model directory holds a serialized graph plus its tokenizer files and
a small metadata JSON:

    tagger/    model.onnx|model.pt  tokenizer.json  labels.json
    embedder/  model.onnx|model.pt  tokenizer.json  meta.json
    fluency/   model.onnx|model.pt  tokenizer.json

Graph inputs are ``input_ids`` and ``attention_mask``; outputs are
``logits`` [batch, seq, n_labels] for the tagger, ``sentence_embedding``
[batch, D] for the embedder and ``error_probs`` [batch, k] for the
fluency detector. ``labels.json`` maps label index to category name.

ONNX graphs run through onnxruntime; ``model.pt`` is the TorchScript
flavor of the same contract for environments without an ONNX runtime.
Both runtimes load lazily so the stub-backed paths never import them.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import InferenceError
from .labels import DescriptorLabel, parse_label
from .tagger import SubtokenPrediction

logger = logging.getLogger(__name__)

MAX_SEQUENCE_LENGTH = 512


class _OnnxSession:
    def __init__(self, path: Path):
        try:
            import onnxruntime
        except ImportError as exc:
            raise InferenceError(
                f"{path} requires onnxruntime; install the 'models' extra"
            ) from exc
        self._session = onnxruntime.InferenceSession(
            str(path), providers=["CPUExecutionProvider"]
        )

    def run(self, output_name: str, input_ids: np.ndarray, attention_mask: np.ndarray) -> np.ndarray:
        outputs = self._session.run(
            [output_name],
            {"input_ids": input_ids, "attention_mask": attention_mask},
        )
        return np.asarray(outputs[0])


class _TorchscriptSession:
    def __init__(self, path: Path):
        try:
            import torch
        except ImportError as exc:
            raise InferenceError(f"{path} requires torch for the TorchScript flavor") from exc
        self._torch = torch
        self._module = torch.jit.load(str(path), map_location="cpu")
        self._module.eval()

    def run(self, output_name: str, input_ids: np.ndarray, attention_mask: np.ndarray) -> np.ndarray:
        with self._torch.no_grad():
            result = self._module(
                self._torch.from_numpy(input_ids), self._torch.from_numpy(attention_mask)
            )
        return result.to(self._torch.float32).numpy()


def _load_session(model_dir: Path):
    onnx_path = model_dir / "model.onnx"
    if onnx_path.exists():
        return _OnnxSession(onnx_path)
    torchscript_path = model_dir / "model.pt"
    if torchscript_path.exists():
        return _TorchscriptSession(torchscript_path)
    raise InferenceError(f"no model.onnx or model.pt in {model_dir}")


def _load_tokenizer(model_dir: Path):
    tokenizer_path = model_dir / "tokenizer.json"
    if not tokenizer_path.exists():
        raise InferenceError(f"missing tokenizer.json in {model_dir}")
    try:
        from tokenizers import Tokenizer
    except ImportError as exc:
        raise InferenceError("model directories require the 'tokenizers' package") from exc
    return Tokenizer.from_file(str(tokenizer_path))


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


class ExportedTaggerBackend:
    """Token-classification graph + tokenizer + label inventory."""

    def __init__(self, model_dir: str | Path, max_sequence_length: int = MAX_SEQUENCE_LENGTH):
        model_dir = Path(model_dir)
        self._session = _load_session(model_dir)
        self._tokenizer = _load_tokenizer(model_dir)
        labels_path = model_dir / "labels.json"
        if not labels_path.exists():
            raise InferenceError(f"missing labels.json in {model_dir}")
        with open(labels_path, encoding="utf-8") as handle:
            raw = json.load(handle)
        self.label_inventory: tuple[DescriptorLabel, ...] = tuple(
            parse_label(raw[str(index)]) for index in range(len(raw))
        )
        if len(self.label_inventory) not in (10, 13):
            raise InferenceError(
                f"label inventory has {len(self.label_inventory)} entries, expected 10 or 13"
            )
        self.max_sequence_length = max_sequence_length

    def predict(self, words: Sequence[str]) -> list[SubtokenPrediction]:
        present = [(index, word) for index, word in enumerate(words) if word]
        if not present:
            return []
        encoding = self._tokenizer.encode([word for _, word in present], is_pretokenized=True)
        if len(encoding.ids) > self.max_sequence_length:
            logger.warning(
                "caption exceeds %d subtokens; truncating", self.max_sequence_length
            )
        ids = encoding.ids[: self.max_sequence_length]
        word_ids = encoding.word_ids[: self.max_sequence_length]
        subtokens = encoding.tokens[: self.max_sequence_length]

        input_ids = np.asarray([ids], dtype=np.int64)
        attention_mask = np.ones_like(input_ids)
        logits = self._session.run("logits", input_ids, attention_mask)
        if logits.shape[-1] != len(self.label_inventory):
            raise InferenceError(
                f"model emits {logits.shape[-1]} labels, labels.json lists "
                f"{len(self.label_inventory)}"
            )
        scores = _softmax(logits.astype(np.float64))[0]

        predictions = []
        for position, word_id in enumerate(word_ids):
            if word_id is None:  # special token
                continue
            original_index = present[word_id][0]
            predictions.append(
                SubtokenPrediction(
                    subtoken_text=subtokens[position],
                    word_index=original_index,
                    label_scores={
                        label: float(scores[position, column])
                        for column, label in enumerate(self.label_inventory)
                    },
                )
            )
        return predictions


class ExportedEmbedderBackend:
    """Sentence-embedding graph; pooling and normalization live in the graph."""

    def __init__(self, model_dir: str | Path, max_sequence_length: int = MAX_SEQUENCE_LENGTH):
        model_dir = Path(model_dir)
        self._session = _load_session(model_dir)
        self._tokenizer = _load_tokenizer(model_dir)
        meta_path = model_dir / "meta.json"
        if not meta_path.exists():
            raise InferenceError(f"missing meta.json in {model_dir}")
        with open(meta_path, encoding="utf-8") as handle:
            self.dimension = int(json.load(handle)["dimension"])
        self.max_sequence_length = max_sequence_length

    def embed(self, text: str) -> np.ndarray:
        encoding = self._tokenizer.encode(text)
        ids = encoding.ids[: self.max_sequence_length]
        input_ids = np.asarray([ids], dtype=np.int64)
        attention_mask = np.ones_like(input_ids)
        embedding = self._session.run("sentence_embedding", input_ids, attention_mask)
        vector = np.asarray(embedding, dtype=np.float64).reshape(-1)
        norm = float(np.linalg.norm(vector))
        if not np.isfinite(norm) or norm < 1e-12:
            raise InferenceError(f"degenerate embedding for {text!r}")
        # Reduced-precision exports drift slightly off unit norm; restore it.
        return vector / norm


class ExportedFluencyBackend:
    """Fluency-error classifier graph; one probability per error head."""

    def __init__(self, model_dir: str | Path, max_sequence_length: int = MAX_SEQUENCE_LENGTH):
        model_dir = Path(model_dir)
        self._session = _load_session(model_dir)
        self._tokenizer = _load_tokenizer(model_dir)
        self.max_sequence_length = max_sequence_length

    def error_probabilities(self, text: str) -> Sequence[float]:
        encoding = self._tokenizer.encode(text)
        ids = encoding.ids[: self.max_sequence_length]
        input_ids = np.asarray([ids], dtype=np.int64)
        attention_mask = np.ones_like(input_ids)
        probs = self._session.run("error_probs", input_ids, attention_mask)
        return np.asarray(probs, dtype=np.float64).reshape(-1).tolist()


def load_backends(models_dir: str | Path):
    """Load the tagger/embedder/fluency trio from one models directory."""
    from .scoring import Backends

    models_dir = Path(models_dir)
    missing = [
        name for name in ("tagger", "embedder", "fluency") if not (models_dir / name).is_dir()
    ]
    if missing:
        raise InferenceError(f"models directory {models_dir} is missing: {', '.join(missing)}")
    return Backends(
        tagger=ExportedTaggerBackend(models_dir / "tagger"),
        embedder=ExportedEmbedderBackend(models_dir / "embedder"),
        fluency=ExportedFluencyBackend(models_dir / "fluency"),
    )
