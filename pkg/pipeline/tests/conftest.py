"""Fixtures: a tiny locally-built encoder, tokenizer and synthetic dataset.

Nothing here downloads models; the base checkpoints are random-init
encoders saved to the test tmp dir, with a WordPiece tokenizer whose
vocabulary covers the synthetic captions (several words split into two
subtokens on purpose).
"""

import random
import warnings

import pytest

from aces_pipeline import LabeledCaption

warnings.filterwarnings("ignore", module="transformers")

WHO = ("man", "woman", "bird", "dog", "child", "engine")
HOW = ("barking", "humming", "tapping", "ringing", "splashing", "playing")
WHAT = ("rain", "thunder", "door", "water", "bell", "keyboard")
WHERE = ("street", "room", "distance", "outside", "kitchen", "park")
FILLER = ("a", "the", "is", "in", "with", "and", "some", "then")

# HOW words are absent from the vocabulary as whole words, so they split.
SUBWORD_PIECES = (
    "bark", "hum", "tap", "ring", "splash", "play",
    "##ing", "##ming", "##ping",
)
SPECIALS = ("[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]")

WORD_LABELS = (
    {w: "WHO" for w in WHO}
    | {w: "HOW" for w in HOW}
    | {w: "WHAT" for w in WHAT}
    | {w: "WHERE" for w in WHERE}
    | {w: "O" for w in FILLER}
)

TEMPLATES = (
    ("a", "{who}", "{how}", "in", "the", "{where}"),
    ("the", "{what}", "{how}", "then", "some", "{what}"),
    ("{who}", "{how}", "with", "{what}"),
    ("{what}", "and", "{what}", "in", "the", "{where}"),
    ("a", "{who}", "{how}", "and", "a", "{who}", "{how}"),
    ("some", "{what}", "is", "{how}", "in", "the", "{where}"),
)


def synthetic_captions(count: int, seed: int = 0) -> list[LabeledCaption]:
    """Deterministic captions whose labels follow the word identity."""
    rng = random.Random(seed)
    captions = []
    seen = set()
    while len(captions) < count:
        template = rng.choice(TEMPLATES)
        words = []
        for slot in template:
            if slot == "{who}":
                words.append(rng.choice(WHO))
            elif slot == "{how}":
                words.append(rng.choice(HOW))
            elif slot == "{what}":
                words.append(rng.choice(WHAT))
            elif slot == "{where}":
                words.append(rng.choice(WHERE))
            else:
                words.append(slot)
        key = " ".join(words)
        if key in seen:
            continue
        seen.add(key)
        captions.append(
            LabeledCaption(words=tuple(words), labels=tuple(WORD_LABELS[w] for w in words))
        )
    return captions


def build_tokenizer():
    from tokenizers import Tokenizer, models, normalizers, pre_tokenizers, processors
    from transformers import PreTrainedTokenizerFast

    words = (
        list(SPECIALS)
        + sorted(set(WHO) | set(WHAT) | set(WHERE) | set(FILLER))
        + list(SUBWORD_PIECES)
    )
    vocab = {word: index for index, word in enumerate(words)}
    tokenizer = Tokenizer(models.WordPiece(vocab, unk_token="[UNK]"))
    tokenizer.normalizer = normalizers.BertNormalizer(lowercase=True)
    tokenizer.pre_tokenizer = pre_tokenizers.BertPreTokenizer()
    tokenizer.post_processor = processors.TemplateProcessing(
        single="[CLS] $A [SEP]",
        pair="[CLS] $A [SEP] $B [SEP]",
        special_tokens=[("[CLS]", vocab["[CLS]"]), ("[SEP]", vocab["[SEP]"])],
    )
    return PreTrainedTokenizerFast(
        tokenizer_object=tokenizer,
        unk_token="[UNK]",
        pad_token="[PAD]",
        cls_token="[CLS]",
        sep_token="[SEP]",
        mask_token="[MASK]",
    )


def build_base_encoder(out_dir, hidden_size=32, layers=2, vocab_size=64, seed=0):
    import torch
    from transformers import BertConfig, BertModel

    torch.manual_seed(seed)
    config = BertConfig(
        vocab_size=vocab_size,
        hidden_size=hidden_size,
        num_hidden_layers=layers,
        num_attention_heads=2,
        intermediate_size=hidden_size * 4,
        max_position_embeddings=64,
    )
    model = BertModel(config)
    model.save_pretrained(out_dir)
    build_tokenizer().save_pretrained(out_dir)
    return out_dir


@pytest.fixture(scope="session")
def dataset():
    return synthetic_captions(240, seed=1)


@pytest.fixture(scope="session")
def tiny_base(tmp_path_factory):
    out_dir = tmp_path_factory.mktemp("tiny-base")
    tokenizer = build_tokenizer()
    return build_base_encoder(out_dir, vocab_size=tokenizer.vocab_size)


@pytest.fixture(scope="session")
def trained_tagger(tmp_path_factory, dataset, tiny_base):
    """One fine-tuned checkpoint shared by the evaluation/export tests."""
    from aces_pipeline import TrainConfig, finetune_token_classifier

    out_dir = tmp_path_factory.mktemp("trained-tagger")
    result = finetune_token_classifier(
        dataset,
        tiny_base,
        TrainConfig(learning_rate=1e-3, epochs=5, seed=3),
        output_dir=out_dir,
    )
    return result


@pytest.fixture(scope="session")
def medium_base(tmp_path_factory):
    """Bigger random encoder so weight size dominates serialization overhead."""
    out_dir = tmp_path_factory.mktemp("medium-base")
    return build_base_encoder(out_dir, hidden_size=256, layers=4, vocab_size=2000, seed=1)
