"""Pipeline CLI: fine-tune the word-category classifier and export models.

    aces-pipeline train --data labeled.jsonl --base roberta-base --output ckpt/
    aces-pipeline export --tagger ckpt/ --embedder MODEL --fluency MODEL --output models/
"""

from __future__ import annotations

import argparse
import json
import sys


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aces-pipeline", description=__doc__)
    subparsers = parser.add_subparsers(dest="command", required=True)

    train = subparsers.add_parser("train", help="fine-tune the token classifier")
    train.add_argument("--data", required=True, help="labeled captions (JSON Lines)")
    train.add_argument("--base", required=True, help="pretrained base model name or path")
    train.add_argument("--output", required=True, help="checkpoint directory")
    train.add_argument("--learning-rate", type=float, default=2e-5)
    train.add_argument("--weight-decay", type=float, default=0.01)
    train.add_argument("--epochs", type=int, default=5)
    train.add_argument("--train-fraction", type=float, default=0.8)
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--batch-size", type=int, default=16)
    train.add_argument(
        "--ten-labels",
        action="store_true",
        help="train on the reduced 10-category inventory",
    )

    export = subparsers.add_parser("export", help="export model directories")
    export.add_argument("--tagger", required=True, help="token classifier checkpoint")
    export.add_argument("--embedder", required=True, help="sentence embedder name or path")
    export.add_argument("--fluency", required=True, help="fluency classifier name or path")
    export.add_argument("--output", required=True, help="models directory to write")
    export.add_argument("--precision", choices=("fp32", "fp16"), default="fp32")
    export.add_argument(
        "--probe-data",
        help="labeled captions used to verify export parity (JSON Lines)",
    )
    return parser


def run_train(args: argparse.Namespace) -> int:
    from .data import load_labeled_captions
    from .labels import LABELS_10, LABELS_13
    from .training import TrainConfig, finetune_token_classifier

    dataset = load_labeled_captions(args.data)
    config = TrainConfig(
        learning_rate=args.learning_rate,
        weight_decay=args.weight_decay,
        epochs=args.epochs,
        train_fraction=args.train_fraction,
        seed=args.seed,
        batch_size=args.batch_size,
        label_inventory=LABELS_10 if args.ten_labels else LABELS_13,
    )
    result = finetune_token_classifier(dataset, args.base, config, output_dir=args.output)
    print(json.dumps({"checkpoint": str(result.checkpoint_dir), **result.metrics.to_json_dict()}))
    return 0


def run_export(args: argparse.Namespace) -> int:
    from .export import export_models

    probe_captions = None
    if args.probe_data:
        from .data import load_labeled_captions

        probe_captions = [list(c.words) for c in load_labeled_captions(args.probe_data)]
    manifest = export_models(
        args.tagger,
        args.embedder,
        args.fluency,
        args.output,
        precision=args.precision,
        probe_captions=probe_captions,
    )
    print(json.dumps(manifest))
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "train":
        return run_train(args)
    return run_export(args)


if __name__ == "__main__":
    sys.exit(main())
