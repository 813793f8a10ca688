"""Command-line entry point: score, tag and benchmark subcommands.

stdout carries data only (JSON lines, report JSON, the tag table);
logs and error messages go to stderr. Exit codes: 0 success, 1 fatal
(missing models, unreadable input, no requests), 2 partial failures.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

from .benchmark import benchmark_accuracy, load_eval_set
from .config import AcesConfig, load_config
from .errors import AcesError
from .labels import render_label
from .scoring import Backends, aces_pair, corpus_score
from .stubs import load_stub_backends
from .tagger import tag_caption
from .types import ScoreRequest


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="input file (JSON Lines)")
    parser.add_argument(
        "--models",
        default=os.environ.get("ACES_MODEL_DIR"),
        help="models directory with tagger/embedder/fluency (default: $ACES_MODEL_DIR)",
    )
    parser.add_argument("--config", help="metric config JSON")
    parser.add_argument("--output", help="output path (default: stdout)")
    parser.add_argument(
        "--stub-backends",
        action="store_true",
        help="use the deterministic stub backends instead of model files",
    )
    parser.add_argument(
        "--fallback",
        choices=("on", "off"),
        help="override the whole-caption similarity fallback on no overlap",
    )
    parser.add_argument("--threads", type=int, default=1, help="worker threads")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aces", description=__doc__)
    subparsers = parser.add_subparsers(dest="command", required=True)

    score = subparsers.add_parser("score", help="score candidate captions against references")
    _add_common_arguments(score)
    score.add_argument(
        "--format",
        choices=("jsonl", "csv"),
        default="jsonl",
        help="input format; csv columns are id,candidate,ref1..refN",
    )

    tag = subparsers.add_parser("tag", help="show the descriptor spans of one caption")
    tag.add_argument("text", help="the caption to tag")
    tag.add_argument(
        "--models",
        default=os.environ.get("ACES_MODEL_DIR"),
        help="models directory (default: $ACES_MODEL_DIR)",
    )
    tag.add_argument("--stub-backends", action="store_true")
    tag.add_argument(
        "--strategy",
        default="max",
        choices=("simple", "first", "max", "average"),
        help="subtoken aggregation strategy",
    )

    bench = subparsers.add_parser(
        "benchmark", help="pairwise human-agreement accuracy of the metric"
    )
    _add_common_arguments(bench)
    return parser


def _load_backends(args: argparse.Namespace) -> Backends:
    if args.stub_backends:
        return load_stub_backends(args.models)
    if not args.models:
        raise AcesError("no models directory: pass --models or set ACES_MODEL_DIR")
    from .runtime import load_backends

    return load_backends(args.models)


def _load_metric_config(args: argparse.Namespace) -> AcesConfig:
    config = load_config(args.config) if args.config else AcesConfig()
    if args.fallback is not None:
        config = replace(config, sbert_fallback=args.fallback == "on")
    return config


def _read_requests_jsonl(path: Path) -> tuple[list[ScoreRequest], list[int]]:
    requests, bad_lines = [], []
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                request = ScoreRequest(
                    id=str(record["id"]),
                    candidate=str(record["candidate"]),
                    references=tuple(str(r) for r in record["references"]),
                )
            except Exception:
                bad_lines.append(line_number)
                continue
            requests.append(request)
    return requests, bad_lines


def _read_requests_csv(path: Path) -> tuple[list[ScoreRequest], list[int]]:
    requests, bad_lines = [], []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        for line_number, row in enumerate(reader, start=1):
            if not row:
                continue
            if line_number == 1 and row[:2] == ["id", "candidate"]:
                continue
            references = tuple(cell for cell in row[2:] if cell.strip())
            if len(row) < 3 or not row[0] or not references:
                bad_lines.append(line_number)
                continue
            requests.append(ScoreRequest(id=row[0], candidate=row[1], references=references))
    return requests, bad_lines


def _open_output(path: str | None):
    if path:
        return open(path, "w", encoding="utf-8")
    return sys.stdout


def run_score(args: argparse.Namespace) -> int:
    input_path = Path(args.input)
    if not input_path.exists():
        _log(f"input not found: {input_path}")
        return 1
    reader = _read_requests_csv if args.format == "csv" else _read_requests_jsonl
    requests, bad_lines = reader(input_path)
    if not requests:
        _log("no requests")
        return 1

    try:
        backends = _load_backends(args)
        config = _load_metric_config(args)
    except AcesError as exc:
        _log(str(exc))
        return 1

    def score_one(request: ScoreRequest):
        return aces_pair(request.candidate, request.references, backends, config)

    failed_ids = []
    reports = []
    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as executor:
        futures = [(request, executor.submit(score_one, request)) for request in requests]
        output = _open_output(args.output)
        try:
            for request, future in futures:  # submission order == input order
                try:
                    report = future.result()
                except Exception as exc:
                    failed_ids.append(request.id)
                    _log(f"failed {request.id}: {exc}")
                    continue
                reports.append(report)
                line = {"id": request.id, **report.to_json_dict()}
                output.write(json.dumps(line, ensure_ascii=False) + "\n")
            if reports:
                summary = {"corpus_aces": corpus_score(reports), "n_scored": len(reports)}
                output.write(json.dumps(summary, ensure_ascii=False) + "\n")
        finally:
            if output is not sys.stdout:
                output.close()

    for line_number in bad_lines:
        _log(f"skipped malformed line {line_number}")
    if not reports:
        _log("all requests failed")
        return 1
    return 2 if failed_ids or bad_lines else 0


def run_tag(args: argparse.Namespace) -> int:
    try:
        backends = _load_backends(args)
        tagged = tag_caption(args.text, backends.tagger, args.strategy)
    except AcesError as exc:
        _log(str(exc))
        return 1
    for span in tagged.spans:
        print(
            f"{span.word_start:>3}-{span.word_end:<3} "
            f"{span.text:<30} {render_label(span.label):<22} {span.confidence:.3f}"
        )
    return 0


def run_benchmark(args: argparse.Namespace) -> int:
    input_path = Path(args.input)
    if not input_path.exists():
        _log(f"eval set not found: {input_path}")
        return 1
    try:
        items = load_eval_set(input_path)
        backends = _load_backends(args)
        config = _load_metric_config(args)
    except AcesError as exc:
        _log(str(exc))
        return 1
    if not items:
        _log("no evaluation items")
        return 1

    def metric(caption_a: str, caption_b: str, references) -> tuple[float, float]:
        return (
            aces_pair(caption_a, references, backends, config).final,
            aces_pair(caption_b, references, backends, config).final,
        )

    if args.threads > 1:
        # Pre-score in parallel; benchmark_accuracy then reads the cache.
        with ThreadPoolExecutor(max_workers=args.threads) as executor:
            scores = list(
                executor.map(
                    lambda item: metric(item.caption_a, item.caption_b, item.references),
                    items,
                )
            )
        cache = {item.id: score for item, score in zip(items, scores)}
        by_captions = {
            (item.caption_a, item.caption_b, item.references): cache[item.id] for item in items
        }

        def metric_cached(caption_a, caption_b, references):
            return by_captions[(caption_a, caption_b, tuple(references))]

        report = benchmark_accuracy(items, metric_cached)
    else:
        report = benchmark_accuracy(items, metric)

    output = _open_output(args.output)
    try:
        output.write(json.dumps(report.to_json_dict(), ensure_ascii=False, indent=2) + "\n")
    finally:
        if output is not sys.stdout:
            output.close()
    _log(report.to_table())
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "score":
        return run_score(args)
    if args.command == "tag":
        return run_tag(args)
    return run_benchmark(args)


if __name__ == "__main__":
    sys.exit(main())
