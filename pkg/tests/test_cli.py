import json
import random

import pytest

from aces import AcesConfig, aces_pair, benchmark_accuracy, demo_stub_backends
from aces.benchmark import save_eval_set
from aces.cli import main

from test_benchmark import random_items


def write_requests(path, rows):
    path.write_text("\n".join(json.dumps(row) for row in rows) + "\n")


def request_row(identifier, candidate, references):
    return {"id": identifier, "candidate": candidate, "references": references}


def read_jsonl(path):
    return [json.loads(line) for line in path.read_text().splitlines() if line.strip()]


def test_score_single_request_matches_direct_call(tmp_path):
    input_path = tmp_path / "in.jsonl"
    output_path = tmp_path / "out.jsonl"
    write_requests(
        input_path,
        [request_row("r1", "rain falls", ["rain falling with thunder in the distance"])],
    )
    code = main(
        [
            "score",
            "--input",
            str(input_path),
            "--output",
            str(output_path),
            "--stub-backends",
        ]
    )
    assert code == 0
    lines = read_jsonl(output_path)
    assert len(lines) == 2  # one report + the corpus summary
    expected = aces_pair(
        "rain falls",
        ["rain falling with thunder in the distance"],
        demo_stub_backends(),
        AcesConfig(),
    )
    assert lines[0]["id"] == "r1"
    assert lines[0]["final"] == expected.final
    assert lines[1]["corpus_aces"] == expected.final
    assert lines[1]["n_scored"] == 1


def test_score_empty_input_exits_1(tmp_path, capsys):
    input_path = tmp_path / "in.jsonl"
    input_path.write_text("")
    code = main(["score", "--input", str(input_path), "--stub-backends"])
    assert code == 1
    assert "no requests" in capsys.readouterr().err


def test_score_partial_failure_exits_2(tmp_path):
    input_path = tmp_path / "in.jsonl"
    output_path = tmp_path / "out.jsonl"
    rows = [request_row(f"r{i}", "rain falls", ["rain"]) for i in range(9)]
    lines = [json.dumps(row) for row in rows[:4]] + ["{broken"] + [
        json.dumps(row) for row in rows[4:]
    ]
    input_path.write_text("\n".join(lines) + "\n")
    code = main(
        ["score", "--input", str(input_path), "--output", str(output_path), "--stub-backends"]
    )
    assert code == 2
    reports = read_jsonl(output_path)
    assert len(reports) == 10  # 9 reports + summary
    assert reports[-1]["n_scored"] == 9


def test_score_missing_models_exits_1(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("ACES_MODEL_DIR", raising=False)
    input_path = tmp_path / "in.jsonl"
    write_requests(input_path, [request_row("r1", "rain", ["rain"])])
    code = main(["score", "--input", str(input_path)])
    assert code == 1
    assert "models" in capsys.readouterr().err


def test_score_missing_model_component_named(tmp_path, capsys):
    models = tmp_path / "models"
    (models / "tagger").mkdir(parents=True)
    (models / "embedder").mkdir()
    input_path = tmp_path / "in.jsonl"
    write_requests(input_path, [request_row("r1", "rain", ["rain"])])
    code = main(["score", "--input", str(input_path), "--models", str(models)])
    assert code == 1
    assert "fluency" in capsys.readouterr().err


def test_score_output_is_deterministic(tmp_path):
    input_path = tmp_path / "in.jsonl"
    rows = [
        request_row(f"r{i}", f"rain falls w{i}", ["rain falling", "thunder rolls"])
        for i in range(12)
    ]
    write_requests(input_path, rows)
    out_a = tmp_path / "a.jsonl"
    out_b = tmp_path / "b.jsonl"
    for out in (out_a, out_b):
        assert (
            main(
                [
                    "score",
                    "--input",
                    str(input_path),
                    "--output",
                    str(out),
                    "--stub-backends",
                    "--threads",
                    "4",
                ]
            )
            == 0
        )
    assert out_a.read_bytes() == out_b.read_bytes()


def test_score_csv_format(tmp_path):
    input_path = tmp_path / "in.csv"
    input_path.write_text(
        "id,candidate,ref1,ref2\n"
        'r1,rain falls,"rain falling",thunder\n'
        "r2,birds caws,bird croaks,\n"
    )
    output_path = tmp_path / "out.jsonl"
    code = main(
        [
            "score",
            "--input",
            str(input_path),
            "--output",
            str(output_path),
            "--stub-backends",
            "--format",
            "csv",
        ]
    )
    assert code == 0
    reports = read_jsonl(output_path)
    assert [r["id"] for r in reports[:-1]] == ["r1", "r2"]


def test_score_fallback_flag(tmp_path):
    input_path = tmp_path / "in.jsonl"
    write_requests(
        input_path, [request_row("r1", "a door is followed by a", ["some rustling"])]
    )
    out_on = tmp_path / "on.jsonl"
    out_off = tmp_path / "off.jsonl"
    main(["score", "--input", str(input_path), "--output", str(out_on), "--stub-backends", "--fallback", "on"])
    main(["score", "--input", str(input_path), "--output", str(out_off), "--stub-backends", "--fallback", "off"])
    assert read_jsonl(out_on)[0]["fallback_used"] is True
    assert read_jsonl(out_off)[0]["final"] == 0.0


def test_tag_walking_example(capsys):
    code = main(["tag", "a person is walking on a hard surface", "--stub-backends"])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    assert "WHO" in lines[0]
    assert "HOW" in lines[1]
    assert "WHAT/WHERE" in lines[2]


def test_tag_empty_caption(capsys):
    code = main(["tag", "", "--stub-backends"])
    assert code == 0
    assert capsys.readouterr().out == ""


def test_tag_rows_follow_lookup_table(capsys):
    code = main(["tag", "birds caws in the distance", "--stub-backends"])
    assert code == 0
    out = capsys.readouterr().out
    assert "birds" in out and "caws" in out and "distance" in out


def test_benchmark_matches_library_counting(tmp_path):
    rng = random.Random(0)
    items = []
    for base in random_items(20, 20):
        items.append(
            type(base)(
                id=base.id,
                caption_a=rng.choice(("rain falls", "birds caws", "a door is followed by a")),
                caption_b=rng.choice(("thunder rolls", "loud rain", "person walking")),
                references=("rain falling with thunder", "a person walking on a hard surface"),
                category=base.category,
                human_choice=base.human_choice,
            )
        )
    eval_path = tmp_path / "eval.jsonl"
    save_eval_set(items, eval_path)
    report_path = tmp_path / "report.json"
    code = main(
        [
            "benchmark",
            "--input",
            str(eval_path),
            "--output",
            str(report_path),
            "--stub-backends",
        ]
    )
    assert code == 0
    report = json.loads(report_path.read_text())

    backends = demo_stub_backends()
    config = AcesConfig()

    def metric(a, b, refs):
        return (
            aces_pair(a, refs, backends, config).final,
            aces_pair(b, refs, backends, config).final,
        )

    expected = benchmark_accuracy(items, metric)
    assert report["total"] == expected.total
    assert report["n_ties"] == expected.n_ties
    for category, accuracy in expected.per_category.items():
        assert report["per_category"][category]["accuracy"] == accuracy.percent


def test_benchmark_threads_match_single(tmp_path):
    items = [
        item
        for item in random_items(21, 10)
    ]
    items = [
        type(items[0])(
            id=item.id,
            caption_a="rain falls",
            caption_b="thunder rolls",
            references=("rain falling with thunder",),
            category=item.category,
            human_choice=item.human_choice,
        )
        for item in items
    ]
    eval_path = tmp_path / "eval.jsonl"
    save_eval_set(items, eval_path)
    single = tmp_path / "single.json"
    threaded = tmp_path / "threaded.json"
    assert main(["benchmark", "--input", str(eval_path), "--output", str(single), "--stub-backends"]) == 0
    assert (
        main(
            [
                "benchmark",
                "--input",
                str(eval_path),
                "--output",
                str(threaded),
                "--stub-backends",
                "--threads",
                "4",
            ]
        )
        == 0
    )
    assert single.read_text() == threaded.read_text()


def test_benchmark_missing_file_exits_1(tmp_path, capsys):
    code = main(
        ["benchmark", "--input", str(tmp_path / "nope.jsonl"), "--stub-backends"]
    )
    assert code == 1
    assert "not found" in capsys.readouterr().err
