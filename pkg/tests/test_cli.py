import json

import pytest
from click.testing import CliRunner

from sumkit.cli import main

FIXTURE = "tests/data/fixture5.jsonl"
VOCAB = "tests/data/vocab.txt"


@pytest.fixture()
def runner():
    return CliRunner()


def read_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


class TestIngest:
    def test_clean_and_filter(self, runner, tmp_path):
        src = tmp_path / "raw.jsonl"
        rows = [
            {"id": "keep", "article": "خبر https://spam.test ایک دو تین چار", "summary": "خبر"},
            {"id": "drop", "article": "ایک دو", "summary": "ایک دو"},  # 100%
        ]
        src.write_text("\n".join(json.dumps(r, ensure_ascii=False) for r in rows), encoding="utf-8")
        out = tmp_path / "clean.jsonl"
        removed = tmp_path / "removed.jsonl"
        result = runner.invoke(main, ["ingest", str(src), str(out), "--removed", str(removed)])
        assert result.exit_code == 0, result.output
        assert "kept 1, removed 1" in result.output
        kept = read_jsonl(out)
        assert [r["id"] for r in kept] == ["keep"]
        assert "https://" not in kept[0]["article"]
        assert [r["id"] for r in read_jsonl(removed)] == ["drop"]

    def test_invalid_jsonl_exits_1(self, runner, tmp_path):
        src = tmp_path / "bad.jsonl"
        src.write_text("{broken\n", encoding="utf-8")
        result = runner.invoke(main, ["ingest", str(src), str(tmp_path / "out.jsonl")])
        assert result.exit_code == 1

    def test_missing_file_exits_2(self, runner, tmp_path):
        result = runner.invoke(main, ["ingest", str(tmp_path / "nope.jsonl"), str(tmp_path / "out.jsonl")])
        assert result.exit_code == 2


class TestStats:
    def test_tsv_and_figure(self, runner, tmp_path):
        out = tmp_path / "stats.tsv"
        result = runner.invoke(main, ["stats", FIXTURE, "-o", str(out)])
        assert result.exit_code == 0, result.output
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "count\t5"
        assert lines[1].startswith("metric\t")
        assert len(lines) == 5
        figure = tmp_path / "stats.png"
        assert figure.exists() and figure.stat().st_size > 0

    def test_no_figures_flag(self, runner, tmp_path):
        out = tmp_path / "stats.tsv"
        result = runner.invoke(main, ["stats", FIXTURE, "-o", str(out), "--no-figures"])
        assert result.exit_code == 0
        assert not (tmp_path / "stats.png").exists()

    def test_json_sidecar(self, runner, tmp_path):
        out = tmp_path / "stats.tsv"
        jpath = tmp_path / "stats.json"
        result = runner.invoke(
            main, ["stats", FIXTURE, "-o", str(out), "--json", str(jpath), "--no-figures"]
        )
        assert result.exit_code == 0
        payload = json.loads(jpath.read_text(encoding="utf-8"))
        assert payload["count"] == 5


class TestTruncate:
    def test_writes_records_and_audit(self, runner, tmp_path):
        out = tmp_path / "trunc.jsonl"
        result = runner.invoke(
            main, ["truncate", FIXTURE, str(out), "--vocab", VOCAB, "--budget", "12"]
        )
        assert result.exit_code == 0, result.output
        records = read_jsonl(out)
        assert len(records) == 5
        audit = read_jsonl(f"{out}.audit.jsonl")
        assert {a["id"] for a in audit} == {r["id"] for r in records}
        for entry in audit:
            assert entry["after_tokens"] <= 12 or entry["hard_cut"]


class TestSummarizeScoreEvaluate:
    def test_summarize_then_score_round_trip(self, runner, tmp_path):
        gen = tmp_path / "gen.jsonl"
        result = runner.invoke(
            main,
            ["summarize", FIXTURE, str(gen), "--vocab", VOCAB, "--target-ratio", "0.4", "--seed", "3"],
        )
        assert result.exit_code == 0, result.output
        rows = read_jsonl(gen)
        assert len(rows) == 5 and all(r["generated"] for r in rows)

        out = tmp_path / "row.json"
        result = runner.invoke(
            main,
            ["score", str(gen), "--vocab", VOCAB, "-o", str(out), "--no-figures"],
        )
        assert result.exit_code == 0, result.output
        row = json.loads(out.read_text(encoding="utf-8"))
        assert row["n"] == 5
        assert 0.0 <= row["r1"]["f1"] <= 1.0
        per = read_jsonl(tmp_path / "row.records.jsonl")
        assert len(per) == 5

    def test_score_identity_pairs_all_one(self, runner, tmp_path):
        pairs = tmp_path / "pairs.jsonl"
        pairs.write_text(
            json.dumps({"reference": "خبر شہر", "generated": "خبر شہر"}, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        result = runner.invoke(main, ["score", str(pairs), "--vocab", VOCAB, "--no-figures"])
        assert result.exit_code == 0, result.output
        row = json.loads(result.output[: result.output.rindex("}") + 1])
        assert row["r1"]["f1"] == 1.0

    def test_evaluate_reproducible_and_renders_figure(self, runner, tmp_path):
        args = ["evaluate", FIXTURE, "--vocab", VOCAB, "--seed", "7", "--target-ratio", "0.3"]
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert runner.invoke(main, args + ["-o", str(a)]).exit_code == 0
        assert runner.invoke(main, args + ["-o", str(b), "--no-figures"]).exit_code == 0
        assert a.read_bytes() == b.read_bytes()
        assert (tmp_path / "a.png").exists()

    def test_conflicting_targets_exit_1(self, runner, tmp_path):
        result = runner.invoke(
            main,
            [
                "evaluate", FIXTURE, "--vocab", VOCAB,
                "--target-ratio", "0.3", "--target-tokens", "5",
            ],
        )
        assert result.exit_code == 1


class TestTrimVocab:
    def test_outputs_and_report(self, runner, tmp_path):
        import numpy as np

        from sumkit.embedding import EmbeddingStore
        from sumkit.text import load_vocab

        vocab = load_vocab(VOCAB)
        store_path = tmp_path / "emb.bin"
        store = EmbeddingStore(4)
        rng = np.random.default_rng(0)
        for i in range(len(vocab)):
            store.put(str(i), rng.normal(size=4).astype(np.float32))
        store.save(str(store_path))

        out_vocab = tmp_path / "small.txt"
        out_store = tmp_path / "small.emb"
        report = tmp_path / "report.json"
        result = runner.invoke(
            main,
            [
                "trim-vocab", FIXTURE, "--vocab", VOCAB, "--target", "10",
                "--out-vocab", str(out_vocab), "--store", str(store_path),
                "--out-store", str(out_store), "--report", str(report),
            ],
        )
        assert result.exit_code == 0, result.output
        pruned = load_vocab(str(out_vocab))
        assert len(pruned) == 10
        payload = json.loads(report.read_text(encoding="utf-8"))
        assert payload["rows_after"] == 10
        assert payload["retained_fraction"] == pytest.approx(10 / len(vocab))
        remap = (tmp_path / "small.txt.remap.tsv").read_text().splitlines()
        assert len(remap) == 10
        assert len(EmbeddingStore.load(str(out_store))) == 10

    def test_store_without_out_store_exits_1(self, runner, tmp_path):
        result = runner.invoke(
            main,
            [
                "trim-vocab", FIXTURE, "--vocab", VOCAB, "--target", "10",
                "--out-vocab", str(tmp_path / "v.txt"), "--store", "whatever.emb",
            ],
        )
        assert result.exit_code == 1


class TestHumanReport:
    def test_aggregates_and_joins(self, runner, tmp_path):
        scores = tmp_path / "scores.jsonl"
        rows = [
            {"annotator": "a1", "summary_id": "s1", "system": "m1", "accuracy": 4, "coherence": 5},
            {"annotator": "a2", "summary_id": "s1", "system": "m1", "accuracy": 5, "coherence": 5},
        ]
        scores.write_text("\n".join(json.dumps(r) for r in rows), encoding="utf-8")

        per = tmp_path / "per.jsonl"
        triple = {"precision": 1.0, "recall": 1.0, "f1": 1.0}
        per.write_text(
            json.dumps({"id": "s1", "r1": triple, "r2": triple, "rl": triple, "embed": triple}) + "\n",
            encoding="utf-8",
        )

        out = tmp_path / "report.json"
        result = runner.invoke(
            main,
            ["human-report", str(scores), "--auto", f"m1={per}", "-o", str(out), "--no-figures"],
        )
        assert result.exit_code == 0, result.output
        report = json.loads(out.read_text(encoding="utf-8"))
        (summary_row,) = report["per_summary"]
        assert summary_row["mean_accuracy"] == 4.5
        assert summary_row["r1_f1"] == 1.0

    def test_duplicate_scores_exit_1(self, runner, tmp_path):
        scores = tmp_path / "scores.jsonl"
        row = {"annotator": "a1", "summary_id": "s1", "system": "m1", "accuracy": 4, "coherence": 5}
        scores.write_text(json.dumps(row) + "\n" + json.dumps(row) + "\n", encoding="utf-8")
        result = runner.invoke(main, ["human-report", str(scores), "--no-figures"])
        assert result.exit_code == 1

    def test_renders_figure(self, runner, tmp_path):
        scores = tmp_path / "scores.jsonl"
        rows = [
            {"annotator": "a1", "summary_id": "s1", "system": "m1", "accuracy": 4, "coherence": 5},
            {"annotator": "a1", "summary_id": "s1", "system": "m2", "accuracy": 2, "coherence": 1},
        ]
        scores.write_text("\n".join(json.dumps(r) for r in rows), encoding="utf-8")
        out = tmp_path / "report.json"
        result = runner.invoke(main, ["human-report", str(scores), "-o", str(out)])
        assert result.exit_code == 0, result.output
        assert (tmp_path / "report.png").stat().st_size > 0


def test_help_lists_all_commands(runner):
    result = runner.invoke(main, ["--help"])
    for command in (
        "ingest", "stats", "truncate", "summarize", "score",
        "trim-vocab", "evaluate", "annotate-serve", "human-report",
    ):
        assert command in result.output
