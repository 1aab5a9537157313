import json
from pathlib import Path

import pytest

from conftest import synthetic_reviews, write_fixture_pages
from reviewmonitor.cli import main


def run(tmp_path, *argv):
    base = ["--corpus", str(tmp_path / "corpus.jsonl"),
            "--out", str(tmp_path / "out")]
    return main(base + list(argv))


@pytest.fixture
def pipeline(tmp_path, fixture_pages):
    """Corpus fetched and filtered, ready for downstream stages."""
    assert run(tmp_path, "fetch", "--app-id", "app-1",
               "--fixture-dir", str(fixture_pages)) == 0
    assert run(tmp_path, "filter") == 0
    return tmp_path


class TestExitCodes:
    def test_unknown_command_is_usage_error(self, capsys):
        assert main(["frobnicate"]) == 1
        assert "invalid choice" in capsys.readouterr().err

    def test_missing_corpus_is_data_error(self, tmp_path, capsys):
        assert run(tmp_path, "filter") == 2
        assert "error:" in capsys.readouterr().err

    def test_fetch_requires_a_transport(self, tmp_path, capsys):
        assert run(tmp_path, "fetch", "--app-id", "a") == 1

    def test_unknown_config_key_is_data_error(self, tmp_path, fixture_pages):
        config = tmp_path / "config.json"
        config.write_text('{"nope": 1}')
        assert run(tmp_path, "--config", str(config), "filter") == 2

    def test_help_exits_zero(self):
        assert main(["--help"]) == 0


class TestStages:
    def test_fetch_writes_corpus(self, tmp_path, fixture_pages, capsys):
        assert run(tmp_path, "fetch", "--app-id", "app-1",
                   "--fixture-dir", str(fixture_pages)) == 0
        assert "fetched=300" in capsys.readouterr().out
        assert (tmp_path / "corpus.jsonl").exists()

    def test_filter_stats(self, pipeline):
        stage = json.loads((pipeline / "out" / "filter.json").read_text())
        assert stage["stats"] == {"total": 300, "spam_removed": 10,
                                  "short": 25, "mid": 240, "long": 25}
        assert len(stage["kept_ids"]) == 240
        assert stage["corpus_time_range"][0] < stage["corpus_time_range"][1]

    def test_prep_and_sentiment(self, pipeline):
        assert run(pipeline, "prep") == 0
        lines = (pipeline / "out" / "cleaned.jsonl").read_text().splitlines()
        assert len(lines) == 240
        assert run(pipeline, "sentiment") == 0
        stage = json.loads((pipeline / "out" / "sentiment.json").read_text())
        assert sum(stage["label_distribution"].values()) == 240
        assert stage["classifier_id"] == "builtin-lexicon"
        assert stage["trend"], "trend series should not be empty"

    def test_terms_and_topics_run_on_negative_subset(self, pipeline, capsys):
        assert run(pipeline, "prep") == 0
        assert run(pipeline, "sentiment") == 0
        assert run(pipeline, "terms") == 0
        terms = json.loads((pipeline / "out" / "terms.json").read_text())
        assert terms["subset"] == "negative"
        negative = json.loads(
            (pipeline / "out" / "sentiment.json").read_text()
        )["label_distribution"]["negative"]
        assert terms["document_count"] == negative
        unigrams = [e["gram"] for e in terms["tables"]["unigrams"]["entries"]]
        assert unigrams, "unigram table should not be empty"

        assert run(pipeline, "topics", "--min-cluster-size", "10") == 0
        topics = json.loads((pipeline / "out" / "topics.json").read_text())
        assert topics["model"]["n_topics"] == 2
        assert topics["params"]["min_cluster_size"] == 10

    def test_topics_warns_when_corpus_too_small(self, pipeline, capsys):
        assert run(pipeline, "prep") == 0
        assert run(pipeline, "sentiment") == 0
        assert run(pipeline, "topics", "--min-cluster-size", "100") == 0
        assert "no clusters" in capsys.readouterr().err

    def test_sentiment_evaluation_output(self, pipeline, capsys):
        assert run(pipeline, "prep") == 0
        assert run(pipeline, "sentiment") == 0
        records = json.loads(
            (pipeline / "out" / "sentiment.json").read_text())["records"]
        gold = pipeline / "gold.jsonl"
        gold.write_text("".join(
            json.dumps({"review_id": r["review_id"], "label": r["label"]})
            + "\n" for r in records[:20]))
        capsys.readouterr()
        assert run(pipeline, "sentiment", "--evaluate", str(gold)) == 0
        out = capsys.readouterr().out
        assert "accuracy: 1.0000" in out


class TestReport:
    def full_run(self, tmp_path, threads="1"):
        for argv in (["prep"], ["sentiment"], ["terms"],
                     ["topics", "--min-cluster-size", "10"], ["report"]):
            assert run(tmp_path, "--threads", threads, *argv) == 0
        return (tmp_path / "out" / "report.json").read_bytes()

    def test_report_sections(self, pipeline):
        self.full_run(pipeline)
        report = json.loads((pipeline / "out" / "report.json").read_text())
        assert report["schema_version"] == "1"
        assert report["corpus"]["analyzed"] == 240
        assert report["topics"]["n_topics"] == 2
        assert report["provenance"]["embedder_id"].startswith("builtin-tfidf")

    def test_rerun_is_byte_identical(self, pipeline):
        first = self.full_run(pipeline)
        second = self.full_run(pipeline)
        assert first == second

    def test_thread_count_does_not_change_output(self, pipeline):
        serial = self.full_run(pipeline, threads="1")
        parallel = self.full_run(pipeline, threads="4")
        assert serial == parallel

    def test_stale_stage_detected(self, pipeline):
        self.full_run(pipeline)
        # tamper with the corpus after the stages ran
        with (pipeline / "corpus.jsonl").open("a") as handle:
            handle.write(json.dumps({
                "review_id": "extra", "created_at": 1, "text": "late arrival",
                "recommended": True, "language": "en",
                "source_app_id": "app-1"}) + "\n")
        assert run(pipeline, "report") == 2

    def test_report_with_themes(self, pipeline):
        self.full_run(pipeline)
        themes = pipeline / "themes.json"
        themes.write_text(json.dumps(
            {"themes": [{"name": "Everything", "member_topics": [0, 1]}]}))
        assert run(pipeline, "report", "--themes", str(themes)) == 0
        report = json.loads((pipeline / "out" / "report.json").read_text())
        assert report["themes"]["themes"][0]["review_count"] == sum(
            report["topics"]["topic_sizes"])
