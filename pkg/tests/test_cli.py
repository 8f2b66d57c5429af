"""The command-line front end, run in-process through main()."""

import csv
import json

import pytest

from starforge import __version__
from starforge.cli import main
from starforge.corpus import load_corpus
from starforge.synth import DEFAULT_NEGATIVE, DEFAULT_POSITIVE


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    """One synthetic dump plus its ingested cache, shared per module."""
    root = tmp_path_factory.mktemp("cli")
    data = root / "data"
    assert main(["synth", "--n", "20", "--out", str(data)]) == 0
    corpus = root / "corpus.json"
    assert main(["ingest", "--business", str(data / "business.json"),
                 "--review", str(data / "review.json"),
                 "--out", str(corpus)]) == 0
    return {"data": data, "corpus": corpus, "root": root}


class TestExitCodes:
    def test_no_arguments_is_usage(self):
        assert main([]) == 1

    def test_unknown_flag(self):
        assert main(["synth", "--bogus", "--out", "x"]) == 1

    def test_unknown_subcommand(self):
        assert main(["frobnicate"]) == 1

    @pytest.mark.parametrize("argv", [
        ["synth", "--n", "0", "--out", "x"],
        ["synth", "--sigma", "-1", "--out", "x"],
        ["ingest", "--business", "b", "--review", "r", "--sample", "-1"],
        ["top-words", "--corpus", "c", "--top", "0"],
        ["grid", "--corpus", "c", "--out", "o", "--models", "perceptron"],
        ["grid", "--corpus", "c", "--out", "o", "--ks", "0"],
        ["grid", "--corpus", "c", "--out", "o", "--ks", ","],
        ["grid", "--corpus", "c", "--out", "o", "--methods", "tfidf"],
        ["grid", "--corpus", "c", "--out", "o", "--chunk-threshold", "0"],
    ])
    def test_invalid_values_are_usage_errors(self, argv):
        assert main(argv) == 1

    def test_missing_ingest_inputs(self, tmp_path):
        assert main(["ingest", "--business", str(tmp_path / "none.json"),
                     "--review", str(tmp_path / "also-none.json"),
                     "--out", str(tmp_path / "c.json")]) == 2

    def test_missing_corpus_cache(self, tmp_path):
        missing = str(tmp_path / "no-corpus.json")
        assert main(["top-words", "--corpus", missing]) == 2
        assert main(["grid", "--corpus", missing,
                     "--out", str(tmp_path / "out")]) == 2

    def test_filter_matching_nothing_is_empty_selection(self, dataset, tmp_path):
        assert main(["ingest",
                     "--business", str(dataset["data"] / "business.json"),
                     "--review", str(dataset["data"] / "review.json"),
                     "--category", "Klingon Opera",
                     "--out", str(tmp_path / "c.json")]) == 3

    def test_version_exits_clean(self, capsys):
        assert main(["--version"]) == 0
        assert __version__ in capsys.readouterr().out


class TestSynthIngest:
    def test_round_trip_counts(self, dataset, capsys):
        corpus = load_corpus(dataset["corpus"])
        assert len(corpus) == 20

        out = dataset["root"] / "again.json"
        assert main(["ingest",
                     "--business", str(dataset["data"] / "business.json"),
                     "--review", str(dataset["data"] / "review.json"),
                     "--out", str(out)]) == 0
        stdout = capsys.readouterr().out
        assert "businesses matched: 20" in stdout
        assert "businesses sampled: 20" in stdout
        assert "malformed lines skipped: 0" in stdout
        assert "incomplete records skipped: 0" in stdout

    def test_sampling_keeps_the_requested_number(self, dataset, tmp_path, capsys):
        out = tmp_path / "sampled.json"
        assert main(["ingest",
                     "--business", str(dataset["data"] / "business.json"),
                     "--review", str(dataset["data"] / "review.json"),
                     "--sample", "8", "--seed", "3", "--out", str(out)]) == 0
        assert "businesses sampled: 8" in capsys.readouterr().out
        assert len(load_corpus(out)) == 8

    def test_rerun_writes_identical_cache(self, dataset, tmp_path):
        out = tmp_path / "cache.json"
        argv = ["ingest", "--business", str(dataset["data"] / "business.json"),
                "--review", str(dataset["data"] / "review.json"),
                "--out", str(out)]
        assert main(argv) == 0
        first = out.read_bytes()
        assert main(argv) == 0
        assert out.read_bytes() == first


class TestTopWords:
    def test_listing_with_shares(self, dataset, capsys):
        assert main(["top-words", "--corpus", str(dataset["corpus"]),
                     "--top", "5"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "top 5 terms (baseline):"
        assert len(lines) == 6
        assert all("%" in line for line in lines[1:])

    def test_shortfall_is_reported(self, dataset, capsys):
        # The generator's pools hold 30 distinct words in total.
        assert main(["top-words", "--corpus", str(dataset["corpus"]),
                     "--top", "500"]) == 0
        stdout = capsys.readouterr().out
        assert "top 30 terms" in stdout
        assert "470 short of requested" in stdout

    def test_adjective_method_lists_only_adjectives(self, dataset, capsys):
        assert main(["top-words", "--corpus", str(dataset["corpus"]),
                     "--method", "adjectives_after_pos", "--top", "8"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()[1:]
        adjectives = set(DEFAULT_POSITIVE) | set(DEFAULT_NEGATIVE)
        for line in lines:
            assert line.split()[0] in adjectives

    def test_json_artifact(self, dataset, tmp_path, capsys):
        out = tmp_path / "top.json"
        assert main(["top-words", "--corpus", str(dataset["corpus"]),
                     "--top", "4", "--out", str(out)]) == 0
        capsys.readouterr()
        doc = json.loads(out.read_text())
        assert {"run_config", "asset_hashes", "corpus_hash", "method",
                "top_words"} <= set(doc)
        assert len(doc["top_words"]) == 4
        assert doc["run_config"]["subcommand"] == "top-words"

    def test_stopword_only_corpus_lists_nothing(self, tmp_path, capsys):
        bp = tmp_path / "business.json"
        rp = tmp_path / "review.json"
        bp.write_text(json.dumps({"business_id": "b1", "stars": 3.0,
                                  "categories": ["Cafes"],
                                  "review_count": 1}) + "\n")
        rp.write_text(json.dumps({"review_id": "r1", "business_id": "b1",
                                  "stars": 3, "text": "The and of it."}) + "\n")
        corpus = tmp_path / "c.json"
        assert main(["ingest", "--business", str(bp), "--review", str(rp),
                     "--out", str(corpus)]) == 0
        assert main(["top-words", "--corpus", str(corpus), "--top", "3"]) == 0
        assert "top 0 terms" in capsys.readouterr().out


class TestGrid:
    def test_restricted_grid_shape(self, dataset, tmp_path, capsys):
        out = tmp_path / "grid"
        assert main(["grid", "--corpus", str(dataset["corpus"]),
                     "--models", "linear", "--ks", "30",
                     "--out", str(out)]) == 0
        stdout = capsys.readouterr().out
        assert "grid cells: 3" in stdout
        assert "best: method=" in stdout

        with open(out / "results.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 3 * 10
        assert (out / "summary.json").exists()
        for method in ("baseline", "words_after_pos", "adjectives_after_pos"):
            assert (out / f"series_{method}.csv").exists()

    def test_same_seed_reruns_byte_identical(self, dataset, tmp_path, capsys):
        out = tmp_path / "grid"
        argv = ["grid", "--corpus", str(dataset["corpus"]),
                "--methods", "baseline", "--models", "linear,tree",
                "--ks", "5,10", "--seed", "7", "--out", str(out)]
        assert main(argv) == 0
        capsys.readouterr()
        snapshot = {p.name: p.read_bytes() for p in out.iterdir()}
        assert main(argv) == 0
        assert {p.name: p.read_bytes() for p in out.iterdir()} == snapshot

    def test_flag_variants_run_clean(self, dataset, tmp_path):
        assert main(["grid", "--corpus", str(dataset["corpus"]),
                     "--methods", "baseline", "--models", "tree", "--ks", "5",
                     "--no-clamp", "--no-stopwords",
                     "--out", str(tmp_path / "grid")]) == 0
