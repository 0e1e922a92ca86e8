import json
import subprocess
import sys
from pathlib import Path

import pytest

from conftest import GOLDEN, TOY
from fitrank.cli import main

CONFIG = str(TOY / "config.json")


def run(*argv):
    try:
        return main([str(a) for a in argv])
    except SystemExit as exc:
        return exc.code


def ranking_orders(path):
    return [line.split("\t")[2] for line in Path(path).read_text().splitlines()[1:]]


def test_extract_matches_golden_files(tmp_path):
    assert run("extract", "--config", CONFIG, "--out", tmp_path) == 0
    got = sorted(p.name for p in (tmp_path / "candidates").iterdir())
    assert got == sorted(p.name for p in (GOLDEN / "extract").iterdir())
    for name in got:
        assert (tmp_path / "candidates" / name).read_bytes() == (GOLDEN / "extract" / name).read_bytes()
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["tool"] == "fitrank" and len(manifest["steps"]["extract"]["config_sha256"]) == 64


def test_rank_tfidf_matches_golden_files(tmp_path):
    assert run("rank", "--config", CONFIG, "--out", tmp_path, "--method", "tfidf") == 0
    for golden in (GOLDEN / "tfidf").iterdir():
        assert (tmp_path / "rankings" / "tfidf" / golden.name).read_bytes() == golden.read_bytes()


def test_missing_lexicon_is_a_config_error(tmp_path, capsys):
    code = run("extract", "--config", CONFIG, "--out", tmp_path, "--lexicon", tmp_path / "nope.tsv")
    assert code == 2
    assert "lexicon" in capsys.readouterr().err
    assert not (tmp_path / "candidates").exists()


def test_empty_corpus_writes_nothing(tmp_path):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    out = tmp_path / "out"
    assert run("extract", "--config", CONFIG, "--out", out, "--corpus", empty) == 0
    assert not (out / "candidates").exists()


def test_unknown_method_is_a_usage_error(tmp_path):
    assert run("rank", "--config", CONFIG, "--out", tmp_path, "--method", "borda") == 2


def test_topic_without_model_names_the_gap(tmp_path, capsys):
    assert run("rank", "--config", CONFIG, "--out", tmp_path, "--method", "topic") == 2
    assert "topic model" in capsys.readouterr().err


def test_gold_with_unknown_document(tmp_path, capsys):
    gold = tmp_path / "gold.jsonl"
    gold.write_text(json.dumps({"doc_id": "ghost", "gold_terms": ["x"]}) + "\n")
    code = run("eval", "--config", CONFIG, "--out", tmp_path, "--method", "external", "--gold", gold)
    assert code == 2
    assert "ghost" in capsys.readouterr().err


def test_eval_cutoffs_override(tmp_path):
    assert run("eval", "--config", CONFIG, "--out", tmp_path, "--method", "external", "--n", "3,7") == 0
    report = json.loads((tmp_path / "eval" / "external" / "report.json").read_text())
    assert report["ns"] == [3, 7] and "P7" in report["macro"] and "P5" not in report["macro"]


def test_eval_reads_written_rankings(tmp_path):
    assert run("rank", "--config", CONFIG, "--out", tmp_path, "--method", "external") == 0
    out2 = tmp_path / "again"
    assert run("eval", "--config", CONFIG, "--out", out2, "--method", "external",
               "--rankings", tmp_path / "rankings" / "external") == 0
    assert run("eval", "--config", CONFIG, "--out", tmp_path, "--method", "external") == 0
    a = json.loads((out2 / "eval" / "external" / "report.json").read_text())
    b = json.loads((tmp_path / "eval" / "external" / "report.json").read_text())
    assert a == b


def test_fit_at_zero_orders_like_combsum(tmp_path):
    base = ["--config", CONFIG, "--out", tmp_path]
    assert run("train-lda", *base) == 0
    assert run("rank", *base, "--method", "fit", "--d", "0") == 0
    assert run("rank", *base, "--method", "combsum") == 0
    for path in (tmp_path / "rankings" / "fit").iterdir():
        assert ranking_orders(path) == ranking_orders(tmp_path / "rankings" / "combsum" / path.name)


def test_sweep_rows_and_zero_row_equals_combsum(tmp_path):
    base = ["--config", CONFIG, "--out", tmp_path]
    assert run("train-lda", *base) == 0
    assert run("sweep-d", *base, "--d-values", "0,0.5,1") == 0
    rows = json.loads((tmp_path / "sweep_d.json").read_text())
    assert [r["d"] for r in rows] == [0.0, 0.5, 1.0]
    assert (tmp_path / "sweep_d.txt").read_text().splitlines()[0].split()[0] == "d"
    assert run("eval", *base, "--method", "combsum") == 0
    macro = json.loads((tmp_path / "eval" / "combsum" / "report.json").read_text())["macro"]
    assert {k: v for k, v in rows[0].items() if k != "d"} == macro


def test_sweep_rejects_empty_grid(tmp_path):
    assert run("sweep-d", "--config", CONFIG, "--out", tmp_path, "--d-values", ",") == 2
    assert run("sweep-d", "--config", CONFIG, "--out", tmp_path, "--d-values", "0,1.5") == 2


def test_select_types_round_trip(tmp_path):
    lex = tmp_path / "lex.tsv"
    rows = []
    for k, (name, count) in enumerate([("T1", 100), ("T2", 90), ("T3", 5), ("T4", 3), ("T5", 2)]):
        rows += [f"{name.lower()} term{i}\t0.5\t{name}\t1" for i in range(count)]
    lex.write_text("\n".join(rows) + "\n")
    assert run("select-types", "--out", tmp_path, "--lexicon", lex) == 0
    assert (tmp_path / "preferred_types.txt").read_text() == "T1\nT2\n"

    out = tmp_path / "run"
    assert run("select-types", "--config", CONFIG, "--out", out) == 0
    types = (out / "preferred_types.txt").read_text().splitlines()
    assert run("rank", "--config", CONFIG, "--out", out, "--method", "fit",
               "--preferred-types", out / "preferred_types.txt", "--disable", "topic") == 0
    cfg = json.loads((out / "manifest.json").read_text())["steps"]["rank"]["config"]
    assert cfg["preferred_types"].endswith("preferred_types.txt") and types


def test_untyped_lexicon_fails(tmp_path):
    lex = tmp_path / "lex.tsv"
    lex.write_text("fever\t0.9\t\t1\n")
    assert run("select-types", "--out", tmp_path, "--lexicon", lex) == 1


def test_train_lda_is_deterministic(tmp_path):
    for name in ("a", "b"):
        assert run("train-lda", "--config", CONFIG, "--out", tmp_path / name, "--lda-iterations", "50") == 0
    assert (tmp_path / "a" / "topic_model.json").read_bytes() == (tmp_path / "b" / "topic_model.json").read_bytes()


def test_jobs_do_not_change_output(tmp_path):
    base = ["--config", CONFIG, "--method", "rrf", "--disable", "topic"]
    assert run("rank", *base, "--out", tmp_path / "a") == 0
    assert run("rank", *base, "--out", tmp_path / "b", "--jobs", "4") == 0
    for p in (tmp_path / "a" / "rankings" / "rrf").iterdir():
        assert p.read_bytes() == (tmp_path / "b" / "rankings" / "rrf" / p.name).read_bytes()


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"corpus": str(TOY / "corpus.jsonl"), "windw": 3}))
    assert run("extract", "--config", cfg, "--out", tmp_path) == 2


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "fitrank.cli", "extract", "--config", CONFIG, "--out",
                           str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
