#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
端到端测试：合成数据 -> 完整流水线 -> 运行清单与退出码
"""

import json
import time
from pathlib import Path

import pytest

from main import EXIT_DATA, EXIT_DEPENDENCY, EXIT_OK, EXIT_USAGE, main
from src.corpus import CorpusStore, ingest_file, write_store
from src.synthetic import VENUES, generate_records, write_synthetic_fixture


def snapshot(directory: Path):
    return {
        str(path.relative_to(directory)): path.read_bytes()
        for path in sorted(directory.rglob("*")) if path.is_file()
    }


@pytest.fixture
def fixture_config(tmp_path) -> Path:
    return write_synthetic_fixture(tmp_path / "synthetic", n_papers=200, seed=7)


def test_synthetic_records_are_reproducible():
    assert generate_records(50, seed=3) == generate_records(50, seed=3)
    records = generate_records(50, seed=3)
    assert {r.venue_id for r in records[:len(VENUES)]} == set(VENUES)
    ids = {r.paper_id for r in records}
    resolved = [ref for r in records for ref in r.references if ref in ids]
    assert all(ref < r.paper_id for r in records for ref in r.references if ref in ids)
    assert resolved


def test_synthetic_dump_has_noise_rows(fixture_config):
    result = ingest_file(fixture_config.parent / "dump.tsv")
    assert result.stats.records == 200
    assert result.stats.skipped == 1
    assert result.stats.duplicates == 1


def test_full_pipeline_writes_reports_and_manifest(fixture_config):
    assert main(["all", "--config", str(fixture_config)]) == EXIT_OK

    out = fixture_config.parent / "output"
    for venue in ("chi", "ijhcs"):
        assert (out / "corpus" / venue / "manifest.txt").exists()
        assert (out / "annotations" / f"{venue}.tsv").exists()
        assert (out / "reports" / venue / "summary.md").exists()
        assert (out / "reports" / venue / "topic_trends.csv").exists()

    manifest = json.loads((out / "run_manifest.json").read_text(encoding="utf-8"))
    assert manifest["command"] == "all"
    assert manifest["stopwords_version"] == "en-v1"
    assert manifest["ingest"]["records"] == 200
    assert set(manifest["venues"]) == {"chi", "ijhcs"}
    assert {"dump", "institutions", "ontology", "stopwords"} <= set(manifest["inputs"])
    assert list(manifest["stages"]) == ["ingest", "extract", "classify", "report"]


def test_rerun_is_byte_identical(fixture_config):
    out = fixture_config.parent / "output"
    assert main(["all", "--config", str(fixture_config)]) == EXIT_OK
    first = snapshot(out)
    assert main(["all", "--config", str(fixture_config)]) == EXIT_OK
    assert snapshot(out) == first


def test_logical_venue_merges_renamed_journal(fixture_config):
    assert main(["all", "--config", str(fixture_config), "--venue", "ijhcs"]) == EXIT_OK
    ids = (fixture_config.parent / "output" / "corpus" / "ijhcs" / "accepted.ids").read_text(encoding="utf-8").split()
    store = ingest_file(fixture_config.parent / "dump.tsv").store
    assert {store.get(i).venue_id for i in ids} == {"ijhcs", "ijmms"}


def test_stages_can_run_one_by_one(fixture_config):
    for stage in ("ingest", "extract", "classify", "report"):
        assert main([stage, "--config", str(fixture_config)]) == EXIT_OK
    manifest = json.loads((fixture_config.parent / "output" / "run_manifest.json").read_text(encoding="utf-8"))
    assert manifest["command"] == "report"


def test_report_before_extract_is_dependency_error(fixture_config):
    assert main(["ingest", "--config", str(fixture_config)]) == EXIT_OK
    assert main(["report", "--config", str(fixture_config)]) == EXIT_DEPENDENCY


def test_extract_without_ingest_is_dependency_error(fixture_config):
    assert main(["extract", "--config", str(fixture_config)]) == EXIT_DEPENDENCY


def test_bad_threshold_is_usage_error(fixture_config):
    assert main(["classify", "--config", str(fixture_config), "--threshold", "1.5"]) == EXIT_USAGE


def test_unknown_venue_is_usage_error(fixture_config):
    assert main(["all", "--config", str(fixture_config), "--venue", "nips"]) == EXIT_USAGE


def test_unknown_command_is_usage_error():
    assert main(["frobnicate"]) == EXIT_USAGE


def test_missing_config_is_usage_error(tmp_path):
    assert main(["ingest", "--config", str(tmp_path / "missing.ini")]) == EXIT_USAGE


def test_strict_mode_fails_on_noise_rows(fixture_config):
    assert main(["ingest", "--config", str(fixture_config), "--strict"]) == EXIT_DATA


def test_venue_missing_from_dump_is_data_error(tmp_path):
    config = write_synthetic_fixture(tmp_path / "syn", n_papers=30, noise=False)
    dump = config.parent / "dump.tsv"
    store = ingest_file(dump).store
    write_store(CorpusStore([r for r in store if r.venue_id != "chi"]), dump)
    assert main(["all", "--config", str(config)]) == EXIT_DATA


def test_synth_command_writes_fixture(tmp_path):
    target = tmp_path / "generated"
    assert main(["synth", "--dir", str(target), "--papers", "20", "--no-noise"]) == EXIT_OK
    assert {p.name for p in target.iterdir()} >= {"dump.tsv", "institutions.tsv", "ontology.tsv",
                                                   "venue_names.tsv", "config.ini"}
    assert main(["synth", "--dir", str(target), "--papers", "0"]) == EXIT_USAGE


def test_config_show_and_save(fixture_config, tmp_path, capsys):
    assert main(["config", "show", "--config", str(fixture_config)]) == EXIT_OK
    shown = json.loads(capsys.readouterr().out)
    assert shown["venues"] == {"chi": ["chi"], "ijhcs": ["ijhcs", "ijmms"]}

    saved = tmp_path / "saved.ini"
    assert main(["config", "save", str(saved), "--config", str(fixture_config), "--threshold", "0.8"]) == EXIT_OK
    assert "threshold = 0.8" in saved.read_text(encoding="utf-8")


@pytest.mark.slow
def test_hundred_thousand_record_run_is_fast_and_reproducible(tmp_path):
    config = write_synthetic_fixture(tmp_path / "large", n_papers=100_000, seed=11, noise=False)
    out = config.parent / "output"

    snapshots = []
    for _ in range(2):
        started = time.perf_counter()
        assert main(["all", "--config", str(config)]) == EXIT_OK
        assert time.perf_counter() - started < 120
        snapshots.append(snapshot(out))

    assert snapshots[0] == snapshots[1]
    manifest = json.loads((out / "run_manifest.json").read_text(encoding="utf-8"))
    assert manifest["ingest"]["records"] == 100_000
    assert manifest["ingest"]["skipped"] == 0
