#!/usr/bin/env python3
"""
Result Record Tests for pfgr

JSON-lines output, the optional SQLAlchemy store and the report formatters.
"""

import datetime
import json

import pytest

from pfgr import config
from pfgr.database import SessionLocal
from pfgr.models import Engine, ResultRow
from pfgr.reductions import mapping_report
from pfgr.results import (
    ResultRecord,
    append_jsonl,
    emit,
    format_ov_answer,
    format_mapping,
    read_jsonl,
    store_record,
)


@pytest.fixture
def results_db(tmp_path, monkeypatch):
    url = f"sqlite:///{tmp_path / 'results.db'}"
    monkeypatch.setattr(config, "RESULTS_DATABASE_URL", url)
    return url


def test_records_are_appended_as_json_lines(tmp_path):
    path = tmp_path / "records.jsonl"
    append_jsonl(ResultRecord(command="solve-ov", engine="brute", answer="true", n=4, d=2), path)
    append_jsonl(ResultRecord(command="diam", answer="3", n=6), path)

    lines = path.read_text().splitlines()
    assert len(lines) == 2
    first, second = read_jsonl(path)
    assert first["command"] == "solve-ov" and first["answer"] == "true"
    assert second["answer"] == "3"
    assert datetime.datetime.fromisoformat(first["created_at"]).tzinfo is not None


def test_store_is_skipped_without_database(monkeypatch):
    monkeypatch.setattr(config, "RESULTS_DATABASE_URL", None)
    assert store_record(ResultRecord(command="diam")) is None


def test_store_writes_rows(results_db):
    record = ResultRecord(
        command="solve-ov",
        engine="diam",
        answer="false",
        n=50,
        d=3,
        reduce_ms=1.5,
        solve_ms=2.5,
        total_ms=4.0,
        fallbacks={"fallback_crossover": 2},
    )
    row_id = store_record(record)
    assert row_id is not None

    session = SessionLocal()
    try:
        row = session.get(ResultRow, row_id)
        assert row.engine == Engine.DIAM
        assert row.answer == "false"
        assert json.loads(row.fallbacks) == {"fallback_crossover": 2}
    finally:
        session.close()


def test_emit_writes_every_configured_sink(results_db, tmp_path):
    path = tmp_path / "records.jsonl"
    emit(ResultRecord(command="diam", answer="2", n=5), path)
    emit(ResultRecord(command="diam", answer="3", n=6), path)
    assert [r["answer"] for r in read_jsonl(path)] == ["2", "3"]

    session = SessionLocal()
    try:
        assert session.query(ResultRow).filter(ResultRow.command == "diam").count() == 2
    finally:
        session.close()


def test_formatters():
    assert format_ov_answer(True, "brute") == "orthogonal pair: yes (engine brute)"
    text = format_ov_answer(False, "diam", {"total": 1.25})
    assert text.splitlines()[1].strip() == "total 1.250 ms"

    mapping = format_mapping(mapping_report("ov2diam", {"n": 100, "d": 8}))
    assert mapping.splitlines()[0].startswith("reduction ov2diam:")
    assert "nodes=210" in mapping
    assert "calls: 1" in mapping
