# FILE: pfgr/results.py
# ==============================================================================
# Result records: one per solve, appended to a JSON-lines file and, when a
# results database is configured, to the `result_records` table. Also holds the
# human-readable report formatters used by the CLI.
# ==============================================================================
import datetime
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

import pytz
from sqlalchemy.orm import Session

from . import config, models
from .utils.db_manager import db_session_manager


def _now() -> datetime.datetime:
    return datetime.datetime.now(pytz.timezone(config.TIMEZONE))


@dataclass
class ResultRecord:
    command: str
    answer: Optional[str] = None
    engine: Optional[str] = None
    n: Optional[int] = None
    d: Optional[int] = None
    m: Optional[int] = None
    width: Optional[int] = None
    seed: Optional[int] = None
    reduce_ms: Optional[float] = None
    solve_ms: Optional[float] = None
    total_ms: Optional[float] = None
    fallbacks: Dict[str, object] = field(default_factory=dict)
    created_at: datetime.datetime = field(default_factory=_now)

    def to_dict(self) -> Dict[str, object]:
        data = asdict(self)
        data["created_at"] = self.created_at.isoformat()
        return data


def append_jsonl(record: ResultRecord, path: Union[str, Path]) -> None:
    with Path(path).open("a", encoding="utf-8") as handle:
        handle.write(json.dumps(record.to_dict(), sort_keys=True) + "\n")


def read_jsonl(path: Union[str, Path]) -> List[Dict[str, object]]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [json.loads(line) for line in lines if line.strip()]


@db_session_manager
def store_record(record: ResultRecord, db: Session) -> int:
    row = models.ResultRow(
        command=record.command,
        engine=models.Engine(record.engine) if record.engine in {e.value for e in models.Engine} else None,
        answer=record.answer,
        n=record.n,
        d=record.d,
        m=record.m,
        width=record.width,
        seed=record.seed,
        reduce_ms=record.reduce_ms,
        solve_ms=record.solve_ms,
        total_ms=record.total_ms,
        fallbacks=json.dumps(record.fallbacks, sort_keys=True),
        created_at=record.created_at,
    )
    db.add(row)
    db.flush()
    return row.id


def emit(record: ResultRecord, records_path: Optional[Union[str, Path]] = None) -> None:
    """Appends the record to every configured sink; records are never rewritten."""
    if records_path:
        append_jsonl(record, records_path)
    row_id = store_record(record)
    if row_id is not None:
        logging.debug(f"RESULTS: stored {record.command} record as row {row_id}")


# --- Human-readable reports ---


def format_ov_answer(has_pair: bool, engine: str, timings: Optional[Dict[str, float]] = None) -> str:
    lines = [f"orthogonal pair: {'yes' if has_pair else 'no'} (engine {engine})"]
    if timings:
        lines.append("  " + ", ".join(f"{name} {value:.3f} ms" for name, value in timings.items()))
    return "\n".join(lines)


def format_mapping(record) -> str:
    targets = ", ".join(f"{k}={v}" for k, v in record.target_params.items())
    sources = ", ".join(f"{k}={v}" for k, v in record.source_params.items())
    return "\n".join(
        [
            f"reduction {record.reduction_id}: {sources} -> {targets}",
            f"  calls: {record.call_count}",
            f"  mapping: {record.formula_text}",
        ]
    )


def format_validation(report) -> str:
    lines = [f"width: {report.width}"]
    for prop, check in report.checks.items():
        status = "ok" if check.passed else f"FAILED ({check.witness})"
        lines.append(f"  {prop.value}: {status}")
    return "\n".join(lines)


def format_claim_chain(claim, steps) -> str:
    lines = [f"given   {claim.render()}"]
    for red, derived in steps:
        lines.append(f"via {red.name:<12} {derived.render()}")
        if derived.base_bound is not None:
            lines.append(f"    {'':<12} base {derived.base_bound.render()}, improvement {derived.improvement.render()}")
    return "\n".join(lines)
