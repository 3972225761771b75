"""
JSONL persistence for trial logs.

Line 1 is the header ``{"schema": "1", "metadata": {...}}``; every further
line is one :class:`LogRecord`. Floats are written in shortest round-trip
form, so write -> read -> write reproduces the file byte for byte.
"""

import json
from pathlib import Path
from typing import List, Union

import structlog
from pydantic import ValidationError

from common.constants import SCHEMA_VERSION, Messages
from common.errors import LogIOError, MalformedRecordError, SchemaVersionError
from trial_log_io.schema import LogHeader, LogRecord, TrialLog

logger = structlog.get_logger(__name__)

PathLike = Union[str, Path]


def write_log(log: TrialLog, path: PathLike) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="\n") as handle:
            handle.write(log.header().model_dump_json(by_alias=True))
            handle.write("\n")
            for record in log.records:
                handle.write(record.model_dump_json())
                handle.write("\n")
    except OSError as exc:
        raise LogIOError(str(exc), path=path) from exc

    logger.info("Trial log written", path=str(path), records=len(log.records))
    return path


def _read_header(line: str, path: Path) -> LogHeader:
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedRecordError(
            Messages.MALFORMED_RECORD, path=path, line=1
        ) from exc
    if not isinstance(raw, dict) or "schema" not in raw:
        raise MalformedRecordError(Messages.MALFORMED_RECORD, path=path, line=1)
    if raw["schema"] != SCHEMA_VERSION:
        raise SchemaVersionError(
            Messages.SCHEMA_MISMATCH,
            path=path,
            found=raw["schema"],
            expected=SCHEMA_VERSION,
        )
    try:
        return LogHeader.model_validate(raw)
    except ValidationError as exc:
        raise MalformedRecordError(
            Messages.MALFORMED_RECORD, path=path, line=1, detail=exc.errors()[0]["msg"]
        ) from exc


def _decode(raw: bytes, path: Path, number: int) -> str:
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedRecordError(
            Messages.MALFORMED_RECORD, path=path, line=number, detail=exc.reason
        ) from exc


def read_log(path: PathLike) -> TrialLog:
    """Load and validate a log; errors name the offending line (1-based)."""
    path = Path(path)
    try:
        raw_lines = path.read_bytes().splitlines()
    except OSError as exc:
        raise LogIOError(str(exc), path=path) from exc

    if not raw_lines:
        raise MalformedRecordError(Messages.MALFORMED_RECORD, path=path, line=1)
    header = _read_header(_decode(raw_lines[0], path, 1), path)

    records: List[LogRecord] = []
    for number, raw in enumerate(raw_lines[1:], start=2):
        line = _decode(raw, path, number)
        if not line.strip():
            continue
        try:
            record = LogRecord.model_validate_json(line)
        except ValidationError as exc:
            raise MalformedRecordError(
                Messages.MALFORMED_RECORD,
                path=path,
                line=number,
                detail=exc.errors()[0]["msg"],
            ) from exc
        if records and record.t <= records[-1].t:
            raise MalformedRecordError(
                Messages.NON_MONOTONE_TIME, path=path, line=number, t=record.t
            )
        records.append(record)

    try:
        return TrialLog(metadata=header.metadata, records=records)
    except ValidationError as exc:
        raise MalformedRecordError(
            Messages.MALFORMED_RECORD, path=path, line=1, detail=exc.errors()[0]["msg"]
        ) from exc
