from __future__ import annotations

import csv
import json
import math
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

MISSING = "n/a"


class ReportSchemaError(ValueError):
    """Raised when a report file does not have the expected structure."""


def format_metric(value: float | None) -> str:
    if value is None:
        return MISSING
    return repr(float(value))


def json_number(value: float | None) -> float | None:
    """Finite floats pass through; None and non-finite values become null."""
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def write_json(path: str | Path, payload: dict[str, Any]) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(payload, indent=2, allow_nan=False) + "\n", encoding="utf-8")
    return out


def write_csv_rows(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[object]]) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return out


def load_json_object(path: str | Path) -> dict[str, Any]:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ReportSchemaError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(payload, dict):
        raise ReportSchemaError(f"{path}: top level must be an object")
    return payload


def require(mapping: Any, key: str, kind: type | tuple[type, ...], where: str) -> Any:
    if not isinstance(mapping, dict) or key not in mapping:
        raise ReportSchemaError(f"{where}: missing field {key!r}")
    value = mapping[key]
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise ReportSchemaError(f"{where}: field {key!r} has unexpected type {type(value).__name__}")
    return value


def optional_number(mapping: dict[str, Any], key: str, where: str) -> float | None:
    value = require(mapping, key, (int, float, type(None)), where)
    return None if value is None else float(value)
