from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from actions.base import ActionKind
from features.extraction import FEATURE_NAMES, N_FEATURES, PROVENANCE_COLUMNS, FeatureTable

FEATURE_TABLE_HEADER: tuple[str, ...] = PROVENANCE_COLUMNS + FEATURE_NAMES


class FeatureTableError(ValueError):
    """Raised for a feature CSV that does not follow the table schema."""


def write_feature_table(table: FeatureTable, path: str | Path) -> None:
    """Write the interchange CSV; repeated writes of one table are byte-identical."""
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(FEATURE_TABLE_HEADER)
        for i in range(len(table)):
            writer.writerow(
                [table.user_ids[i], table.session_ids[i], table.action_ids[i], table.kinds[i].value]
                + [repr(float(v)) for v in table.matrix[i]]
            )


def load_feature_table(path: str | Path) -> FeatureTable:
    with Path(path).open("r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != FEATURE_TABLE_HEADER:
            raise FeatureTableError(f"{path}: header does not match the feature table schema")
        user_ids: list[str] = []
        session_ids: list[str] = []
        action_ids: list[int] = []
        kinds: list[ActionKind] = []
        rows: list[list[float]] = []
        for line_number, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(FEATURE_TABLE_HEADER):
                raise FeatureTableError(f"{path}: line {line_number}: expected {len(FEATURE_TABLE_HEADER)} fields")
            try:
                action_ids.append(int(row[2]))
                kinds.append(ActionKind.parse(row[3]))
                values = [float(v) for v in row[len(PROVENANCE_COLUMNS):]]
            except ValueError as exc:
                raise FeatureTableError(f"{path}: line {line_number}: {exc}") from None
            if not np.all(np.isfinite(values)):
                raise FeatureTableError(f"{path}: line {line_number}: non-finite feature value")
            user_ids.append(row[0])
            session_ids.append(row[1])
            rows.append(values)
    matrix = np.array(rows, dtype=float).reshape(-1, N_FEATURES)
    return FeatureTable(
        user_ids=tuple(user_ids),
        session_ids=tuple(session_ids),
        action_ids=tuple(action_ids),
        kinds=tuple(kinds),
        matrix=matrix,
    )
