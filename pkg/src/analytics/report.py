from __future__ import annotations

from collections.abc import Mapping

from actions.base import ActionKind
from engine.evaluation import AVERAGE_LABEL, EvalReport
from models.factory import MODEL_LABELS

SCENARIO_LABELS = {"verify": "Verification", "a": "Scenario A", "b": "Scenario B"}
_COLUMNS = (
    ("acc", "ACC(%)", True),
    ("auc", "AUC(%)", True),
    ("far", "FAR", False),
    ("frr", "FRR", False),
    ("eer_eq8", "EER", False),
    ("eer_roc", "EER(roc)", False),
)


def format_cell(value: float | None, percent: bool) -> str:
    if value is None:
        return "n/a"
    return f"{100.0 * value:.1f}" if percent else f"{value:.3f}"


def report_title(report: EvalReport) -> str:
    scenario = SCENARIO_LABELS.get(report.scenario, report.scenario)
    model = MODEL_LABELS.get(report.model, report.model)
    action = "all actions" if report.action == "all" else f"{report.action.upper()} actions"
    return f"{scenario}, {model}, {action}"


def render_report(report: EvalReport) -> str:
    """Plain-text table: one row per user plus the average row."""
    header = ["User", *(label for _, label, _ in _COLUMNS)]
    body = [[r.user_id, *(format_cell(r.metric(n), pct) for n, _, pct in _COLUMNS)] for r in report.rows]
    avg = report.average()
    body.append([AVERAGE_LABEL, *(format_cell(avg[n], pct) for n, _, pct in _COLUMNS)])
    return report_title(report) + "\n" + _grid(header, body)


def render_action_counts(counts: Mapping[str, Mapping[ActionKind, int]]) -> str:
    header = ["User", *(k.value for k in ActionKind), "Total"]
    body = []
    for user_id, per_kind in counts.items():
        values = [per_kind.get(k, 0) for k in ActionKind]
        body.append([user_id, *(str(v) for v in values), str(sum(values))])
    return _grid(header, body)


def _grid(header: list[str], body: list[list[str]]) -> str:
    widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
    lines = ["  ".join(cell.rjust(w) if i else cell.ljust(w) for i, (cell, w) in enumerate(zip(row, widths))) for row in [header, *body]]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(line.rstrip() for line in lines)
