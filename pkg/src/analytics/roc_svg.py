from __future__ import annotations

from dataclasses import dataclass
import logging
from pathlib import Path
from xml.sax.saxutils import escape

from engine.evaluation import EvalReport
from engine.roc import ROCCurve, auc
from io_layer.reports import ReportSchemaError

logger = logging.getLogger(__name__)

PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#ff7f0e",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
    "#bcbd22",
    "#17becf",
)


class SvgCanvas:
    """Minimal SVG text builder."""

    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self._parts: list[str] = []

    def line(self, x1: float, y1: float, x2: float, y2: float, stroke: str = "#000", extra: str = "") -> None:
        self._parts.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" stroke="{stroke}" {extra}/>'
        )

    def polyline(self, points: list[tuple[float, float]], stroke: str, extra: str = "") -> None:
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in points)
        self._parts.append(f'<polyline points="{coords}" fill="none" stroke="{stroke}" {extra}/>')

    def rect(self, x: float, y: float, w: float, h: float, fill: str = "none", stroke: str = "#000") -> None:
        self._parts.append(f'<rect x="{x:.2f}" y="{y:.2f}" width="{w:.2f}" height="{h:.2f}" fill="{fill}" stroke="{stroke}"/>')

    def text(self, x: float, y: float, content: str, anchor: str = "start", extra: str = "") -> None:
        self._parts.append(f'<text x="{x:.2f}" y="{y:.2f}" text-anchor="{anchor}" {extra}>{escape(content)}</text>')

    def render(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}" font-family="sans-serif" font-size="12">'
        )
        return "\n".join([head, *self._parts, "</svg>"]) + "\n"


@dataclass(frozen=True)
class PlotFrame:
    left: float = 60.0
    top: float = 40.0
    size: float = 400.0

    def x(self, fpr: float) -> float:
        return self.left + fpr * self.size

    def y(self, tpr: float) -> float:
        return self.top + (1.0 - tpr) * self.size


def roc_svg(curves: list[tuple[str, ROCCurve]], title: str) -> str:
    """ROC plot with a chance diagonal, axis ticks and an AUC label per curve."""
    frame = PlotFrame()
    legend_rows = len(curves)
    canvas = SvgCanvas(int(frame.left + frame.size + 30), int(frame.top + frame.size + 60 + 16 * legend_rows))
    canvas.text(frame.left + frame.size / 2, 24, title, anchor="middle", extra='font-size="14"')
    canvas.rect(frame.left, frame.top, frame.size, frame.size)
    for i in range(6):
        v = i / 5
        canvas.line(frame.x(v), frame.y(0.0), frame.x(v), frame.y(0.0) + 5)
        canvas.text(frame.x(v), frame.y(0.0) + 18, f"{v:.1f}", anchor="middle")
        canvas.line(frame.left - 5, frame.y(v), frame.left, frame.y(v))
        canvas.text(frame.left - 8, frame.y(v) + 4, f"{v:.1f}", anchor="end")
    canvas.line(frame.x(0.0), frame.y(0.0), frame.x(1.0), frame.y(1.0), stroke="#999", extra='stroke-dasharray="4 4"')
    canvas.text(frame.left + frame.size / 2, frame.y(0.0) + 36, "False Positive Rate (FPR)", anchor="middle")
    canvas.text(
        18,
        frame.top + frame.size / 2,
        "True Positive Rate (TPR)",
        anchor="middle",
        extra=f'transform="rotate(-90 18 {frame.top + frame.size / 2:.2f})"',
    )

    legend_y = frame.y(0.0) + 56
    for i, (label, curve) in enumerate(curves):
        color = PALETTE[i % len(PALETTE)]
        canvas.polyline([(frame.x(f), frame.y(t)) for f, t in curve.points()], stroke=color, extra='stroke-width="2"')
        y = legend_y + 16 * i
        canvas.line(frame.left, y - 4, frame.left + 20, y - 4, stroke=color, extra='stroke-width="2"')
        canvas.text(frame.left + 26, y, f"{label} (AUC = {auc(curve):.3f})")
    return canvas.render()


def _curves(report: EvalReport) -> list[tuple[str, str, ROCCurve]]:
    curves = [(r.user_id, f"user {r.user_id}", r.roc) for r in report.rows if r.roc is not None]
    if not curves:
        raise ReportSchemaError(f"report {report.stem} has no ROC data")
    return curves


def write_roc_plots(report: EvalReport, output: str | Path, mode: str = "overlay") -> list[Path]:
    """Overlay: one SVG at `output` (or `output/<stem>.svg` for a directory).

    Split: `<stem>_user<id>.svg` per user inside the `output` directory.
    """
    curves = _curves(report)
    out = Path(output)
    written: list[Path] = []
    if mode == "overlay":
        path = out if out.suffix.lower() == ".svg" else out / f"{report.stem}.svg"
        path.parent.mkdir(parents=True, exist_ok=True)
        title = f"ROC: {report.stem}"
        path.write_text(roc_svg([(label, c) for _, label, c in curves], title), encoding="utf-8")
        written.append(path)
    elif mode == "split":
        out.mkdir(parents=True, exist_ok=True)
        for user_id, label, curve in curves:
            path = out / f"{report.stem}_user{user_id}.svg"
            path.write_text(roc_svg([(label, curve)], f"ROC: {report.stem}, {label}"), encoding="utf-8")
            written.append(path)
    else:
        raise ValueError(f"unknown plot mode: {mode!r} (expected overlay or split)")
    logger.info("wrote %d ROC plot(s) for %s", len(written), report.stem)
    return written
