"""Human-readable output: result tables and ROC plots."""

from analytics.report import render_action_counts, render_report, report_title
from analytics.roc_svg import SvgCanvas, roc_svg, write_roc_plots

__all__ = ["render_action_counts", "render_report", "report_title", "SvgCanvas", "roc_svg", "write_roc_plots"]
