"""`mousedyn` command line: extract features, run experiments, plot ROC curves."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from collections.abc import Sequence
from dataclasses import fields
from pathlib import Path
from typing import Any

from analytics.report import render_action_counts, render_report
from analytics.roc_svg import write_roc_plots
from cli.config import (
    ACTIONS,
    DEFAULTS,
    LOG_LEVELS,
    MODELS,
    SCENARIOS,
    SEED_ENV,
    ConfigError,
    RunConfig,
    load_config_file,
    optional_int,
    resolve_config,
)
from engine.evaluation import EvalReport, run_scenario_a, run_scenario_b, run_verification
from features.extraction import FeatureTable, extract_all
from io_layer.loaders import DatasetError, load_dataset
from io_layer.tables import load_feature_table, write_feature_table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class CommandError(RuntimeError):
    """Raised for invalid command-line usage."""

    def __init__(self, message: str, exit_code: int = EXIT_USAGE):
        super().__init__(message)
        self.message = message
        self.exit_code = exit_code


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise CommandError(f"{self.prog}: {message}")


def _shown(name: str) -> str:
    value = getattr(DEFAULTS, name)
    if value is None:
        return "unlimited" if name == "max_depth" else "none"
    return str(value)


def _default(name: str) -> str:
    return f"(default: {_shown(name)})"


def _settings_epilog(note: str) -> str:
    """Every run setting with its default, as printed under --help."""
    names = [f.name for f in fields(RunConfig)]
    width = max(map(len, names))
    lines = [f"run settings (config-file key and default); {note}:"]
    lines += [f"  {name.ljust(width)}  {_shown(name)}" for name in names]
    lines.append(f"precedence: flag, then {SEED_ENV} (seed only), then the --config file, then the default")
    return "\n".join(lines)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value file with run settings (flags win over it)")
    parser.add_argument("--workers", type=int, help=f"thread count for per-session/per-user work {_default('workers')}")
    parser.add_argument("--log-level", type=str.upper, choices=LOG_LEVELS, help=f"stderr log level {_default('log_level')}")


def _add_segmentation(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", help=f"dataset root with one directory per user {_default('input')}")
    parser.add_argument("--gap-threshold", type=float, help=f"seconds of silence that end an action {_default('gap_threshold')}")
    parser.add_argument("--min-points", type=int, help=f"shortest kept action, in events {_default('min_points')}")
    parser.add_argument(
        "--curvature-threshold", type=float, help=f"curvature counted as a critical point {_default('curvature_threshold')}"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mousedyn", description="Mouse-dynamics user authentication experiments")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)

    extract = sub.add_parser(
        "extract",
        help="segment sessions into actions and write the feature table",
        epilog=_settings_epilog("extract reads input, segmentation, curvature_threshold, output, workers and log_level"),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    _add_segmentation(extract)
    extract.add_argument("--output", help=f"feature CSV path, or a directory to hold features.csv {_default('output')}")
    _add_common(extract)
    extract.set_defaults(handler=cmd_extract)

    experiment = sub.add_parser(
        "experiment",
        help="run verification, scenario a or scenario b",
        epilog=_settings_epilog("experiment reads all of them"),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    _add_segmentation(experiment)
    experiment.add_argument("--features", help=f"feature CSV written by `extract` (instead of --input) {_default('features')}")
    experiment.add_argument("--output", help=f"report directory {_default('output')}")
    experiment.add_argument("--scenario", type=str.lower, choices=SCENARIOS, help=f"experiment {_default('scenario')}")
    experiment.add_argument("--action", type=str.lower, choices=ACTIONS, help=f"action kind, scenario b only {_default('action')}")
    experiment.add_argument("--model", type=str.lower, choices=MODELS, help=f"classifier {_default('model')}")
    experiment.add_argument("--seed", type=int, help=f"master seed; {SEED_ENV} overrides the default {_default('seed')}")
    experiment.add_argument("--split-ratio", type=float, help=f"training fraction {_default('split_ratio')}")
    experiment.add_argument("--k", type=int, help=f"KNN neighbor count {_default('k')}")
    experiment.add_argument("--n-trees", type=int, help=f"random forest size {_default('n_trees')}")
    experiment.add_argument("--max-depth", type=optional_int, help=f"tree depth limit {_default('max_depth')}")
    experiment.add_argument("--min-leaf", type=int, help=f"fewest samples per leaf {_default('min_leaf')}")
    experiment.add_argument(
        "--impostor-ratio", type=float, help=f"impostor cap as a multiple of genuine rows {_default('impostor_ratio')}"
    )
    experiment.add_argument(
        "--min-user-actions", type=int, help=f"users with fewer actions are skipped {_default('min_user_actions')}"
    )
    experiment.add_argument("--threshold", type=float, help=f"acceptance score for ACC/FAR/FRR {_default('threshold')}")
    _add_common(experiment)
    experiment.set_defaults(handler=cmd_experiment)

    roc = sub.add_parser(
        "roc",
        help="render ROC curves from a report JSON as SVG",
        epilog=_settings_epilog("roc reads only log_level"),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    roc.add_argument("--report", required=True, help="report JSON written by `experiment`")
    roc.add_argument("--output", help="SVG path (overlay) or directory (split); default: next to the report")
    roc.add_argument("--mode", choices=("overlay", "split"), default="overlay", help="one plot or one per user (default: overlay)")
    roc.add_argument("--log-level", type=str.upper, choices=LOG_LEVELS, help=f"stderr log level {_default('log_level')}")
    roc.set_defaults(handler=cmd_roc)
    return parser


def config_from_args(args: argparse.Namespace, env: dict[str, str] | None = None) -> RunConfig:
    flags: dict[str, Any] = {k: v for k, v in vars(args).items() if k not in {"command", "handler", "config", "report", "mode"}}
    file_values = load_config_file(args.config) if getattr(args, "config", None) else {}
    return resolve_config(file_values, os.environ if env is None else env, flags)


def _feature_table(cfg: RunConfig) -> FeatureTable:
    if cfg.features:
        return load_feature_table(cfg.features)
    if cfg.input:
        return extract_all(load_dataset(cfg.input, cfg.workers), cfg.segment_config(), cfg.feature_config())
    raise CommandError("one of --input or --features is required")


def cmd_extract(args: argparse.Namespace, cfg: RunConfig) -> int:
    if not cfg.input:
        raise CommandError("--input is required")
    table = extract_all(load_dataset(cfg.input, cfg.workers), cfg.segment_config(), cfg.feature_config())
    if len(table) == 0:
        raise DatasetError(f"no actions extracted from {cfg.input}")
    out = Path(args.output or cfg.output)
    if out.suffix.lower() != ".csv":
        out = out / "features.csv"
    write_feature_table(table, out)
    logger.info("wrote %d feature rows to %s", len(table), out)
    print(render_action_counts(table.counts_by_user()))
    return EXIT_OK


def _write_report(report: EvalReport, out_dir: Path) -> None:
    report.to_json(out_dir / f"{report.stem}.json")
    report.to_csv(out_dir / f"{report.stem}.csv")
    report.write_roc_csvs(out_dir / "roc")
    print(render_report(report))
    print()


def cmd_experiment(args: argparse.Namespace, cfg: RunConfig) -> int:
    table = _feature_table(cfg)
    out_dir = Path(cfg.output)
    options = dict(protocol=cfg.protocol(), threshold=cfg.threshold, workers=cfg.workers)
    for spec in cfg.model_specs():
        if cfg.scenario == "verify":
            _write_report(run_verification(table, spec, cfg.seed, **options), out_dir)
        elif cfg.scenario == "a":
            _write_report(run_scenario_a(table, spec, cfg.seed, **options), out_dir)
        else:
            for kind in cfg.action_kinds():
                _write_report(run_scenario_b(table, kind, spec, cfg.seed, **options), out_dir)
    return EXIT_OK


def cmd_roc(args: argparse.Namespace, cfg: RunConfig) -> int:
    report_path = Path(args.report)
    report = EvalReport.from_json(report_path)
    if args.output:
        output = Path(args.output)
    elif args.mode == "overlay":
        output = report_path.with_suffix(".svg")
    else:
        output = report_path.parent
    for path in write_roc_plots(report, output, args.mode):
        print(path)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "handler", None) is None:
            parser.print_help()
            return EXIT_USAGE
        cfg = config_from_args(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (CommandError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    logging.basicConfig(level=cfg.log_level, format=LOG_FORMAT, stream=sys.stderr)
    try:
        return args.handler(args, cfg)
    except CommandError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
