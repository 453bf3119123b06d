from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import asdict, dataclass
from pathlib import Path
import re
from typing import Any

from actions.base import ActionKind
from actions.segmentation import SegmentConfig
from engine.scenario import ProtocolConfig
from features.extraction import FeatureConfig
from models.factory import MODEL_NAMES, ModelSpec

SEED_ENV = "MOUSEDYN_SEED"
_COMMENT = re.compile(r"(?:^|\s)#")
SCENARIOS = ("verify", "a", "b")
ACTIONS = ("mm", "pc", "dd", "all")
MODELS = (*MODEL_NAMES, "all")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class ConfigError(ValueError):
    """Invalid knob value, unknown key or conflicting options."""


@dataclass(frozen=True)
class RunConfig:
    input: str | None = None
    features: str | None = None
    output: str = "results"
    seed: int = 42
    split_ratio: float = 0.7
    gap_threshold: float = 10.0
    min_points: int = 4
    curvature_threshold: float = 0.5
    k: int = 5
    n_trees: int = 100
    max_depth: int | None = None
    min_leaf: int = 1
    impostor_ratio: float = 1.0
    min_user_actions: int = 10
    threshold: float = 0.5
    scenario: str = "a"
    action: str = "all"
    model: str = "all"
    workers: int = 1
    log_level: str = "INFO"

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        checks = [
            (0.0 < self.split_ratio < 1.0, "split_ratio must be in (0, 1)"),
            (self.gap_threshold > 0.0, "gap_threshold must be > 0"),
            (self.min_points >= 4, "min_points must be >= 4"),
            (self.curvature_threshold >= 0.0, "curvature_threshold must be >= 0"),
            (self.k >= 1, "k must be >= 1"),
            (self.n_trees >= 1, "n_trees must be >= 1"),
            (self.max_depth is None or self.max_depth >= 1, "max_depth must be >= 1"),
            (self.min_leaf >= 1, "min_leaf must be >= 1"),
            (self.impostor_ratio > 0.0, "impostor_ratio must be > 0"),
            (self.min_user_actions >= 2, "min_user_actions must be >= 2"),
            (0.0 <= self.threshold <= 1.0, "threshold must be in [0, 1]"),
            (self.scenario in SCENARIOS, f"scenario must be one of: {', '.join(SCENARIOS)}"),
            (self.action in ACTIONS, f"action must be one of: {', '.join(ACTIONS)}"),
            (self.model in MODELS, f"model must be one of: {', '.join(MODELS)}"),
            (self.workers >= 1, "workers must be >= 1"),
            (self.log_level in LOG_LEVELS, f"log_level must be one of: {', '.join(LOG_LEVELS)}"),
            (
                self.action == "all" or self.scenario == "b",
                f"action {self.action!r} only applies to scenario b",
            ),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)

    def segment_config(self) -> SegmentConfig:
        return SegmentConfig(gap_threshold=self.gap_threshold, min_points=self.min_points)

    def feature_config(self) -> FeatureConfig:
        return FeatureConfig(curvature_threshold=self.curvature_threshold)

    def protocol(self) -> ProtocolConfig:
        return ProtocolConfig(
            split_ratio=self.split_ratio,
            impostor_ratio=self.impostor_ratio,
            min_user_actions=self.min_user_actions,
        )

    def model_specs(self) -> list[ModelSpec]:
        names = MODEL_NAMES if self.model == "all" else (self.model,)
        return [
            ModelSpec(
                name=name,
                k=self.k,
                max_depth=self.max_depth,
                min_leaf=self.min_leaf,
                n_trees=self.n_trees,
                workers=self.workers,
            )
            for name in names
        ]

    def action_kinds(self) -> list[ActionKind]:
        """Kinds run by scenario b; `all` expands to every kind."""
        if self.action == "all":
            return list(ActionKind)
        return [ActionKind.parse(self.action)]


DEFAULTS = RunConfig()


def optional_int(text: str) -> int | None:
    return None if text.strip().lower() in {"", "none", "unlimited"} else int(text)


def _optional_str(text: str) -> str | None:
    return text or None


_CONVERTERS: dict[str, Callable[[str], Any]] = {
    "input": _optional_str,
    "features": _optional_str,
    "output": str,
    "seed": int,
    "split_ratio": float,
    "gap_threshold": float,
    "min_points": int,
    "curvature_threshold": float,
    "k": int,
    "n_trees": int,
    "max_depth": optional_int,
    "min_leaf": int,
    "impostor_ratio": float,
    "min_user_actions": int,
    "threshold": float,
    "scenario": str.lower,
    "action": str.lower,
    "model": str.lower,
    "workers": int,
    "log_level": str.upper,
}


def convert(key: str, text: str) -> Any:
    if key not in _CONVERTERS:
        raise ConfigError(f"unknown config key {key!r}")
    try:
        return _CONVERTERS[key](text.strip())
    except ValueError:
        raise ConfigError(f"bad value for {key}: {text.strip()!r}") from None


def parse_config_text(text: str, source: str = "<config>") -> dict[str, Any]:
    """`key = value` lines; dashes in keys read as underscores.

    `#` starts a comment at the beginning of a line or after whitespace, so a
    value such as `data/run#2` keeps its `#`.
    """
    values: dict[str, Any] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _COMMENT.split(raw, maxsplit=1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{number}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        try:
            values[key] = convert(key, value)
        except ConfigError as exc:
            raise ConfigError(f"{source}:{number}: {exc}") from None
    return values


def load_config_file(path: str | Path) -> dict[str, Any]:
    p = Path(path)
    return parse_config_text(p.read_text(encoding="utf-8"), source=str(p))


def resolve_config(
    file_values: Mapping[str, Any] | None = None,
    env: Mapping[str, str] | None = None,
    flags: Mapping[str, Any] | None = None,
) -> RunConfig:
    """Defaults < config file < MOUSEDYN_SEED < flags; flags set to None are absent."""
    merged = asdict(DEFAULTS)
    merged.update(file_values or {})
    if env and env.get(SEED_ENV, "").strip():
        try:
            merged["seed"] = convert("seed", env[SEED_ENV])
        except ConfigError:
            raise ConfigError(f"{SEED_ENV} must be an integer, got {env[SEED_ENV]!r}") from None
    merged.update({k: v for k, v in (flags or {}).items() if v is not None and k in merged})
    return RunConfig(**merged)
