from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import logging
import math
from pathlib import Path
from typing import Any

import numpy as np

from actions.base import ActionKind
from engine.metrics import ConfusionMatrix, confusion, eer_eq8, far_frr, metrics
from engine.roc import ROCCurve, auc, eer_roc, roc_curve
from engine.scenario import AuthenticationTaskGenerator, ProtocolConfig, TaskGenerator, UserTask, VerificationTaskGenerator
from features.extraction import FeatureTable
from io_layer.reports import (
    ReportSchemaError,
    format_metric,
    json_number,
    load_json_object,
    optional_number,
    require,
    write_csv_rows,
    write_json,
)
from models.factory import ModelSpec

logger = logging.getLogger(__name__)

METRIC_COLUMNS = ("acc", "auc", "far", "frr", "eer_eq8", "eer_roc")
COUNT_COLUMNS = ("tp", "tn", "fp", "fn", "n_train", "n_test", "n_genuine", "n_impostor")
AVERAGE_LABEL = "Avg"


@dataclass(frozen=True)
class UserResult:
    user_id: str
    acc: float | None
    auc: float | None
    far: float | None
    frr: float | None
    eer_eq8: float | None
    eer_roc: float | None
    confusion: ConfusionMatrix
    n_train: int
    n_test: int
    n_genuine: int
    n_impostor: int
    roc: ROCCurve | None = None

    def metric(self, name: str) -> float | None:
        return getattr(self, name)

    def counts(self) -> dict[str, int]:
        return {
            **self.confusion.as_dict(),
            "n_train": self.n_train,
            "n_test": self.n_test,
            "n_genuine": self.n_genuine,
            "n_impostor": self.n_impostor,
        }


@dataclass(frozen=True)
class EvalReport:
    """Per-user results of one (scenario, action, model) experiment."""

    scenario: str
    action: str
    model: str
    seed: int
    threshold: float
    rows: tuple[UserResult, ...] = ()

    @property
    def stem(self) -> str:
        return f"{self.scenario}_{self.action}_{self.model}"

    def user_ids(self) -> list[str]:
        return [r.user_id for r in self.rows]

    def average(self) -> dict[str, float | None]:
        """Column means over the users where the column is defined."""
        out: dict[str, float | None] = {}
        for name in METRIC_COLUMNS:
            values = [v for v in (r.metric(name) for r in self.rows) if v is not None]
            out[name] = float(np.mean(values)) if values else None
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "scenario": self.scenario,
            "action": self.action,
            "model": self.model,
            "seed": self.seed,
            "threshold": self.threshold,
            "users": [_row_to_dict(r) for r in self.rows],
            "average": {name: json_number(v) for name, v in self.average().items()},
        }

    def to_json(self, path: str | Path) -> Path:
        return write_json(path, self.to_dict())

    def to_csv(self, path: str | Path) -> Path:
        rows: list[list[object]] = []
        for r in self.rows:
            counts = r.counts()
            rows.append([r.user_id, *(format_metric(r.metric(n)) for n in METRIC_COLUMNS), *(counts[c] for c in COUNT_COLUMNS)])
        avg = self.average()
        rows.append([AVERAGE_LABEL, *(format_metric(avg[n]) for n in METRIC_COLUMNS), *([""] * len(COUNT_COLUMNS))])
        return write_csv_rows(path, ["user_id", *METRIC_COLUMNS, *COUNT_COLUMNS], rows)

    def write_roc_csvs(self, directory: str | Path) -> list[Path]:
        """One `threshold,fpr,tpr` file per user that has a curve."""
        written: list[Path] = []
        for r in self.rows:
            if r.roc is None:
                continue
            points = zip(r.roc.thresholds, r.roc.fpr, r.roc.tpr)
            written.append(
                write_csv_rows(
                    Path(directory) / f"{self.stem}_user{r.user_id}.csv",
                    ["threshold", "fpr", "tpr"],
                    ([repr(float(t)), repr(float(f)), repr(float(p))] for t, f, p in points),
                )
            )
        return written

    @classmethod
    def from_dict(cls, payload: dict[str, Any], where: str = "report") -> "EvalReport":
        users = require(payload, "users", list, where)
        return cls(
            scenario=require(payload, "scenario", str, where),
            action=require(payload, "action", str, where),
            model=require(payload, "model", str, where),
            seed=require(payload, "seed", int, where),
            threshold=float(require(payload, "threshold", (int, float), where)),
            rows=tuple(_row_from_dict(u, f"{where}: users[{i}]") for i, u in enumerate(users)),
        )

    @classmethod
    def from_json(cls, path: str | Path) -> "EvalReport":
        return cls.from_dict(load_json_object(path), where=str(path))


def _row_to_dict(r: UserResult) -> dict[str, Any]:
    roc = None
    if r.roc is not None:
        roc = {
            "threshold": [json_number(float(t)) for t in r.roc.thresholds],
            "fpr": [float(v) for v in r.roc.fpr],
            "tpr": [float(v) for v in r.roc.tpr],
        }
    return {
        "user_id": r.user_id,
        **{name: json_number(r.metric(name)) for name in METRIC_COLUMNS},
        "confusion": r.confusion.as_dict(),
        "n_train": r.n_train,
        "n_test": r.n_test,
        "n_genuine": r.n_genuine,
        "n_impostor": r.n_impostor,
        "roc": roc,
    }


def _row_from_dict(payload: Any, where: str) -> UserResult:
    cm = require(payload, "confusion", dict, where)
    roc_payload = require(payload, "roc", (dict, type(None)), where)
    roc = None
    if roc_payload is not None:
        # a null threshold is the +inf starting point
        thresholds = [math.inf if t is None else float(t) for t in require(roc_payload, "threshold", list, where)]
        fpr = require(roc_payload, "fpr", list, where)
        tpr = require(roc_payload, "tpr", list, where)
        try:
            roc = ROCCurve(
                fpr=np.asarray(fpr, dtype=float),
                tpr=np.asarray(tpr, dtype=float),
                thresholds=np.asarray(thresholds, dtype=float),
            )
        except (TypeError, ValueError) as exc:
            raise ReportSchemaError(f"{where}: bad roc arrays ({exc})") from exc
    try:
        matrix = ConfusionMatrix(**{k: require(cm, k, int, where) for k in ("tp", "tn", "fp", "fn")})
    except ValueError as exc:
        raise ReportSchemaError(f"{where}: {exc}") from exc
    return UserResult(
        user_id=str(require(payload, "user_id", (str, int), where)),
        **{name: optional_number(payload, name, where) for name in METRIC_COLUMNS},
        confusion=matrix,
        n_train=require(payload, "n_train", int, where),
        n_test=require(payload, "n_test", int, where),
        n_genuine=require(payload, "n_genuine", int, where),
        n_impostor=require(payload, "n_impostor", int, where),
        roc=roc,
    )


class EvaluationEngine:
    """Fits one model per user task and scores that user's held-out rows."""

    def __init__(self, spec: ModelSpec, threshold: float = 0.5, workers: int = 1):
        if not (0.0 <= threshold <= 1.0):
            raise ValueError("threshold must be in [0, 1]")
        if workers < 1:
            raise ValueError("workers must be >= 1")
        self.spec = spec
        self.threshold = threshold
        self.workers = workers

    def evaluate(self, task: UserTask) -> UserResult:
        model = self.spec.fit(task.train.features, task.train.labels, seed=task.seed)
        scores = model.score(task.test.features)
        labels = task.test.labels
        cm = confusion(scores, labels, self.threshold)
        rates = metrics(cm)

        curve: ROCCurve | None = None
        area = eer_curve = None
        if task.test.n_genuine and task.test.n_impostor:
            far, frr = far_frr(scores, labels, self.threshold)
            curve = roc_curve(scores, labels)
            area = auc(curve)
            eer_curve = eer_roc(curve)
        else:
            far, frr = rates.fpr, rates.fnr
        return UserResult(
            user_id=task.user_id,
            acc=rates.acc,
            auc=area,
            far=far,
            frr=frr,
            eer_eq8=eer_eq8(far, frr) if far is not None and frr is not None else None,
            eer_roc=eer_curve,
            confusion=cm,
            n_train=len(task.train),
            n_test=len(task.test),
            n_genuine=task.train.n_genuine + task.test.n_genuine,
            n_impostor=task.train.n_impostor + task.test.n_impostor,
            roc=curve,
        )

    def run(self, generator: TaskGenerator) -> EvalReport:
        tasks = generator.generate()
        if self.workers > 1 and len(tasks) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                rows = tuple(pool.map(self.evaluate, tasks))
        else:
            rows = tuple(self.evaluate(t) for t in tasks)
        report = EvalReport(
            scenario=generator.scenario,
            action=generator.action,
            model=self.spec.name,
            seed=generator.seed,
            threshold=self.threshold,
            rows=rows,
        )
        avg = report.average()
        logger.info(
            "%s: %d users, avg ACC %s, avg AUC %s",
            report.stem,
            len(rows),
            format_metric(avg["acc"]),
            format_metric(avg["auc"]),
        )
        return report


def run_verification(
    table: FeatureTable,
    spec: ModelSpec,
    seed: int = 42,
    *,
    protocol: ProtocolConfig | None = None,
    threshold: float = 0.5,
    workers: int = 1,
) -> EvalReport:
    """Genuine-only train and test per user; accuracy is the accepted fraction."""
    generator = VerificationTaskGenerator(table, seed=seed, protocol=protocol or ProtocolConfig())
    return EvaluationEngine(spec, threshold, workers).run(generator)


def run_scenario_a(
    table: FeatureTable,
    spec: ModelSpec,
    seed: int = 42,
    *,
    protocol: ProtocolConfig | None = None,
    threshold: float = 0.5,
    workers: int = 1,
) -> EvalReport:
    """Each user against impostor rows from everyone else, all action kinds."""
    generator = AuthenticationTaskGenerator(table, kind=None, seed=seed, protocol=protocol or ProtocolConfig())
    return EvaluationEngine(spec, threshold, workers).run(generator)


def run_scenario_b(
    table: FeatureTable,
    kind: ActionKind,
    spec: ModelSpec,
    seed: int = 42,
    *,
    protocol: ProtocolConfig | None = None,
    threshold: float = 0.5,
    workers: int = 1,
) -> EvalReport:
    """Scenario A restricted to one action kind."""
    generator = AuthenticationTaskGenerator(table, kind=kind, seed=seed, protocol=protocol or ProtocolConfig())
    return EvaluationEngine(spec, threshold, workers).run(generator)
