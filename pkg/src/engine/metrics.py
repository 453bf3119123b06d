from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from models.base import GENUINE, IMPOSTOR


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0

    def __post_init__(self) -> None:
        if min(self.tp, self.tn, self.fp, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def as_dict(self) -> dict[str, int]:
        return {"tp": self.tp, "tn": self.tn, "fp": self.fp, "fn": self.fn}


@dataclass(frozen=True)
class Rates:
    """Accuracy and class rates; None marks a zero denominator."""

    acc: float | None
    tpr: float | None
    tnr: float | None
    fpr: float | None
    fnr: float | None


def _ratio(num: int, den: int) -> float | None:
    return num / den if den > 0 else None


def check_scores(scores: np.ndarray, labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels, dtype=np.int64)
    if s.ndim != 1 or s.shape != y.shape:
        raise ValueError("scores and labels must be one-dimensional and of equal length")
    if s.size == 0:
        raise ValueError("scores must be non-empty")
    if not np.all((y == GENUINE) | (y == IMPOSTOR)):
        raise ValueError("labels must be GENUINE (1) or IMPOSTOR (0)")
    return s, y


def confusion(scores: np.ndarray, labels: np.ndarray, threshold: float = 0.5) -> ConfusionMatrix:
    """Genuine rows scoring >= threshold are accepted (positive)."""
    s, y = check_scores(scores, labels)
    accepted = s >= threshold
    genuine = y == GENUINE
    return ConfusionMatrix(
        tp=int(np.count_nonzero(accepted & genuine)),
        tn=int(np.count_nonzero(~accepted & ~genuine)),
        fp=int(np.count_nonzero(accepted & ~genuine)),
        fn=int(np.count_nonzero(~accepted & genuine)),
    )


def metrics(cm: ConfusionMatrix) -> Rates:
    return Rates(
        acc=_ratio(cm.tp + cm.tn, cm.total),
        tpr=_ratio(cm.tp, cm.tp + cm.fn),
        tnr=_ratio(cm.tn, cm.tn + cm.fp),
        fpr=_ratio(cm.fp, cm.fp + cm.tn),
        fnr=_ratio(cm.fn, cm.fn + cm.tp),
    )


def far_frr(scores: np.ndarray, labels: np.ndarray, threshold: float = 0.5) -> tuple[float, float]:
    """(accepted impostors / impostors, rejected genuines / genuines)."""
    cm = confusion(scores, labels, threshold)
    if cm.tp + cm.fn == 0 or cm.fp + cm.tn == 0:
        raise ValueError("far_frr needs both genuine and impostor samples")
    return cm.fp / (cm.fp + cm.tn), cm.fn / (cm.fn + cm.tp)


def eer_eq8(far: float, frr: float) -> float:
    """Mean of FAR and FRR at one operating point (a half total error rate)."""
    if not (0.0 <= far <= 1.0 and 0.0 <= frr <= 1.0):
        raise ValueError("FAR and FRR must lie in [0, 1]")
    return (far + frr) / 2.0
