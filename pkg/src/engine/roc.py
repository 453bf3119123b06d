from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from engine.metrics import check_scores
from models.base import GENUINE


@dataclass(frozen=True)
class ROCCurve:
    """Operating points from (0, 0) to (1, 1).

    thresholds[0] is +inf (nothing accepted); thresholds[i] for i > 0 is the
    distinct score accepted at and above by point i.
    """

    fpr: np.ndarray
    tpr: np.ndarray
    thresholds: np.ndarray

    def __post_init__(self) -> None:
        if not (self.fpr.shape == self.tpr.shape == self.thresholds.shape) or self.fpr.size < 2:
            raise ValueError("a curve needs matching fpr/tpr/threshold arrays with >= 2 points")

    def points(self) -> list[tuple[float, float]]:
        return [(float(f), float(t)) for f, t in zip(self.fpr, self.tpr)]


def roc_curve(scores: np.ndarray, labels: np.ndarray) -> ROCCurve:
    """Sweep every distinct score as an acceptance threshold (descending).

    Equal scores share one threshold, so ties produce a single diagonal step.
    """
    s, y = check_scores(scores, labels)
    n_pos = int(np.count_nonzero(y == GENUINE))
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("roc_curve needs both genuine and impostor samples")

    order = np.argsort(-s, kind="stable")
    s_sorted = s[order]
    pos = (y[order] == GENUINE).astype(np.int64)
    # last index of every run of equal scores
    ends = np.flatnonzero(np.append(s_sorted[1:] != s_sorted[:-1], True))
    tp = np.cumsum(pos)[ends]
    fp = (ends + 1) - tp
    fpr = np.concatenate(([0.0], fp / n_neg))
    tpr = np.concatenate(([0.0], tp / n_pos))
    fpr[-1] = 1.0
    tpr[-1] = 1.0
    thresholds = np.concatenate(([np.inf], s_sorted[ends]))
    return ROCCurve(fpr=fpr, tpr=tpr, thresholds=thresholds)


def auc(curve: ROCCurve) -> float:
    """Trapezoidal area under the curve."""
    dx = np.diff(curve.fpr)
    return float(np.sum(dx * (curve.tpr[1:] + curve.tpr[:-1]) / 2.0))


def eer_roc(curve: ROCCurve) -> float:
    """FPR where the curve crosses FPR = 1 - TPR, linear between bracketing points."""
    gap = curve.fpr - (1.0 - curve.tpr)
    i = int(np.argmax(gap >= 0.0))
    if gap[i] == 0.0 or i == 0:
        return float(curve.fpr[i])
    lo, hi = gap[i - 1], gap[i]
    alpha = -lo / (hi - lo)
    return float(curve.fpr[i - 1] + alpha * (curve.fpr[i] - curve.fpr[i - 1]))
