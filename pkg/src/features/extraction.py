from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
import logging
import math

import numpy as np

from actions.base import Action, ActionKind
from actions.segmentation import SegmentConfig, segment_actions
from features.kinematics import EPS, KinematicSeries, kinematics
from io_layer.events import Dataset

logger = logging.getLogger(__name__)

_STAT_FAMILIES = ("curv", "omega", "vx", "vy", "v", "a", "jerk")


def _stats(family: str) -> list[str]:
    return [f"{p}_{family}" for p in ("mean", "sd", "max", "min")]


FEATURE_NAMES: tuple[str, ...] = tuple(
    [
        "type_of_action",
        "travelled_distance_in_pixels",
        "elapsed_time",
        "direction_of_movement",
        "straightness",
        "num_points",
        "sum_of_angles",
        *_stats("curv"),
        *_stats("omega"),
        "largest_deviation",
        "dist_end_to_end_line",
        "num_critical_points",
        *_stats("vx"),
        *_stats("vy"),
        *_stats("v"),
        *_stats("a"),
        *_stats("jerk"),
        "a_beg_time",
    ]
)
FEATURE_INDEX = {name: i for i, name in enumerate(FEATURE_NAMES)}
N_FEATURES = len(FEATURE_NAMES)
# Relative tolerance for speed and curvature ties.
TIE_RTOL = 1e-9
PROVENANCE_COLUMNS = ("user_id", "session_id", "action_id", "kind")


@dataclass(frozen=True)
class FeatureConfig:
    curvature_threshold: float = 0.5
    eps: float = EPS

    def __post_init__(self) -> None:
        if self.curvature_threshold < 0.0:
            raise ValueError("curvature_threshold must be >= 0")
        if not self.eps > 0.0:
            raise ValueError("eps must be > 0")


@dataclass(frozen=True)
class FeatureVector:
    user_id: str
    session_id: str
    action_id: int
    kind: ActionKind
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.values.shape != (N_FEATURES,):
            raise ValueError(f"expected {N_FEATURES} feature values")

    def __getitem__(self, name: str) -> float:
        return float(self.values[FEATURE_INDEX[name]])

    def as_dict(self) -> dict[str, float]:
        return {name: float(v) for name, v in zip(FEATURE_NAMES, self.values)}


def largest_deviation(points: np.ndarray) -> float:
    """Largest perpendicular distance of an interior point to the end-to-end line.

    With coincident endpoints the line is undefined and the largest distance
    from the first point is used instead.
    """
    xy = np.asarray(points, dtype=float)[:, -2:]
    if xy.shape[0] < 2:
        raise ValueError("largest_deviation needs at least two points")
    start, end = xy[0], xy[-1]
    chord = end - start
    length = float(np.hypot(chord[0], chord[1]))
    if length < EPS:
        return float(np.max(np.hypot(xy[:, 0] - start[0], xy[:, 1] - start[1])))
    interior = xy[1:-1] - start
    if interior.shape[0] == 0:
        return 0.0
    cross = np.abs(chord[0] * interior[:, 1] - chord[1] * interior[:, 0])
    return float(np.max(cross) / length)


def _above(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a > b by more than rounding noise, relative to |b| once |b| exceeds 1."""
    return a > b + TIE_RTOL * np.maximum(1.0, np.abs(b))


def num_critical_points(curv: np.ndarray, cfg: FeatureConfig | None = None) -> int:
    """Strict local maxima of |curv| at or above the curvature threshold.

    Neighbours within TIE_RTOL count as equal, so a plateau has no peak.
    """
    cfg = cfg or FeatureConfig()
    c = np.abs(np.asarray(curv, dtype=float))
    if c.size == 0:
        return 0
    over_left = np.ones(c.size, dtype=bool)
    over_left[1:] = _above(c[1:], c[:-1])
    over_right = np.ones(c.size, dtype=bool)
    over_right[:-1] = _above(c[:-1], c[1:])
    floor = cfg.curvature_threshold - TIE_RTOL * max(1.0, cfg.curvature_threshold)
    peaks = over_left & over_right & (c >= floor)
    return int(np.count_nonzero(peaks))


def a_beg_time(v: np.ndarray, dt: np.ndarray) -> float:
    """Time from the action start until the speed reaches its first peak.

    The peak is the last sample of the leading non-decreasing run of `v`;
    a speed that never decreases gives the whole duration. Drops within
    TIE_RTOL are ties, not falls.
    """
    v = np.asarray(v, dtype=float)
    dt = np.asarray(dt, dtype=float)
    falls = np.flatnonzero(_above(v[:-1], v[1:]))
    end = int(falls[0]) if falls.size else v.size - 1
    return float(np.sum(dt[: end + 1]))


def extract_features(action: Action, cfg: FeatureConfig | None = None) -> FeatureVector:
    cfg = cfg or FeatureConfig()
    ks = kinematics(action)
    first, last = action.points[0], action.points[-1]
    end_dx, end_dy = float(last[1] - first[1]), float(last[2] - first[2])

    travelled = float(np.sum(ks.ds))
    end_to_end = math.hypot(end_dx, end_dy)
    if end_to_end < cfg.eps:
        direction = 0.0
        straightness = 0.0
    else:
        direction = math.atan2(end_dy, end_dx)
        straightness = min(1.0, max(0.0, end_to_end / max(travelled, cfg.eps)))

    values: dict[str, float] = {
        "type_of_action": float(action.kind.code),
        "travelled_distance_in_pixels": travelled,
        "elapsed_time": float(action.t[-1] - action.t[0]),
        "direction_of_movement": direction,
        "straightness": straightness,
        "num_points": float(len(action)),
        "sum_of_angles": float(np.sum(np.abs(ks.dtheta))),
        "largest_deviation": largest_deviation(action.points),
        "dist_end_to_end_line": end_to_end,
        "num_critical_points": float(num_critical_points(ks.curv, cfg)),
        "a_beg_time": a_beg_time(ks.v, ks.dt),
    }
    for family in _STAT_FAMILIES:
        values.update(_family_stats(family, getattr(ks, family)))

    return FeatureVector(
        user_id=action.user_id,
        session_id=action.session_id,
        action_id=action.action_id,
        kind=action.kind,
        values=np.array([values[name] for name in FEATURE_NAMES], dtype=float),
    )


def _family_stats(family: str, series: np.ndarray) -> dict[str, float]:
    if series.size == 0:
        return dict.fromkeys(_stats(family), 0.0)
    mean = float(np.mean(series))
    lo, hi = float(np.min(series)), float(np.max(series))
    # Summation error can leave the mean an ulp outside [min, max].
    mean = min(max(mean, lo), hi)
    return {
        f"mean_{family}": mean,
        f"sd_{family}": float(np.std(series)),
        f"max_{family}": hi,
        f"min_{family}": lo,
    }


@dataclass(frozen=True)
class FeatureTable:
    """Feature rows with provenance; `matrix` is (n, 39) in FEATURE_NAMES order."""

    user_ids: tuple[str, ...] = ()
    session_ids: tuple[str, ...] = ()
    action_ids: tuple[int, ...] = ()
    kinds: tuple[ActionKind, ...] = ()
    matrix: np.ndarray = field(default_factory=lambda: np.zeros((0, N_FEATURES)))

    def __post_init__(self) -> None:
        n = len(self.user_ids)
        if not (len(self.session_ids) == len(self.action_ids) == len(self.kinds) == n):
            raise ValueError("provenance columns must have equal length")
        if self.matrix.shape != (n, N_FEATURES):
            raise ValueError(f"matrix must have shape ({n}, {N_FEATURES})")

    def __len__(self) -> int:
        return len(self.user_ids)

    @classmethod
    def from_vectors(cls, vectors: Iterable[FeatureVector]) -> "FeatureTable":
        rows = list(vectors)
        matrix = np.vstack([r.values for r in rows]) if rows else np.zeros((0, N_FEATURES))
        return cls(
            user_ids=tuple(r.user_id for r in rows),
            session_ids=tuple(r.session_id for r in rows),
            action_ids=tuple(r.action_id for r in rows),
            kinds=tuple(r.kind for r in rows),
            matrix=matrix,
        )

    def rows(self) -> list[FeatureVector]:
        return [
            FeatureVector(
                user_id=self.user_ids[i],
                session_id=self.session_ids[i],
                action_id=self.action_ids[i],
                kind=self.kinds[i],
                values=self.matrix[i].copy(),
            )
            for i in range(len(self))
        ]

    def take(self, indices: Iterable[int]) -> "FeatureTable":
        idx = np.asarray(list(indices), dtype=np.int64)
        return FeatureTable(
            user_ids=tuple(self.user_ids[i] for i in idx),
            session_ids=tuple(self.session_ids[i] for i in idx),
            action_ids=tuple(self.action_ids[i] for i in idx),
            kinds=tuple(self.kinds[i] for i in idx),
            matrix=self.matrix[idx].reshape(-1, N_FEATURES),
        )

    def filter_kind(self, kind: ActionKind) -> "FeatureTable":
        return self.take(i for i, k in enumerate(self.kinds) if k is kind)

    def for_user(self, user_id: str) -> "FeatureTable":
        return self.take(i for i, u in enumerate(self.user_ids) if u == user_id)

    def users(self) -> list[str]:
        """Distinct user ids in first-appearance order."""
        return list(dict.fromkeys(self.user_ids))

    def counts_by_user(self) -> dict[str, dict[ActionKind, int]]:
        counts: dict[str, dict[ActionKind, int]] = {}
        for user_id, kind in zip(self.user_ids, self.kinds):
            counts.setdefault(user_id, {k: 0 for k in ActionKind})[kind] += 1
        return counts


def extract_all(
    dataset: Dataset,
    seg_cfg: SegmentConfig | None = None,
    feat_cfg: FeatureConfig | None = None,
) -> FeatureTable:
    """One feature row per retained action, in dataset (user, session, action) order."""
    seg_cfg = seg_cfg or SegmentConfig()
    feat_cfg = feat_cfg or FeatureConfig()
    vectors: list[FeatureVector] = []
    for user_id, sessions in dataset.users.items():
        before = len(vectors)
        for session in sessions:
            vectors.extend(extract_features(a, feat_cfg) for a in segment_actions(session, seg_cfg))
        logger.info("user %s: %d actions", user_id, len(vectors) - before)
    return FeatureTable.from_vectors(vectors)
