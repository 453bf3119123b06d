from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from models.base import GENUINE, IMPOSTOR
from utils.rng import Xoshiro256StarStar

Provenance = tuple[str, str, int]


class StratificationError(ValueError):
    """Raised when a label has too few samples to appear in both splits."""


@dataclass(frozen=True)
class LabeledSample:
    features: np.ndarray
    label: int
    provenance: Provenance = ("", "", 0)


@dataclass(frozen=True)
class LabeledSet:
    """Feature matrix, integer labels and per-row provenance (user, session, action)."""

    features: np.ndarray
    labels: np.ndarray
    provenance: tuple[Provenance, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.features.ndim != 2:
            raise ValueError("features must be two-dimensional")
        if self.labels.shape != (self.features.shape[0],):
            raise ValueError("labels must have one entry per feature row")
        if self.provenance and len(self.provenance) != self.labels.size:
            raise ValueError("provenance must have one entry per row")
        if not np.all(np.isfinite(self.features)):
            raise ValueError("features must be finite")

    def __len__(self) -> int:
        return int(self.labels.size)

    def sample(self, i: int) -> LabeledSample:
        prov = self.provenance[i] if self.provenance else ("", "", i)
        return LabeledSample(features=self.features[i], label=int(self.labels[i]), provenance=prov)

    def take(self, indices: np.ndarray) -> "LabeledSet":
        idx = np.asarray(indices, dtype=np.int64)
        return LabeledSet(
            features=self.features[idx].reshape(-1, self.features.shape[1]),
            labels=self.labels[idx],
            provenance=tuple(self.provenance[i] for i in idx) if self.provenance else (),
        )

    def class_counts(self) -> dict[int, int]:
        values, counts = np.unique(self.labels, return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts)}

    @property
    def n_genuine(self) -> int:
        return int(np.count_nonzero(self.labels == GENUINE))

    @property
    def n_impostor(self) -> int:
        return int(np.count_nonzero(self.labels == IMPOSTOR))


def train_test_split(
    samples: LabeledSet,
    ratio: float = 0.7,
    seed: int = 42,
    *,
    single_class_ok: bool = False,
) -> tuple[LabeledSet, LabeledSet]:
    """Stratified seeded split.

    Per label (ascending), the label's rows are shuffled and the first
    floor(ratio * n_label) go to training; both halves are then shuffled
    again so classes are interleaved. Input holding a single label cannot be
    stratified and is rejected unless `single_class_ok` is set (the
    positive-only verification stage).
    """
    if not (0.0 < ratio < 1.0):
        raise ValueError("ratio must be in (0, 1)")
    if len(samples) == 0:
        raise ValueError("cannot split an empty sample set")
    if len(samples.class_counts()) < 2 and not single_class_ok:
        raise StratificationError("cannot stratify single-class input")
    rng = Xoshiro256StarStar(seed)
    train_idx: list[int] = []
    test_idx: list[int] = []
    for label in sorted(samples.class_counts()):
        rows = np.flatnonzero(samples.labels == label).tolist()
        if len(rows) < 2:
            raise StratificationError(f"label {label} has {len(rows)} sample(s); need at least 2 to stratify")
        rng.shuffle(rows)
        cut = math.floor(ratio * len(rows))
        train_idx.extend(rows[:cut])
        test_idx.extend(rows[cut:])
    rng.shuffle(train_idx)
    rng.shuffle(test_idx)
    return samples.take(np.array(train_idx, dtype=np.int64)), samples.take(np.array(test_idx, dtype=np.int64))


def impostor_cap(n_genuine: int, ratio: float) -> int:
    return int(math.floor(ratio * n_genuine))


def sample_impostors(pool_size: int, n_genuine: int, ratio: float, rng: Xoshiro256StarStar) -> np.ndarray:
    """Uniform draw without replacement of at most ratio * n_genuine pool rows.

    Returned indices are sorted so the impostor block keeps pool order.
    """
    if ratio <= 0.0:
        raise ValueError("impostor ratio must be > 0")
    k = min(pool_size, impostor_cap(n_genuine, ratio))
    return np.sort(rng.sample(pool_size, k))
