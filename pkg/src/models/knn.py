from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from models.base import GENUINE, Classifier, check_queries, check_training_data
from models.scaler import Scaler, fit_scaler


@dataclass(frozen=True)
class KnnModel(Classifier):
    """Brute-force Euclidean k-nearest-neighbors vote.

    Equal distances are resolved in favour of the lower training index.
    """

    train: np.ndarray
    labels: np.ndarray
    k: int = 5

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.k > self.train.shape[0]:
            raise ValueError(f"k={self.k} exceeds training size {self.train.shape[0]}")

    def neighbors(self, x: np.ndarray) -> np.ndarray:
        """Training indices of the k nearest samples, nearest first."""
        d2 = np.sum((self.train - x) ** 2, axis=1)
        kth = np.partition(d2, self.k - 1)[self.k - 1]
        cand = np.flatnonzero(d2 <= kth)
        order = cand[np.lexsort((cand, d2[cand]))]
        return order[: self.k]

    def score(self, X: np.ndarray) -> np.ndarray:
        X = check_queries(X, self.train.shape[1])
        genuine = self.labels == GENUINE
        return np.array([np.count_nonzero(genuine[self.neighbors(x)]) / self.k for x in X], dtype=float)


def knn_fit(X: np.ndarray, y: np.ndarray, k: int = 5) -> KnnModel:
    X, y = check_training_data(X, y)
    return KnnModel(train=X.copy(), labels=y.copy(), k=k)


@dataclass(frozen=True)
class ScaledKnn(Classifier):
    """KNN on standardized features; the scaler comes from the training split."""

    scaler: Scaler
    model: KnnModel

    def score(self, X: np.ndarray) -> np.ndarray:
        return self.model.score(self.scaler.transform(check_queries(X, self.scaler.mean.size)))


def scaled_knn_fit(X: np.ndarray, y: np.ndarray, k: int = 5) -> ScaledKnn:
    X, y = check_training_data(X, y)
    scaler = fit_scaler(X)
    return ScaledKnn(scaler=scaler, model=knn_fit(scaler.transform(X), y, k))
