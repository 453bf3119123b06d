from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

GENUINE = 1
IMPOSTOR = 0


class Classifier(ABC):
    """Fitted two-class scorer; the positive class is the genuine user."""

    @abstractmethod
    def score(self, X: np.ndarray) -> np.ndarray:
        """Return the probability of Genuine for every row of X."""

    def predict(self, X: np.ndarray, threshold: float = 0.5) -> np.ndarray:
        return (self.score(X) >= threshold).astype(np.int64)

    def score_one(self, x: np.ndarray) -> float:
        return float(self.score(np.asarray(x, dtype=float).reshape(1, -1))[0])


def check_training_data(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2:
        raise ValueError("X must be two-dimensional")
    if y.shape != (X.shape[0],):
        raise ValueError("y must have one label per row of X")
    if X.shape[0] == 0:
        raise ValueError("training data must be non-empty")
    if not np.all(np.isfinite(X)):
        raise ValueError("training features must be finite")
    if not np.all((y == GENUINE) | (y == IMPOSTOR)):
        raise ValueError("labels must be GENUINE (1) or IMPOSTOR (0)")
    return X, y


def check_queries(X: np.ndarray, n_features: int) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] != n_features:
        raise ValueError(f"queries must have {n_features} columns")
    return X
