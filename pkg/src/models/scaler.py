from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EPS = 1e-12


@dataclass(frozen=True)
class Scaler:
    """Per-feature standardization fitted on training data only."""

    mean: np.ndarray
    sd: np.ndarray
    constant: np.ndarray

    def __post_init__(self) -> None:
        if self.mean.shape != self.sd.shape or self.mean.shape != self.constant.shape:
            raise ValueError("mean, sd and constant must share one shape")
        if np.any(self.sd < EPS):
            raise ValueError("sd entries must be >= eps")

    @classmethod
    def identity(cls, n_features: int) -> "Scaler":
        return cls(mean=np.zeros(n_features), sd=np.ones(n_features), constant=np.zeros(n_features, dtype=bool))

    def transform(self, X: np.ndarray) -> np.ndarray:
        out = (np.asarray(X, dtype=float) - self.mean) / self.sd
        out[..., self.constant] = 0.0
        return out

    def inverse_transform(self, Z: np.ndarray) -> np.ndarray:
        out = np.asarray(Z, dtype=float) * self.sd + self.mean
        out[..., self.constant] = self.mean[self.constant]
        return out


def fit_scaler(X: np.ndarray) -> Scaler:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("fit_scaler needs a non-empty two-dimensional matrix")
    mean = X.mean(axis=0)
    sd = X.std(axis=0)
    constant = sd < EPS
    return Scaler(mean=mean, sd=np.maximum(sd, EPS), constant=constant)


def apply_scaler(scaler: Scaler, X: np.ndarray) -> np.ndarray:
    return scaler.transform(X)
