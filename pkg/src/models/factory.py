from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from models.base import Classifier
from models.forest import ForestConfig, forest_fit
from models.knn import scaled_knn_fit
from models.tree import TreeConfig, tree_fit

MODEL_NAMES = ("dt", "knn", "rf")
MODEL_LABELS = {"dt": "Decision Tree", "knn": "K-Nearest Neighbors", "rf": "Random Forest"}


@dataclass(frozen=True)
class ModelSpec:
    """Classifier choice plus its hyperparameters."""

    name: str
    k: int = 5
    max_depth: int | None = None
    min_leaf: int = 1
    n_trees: int = 100
    max_features: int | str | None = "sqrt"
    bootstrap: bool = True
    workers: int = 1

    def __post_init__(self) -> None:
        if self.name not in MODEL_NAMES:
            raise ValueError(f"model must be one of: {', '.join(MODEL_NAMES)}")
        if self.k < 1:
            raise ValueError("k must be >= 1")

    @property
    def label(self) -> str:
        return MODEL_LABELS[self.name]

    def fit(self, X: np.ndarray, y: np.ndarray, seed: int = 42) -> Classifier:
        if self.name == "knn":
            # KNN needs k training rows; tiny single-user splits fall back to all of them
            return scaled_knn_fit(X, y, k=min(self.k, len(y)))
        if self.name == "dt":
            return tree_fit(X, y, TreeConfig(max_depth=self.max_depth, min_leaf=self.min_leaf))
        return forest_fit(
            X,
            y,
            ForestConfig(
                n_trees=self.n_trees,
                max_features=self.max_features,
                bootstrap=self.bootstrap,
                max_depth=self.max_depth,
                min_leaf=self.min_leaf,
                workers=self.workers,
            ),
            seed=seed,
        )


def build_classifier(spec: ModelSpec, X: np.ndarray, y: np.ndarray, seed: int = 42) -> Classifier:
    return spec.fit(X, y, seed)
