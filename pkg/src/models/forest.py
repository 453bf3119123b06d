from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math

import numpy as np

from models.base import Classifier, check_queries, check_training_data
from models.tree import TreeConfig, TreeModel, tree_fit
from utils.rng import Xoshiro256StarStar, derive_seed


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 100
    max_features: int | str | None = "sqrt"
    bootstrap: bool = True
    max_depth: int | None = None
    min_leaf: int = 1
    workers: int = 1

    def __post_init__(self) -> None:
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if isinstance(self.max_features, str) and self.max_features != "sqrt":
            raise ValueError("max_features must be an int, 'sqrt' or None")
        if isinstance(self.max_features, int) and self.max_features < 1:
            raise ValueError("max_features must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def features_per_split(self, n_features: int) -> int:
        if self.max_features is None:
            return n_features
        if self.max_features == "sqrt":
            return max(1, math.isqrt(n_features))
        return min(int(self.max_features), n_features)


@dataclass(frozen=True)
class ForestModel(Classifier):
    trees: tuple[TreeModel, ...]
    seed: int

    def __post_init__(self) -> None:
        if not self.trees:
            raise ValueError("a forest needs at least one tree")

    def tree_scores(self, X: np.ndarray) -> np.ndarray:
        """(n_trees, n_rows) matrix of per-tree genuine fractions."""
        X = check_queries(X, self.trees[0].n_features)
        return np.vstack([tree.score(X) for tree in self.trees])

    def score(self, X: np.ndarray) -> np.ndarray:
        return self.tree_scores(X).mean(axis=0)


def forest_fit(X: np.ndarray, y: np.ndarray, cfg: ForestConfig | None = None, seed: int = 42) -> ForestModel:
    """Bagged CART trees with per-split feature subsampling.

    Tree i draws its bootstrap and feature subsets from a generator seeded by
    derive_seed(seed, i), so fitting on a pool gives the same forest.
    """
    cfg = cfg or ForestConfig()
    X, y = check_training_data(X, y)
    tree_cfg = TreeConfig(
        max_depth=cfg.max_depth,
        min_leaf=cfg.min_leaf,
        max_features=cfg.features_per_split(X.shape[1]),
    )

    def fit_one(index: int) -> TreeModel:
        rng = Xoshiro256StarStar(derive_seed(seed, index))
        if cfg.bootstrap:
            rows = rng.integers(y.size, y.size)
            return tree_fit(X[rows], y[rows], tree_cfg, rng)
        return tree_fit(X, y, tree_cfg, rng)

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            trees = tuple(pool.map(fit_one, range(cfg.n_trees)))
    else:
        trees = tuple(fit_one(i) for i in range(cfg.n_trees))
    return ForestModel(trees=trees, seed=seed)
