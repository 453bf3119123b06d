from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from models.base import Classifier, check_queries, check_training_data
from utils.rng import Xoshiro256StarStar

LEAF = -1


@dataclass(frozen=True)
class TreeConfig:
    max_depth: int | None = None
    min_leaf: int = 1
    max_features: int | None = None

    def __post_init__(self) -> None:
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be >= 0 or None")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")
        if self.max_features is not None and self.max_features < 1:
            raise ValueError("max_features must be >= 1 or None")


def gini(n_impostor: float, n_genuine: float) -> float:
    total = n_impostor + n_genuine
    if total <= 0:
        return 0.0
    return 1.0 - (n_impostor / total) ** 2 - (n_genuine / total) ** 2


@dataclass(frozen=True)
class TreeModel(Classifier):
    """Binary CART tree stored as parallel node arrays.

    Internal nodes route `x[feature] <= threshold` to `left`; leaves have
    feature == LEAF. `counts[i]` holds (impostor, genuine) samples at node i.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray
    n_features: int

    def leaf_index(self, X: np.ndarray) -> np.ndarray:
        X = check_queries(X, self.n_features)
        node = np.zeros(X.shape[0], dtype=np.int64)
        while True:
            feat = self.feature[node]
            rows = np.flatnonzero(feat != LEAF)
            if rows.size == 0:
                return node
            cur = node[rows]
            go_left = X[rows, feat[rows]] <= self.threshold[cur]
            node[rows] = np.where(go_left, self.left[cur], self.right[cur])

    def score(self, X: np.ndarray) -> np.ndarray:
        leaves = self.leaf_index(X)
        c = self.counts[leaves]
        return c[:, 1] / c.sum(axis=1)

    @property
    def n_nodes(self) -> int:
        return int(self.feature.size)

    def n_leaves(self) -> int:
        return int(np.count_nonzero(self.feature == LEAF))

    def depth(self) -> int:
        depths = np.zeros(self.n_nodes, dtype=np.int64)
        for i in range(self.n_nodes):
            if self.feature[i] != LEAF:
                depths[self.left[i]] = depths[i] + 1
                depths[self.right[i]] = depths[i] + 1
        return int(depths.max())


def _split_on_feature(
    col: np.ndarray, y: np.ndarray, n_pos: int, min_leaf: int
) -> tuple[float, float] | None:
    """Best (weighted gini, threshold) for one feature, lowest threshold on ties."""
    n = col.size
    order = np.argsort(col, kind="stable")
    vals = col[order]
    pos_left = np.cumsum(y[order])[:-1].astype(float)
    n_left = np.arange(1, n, dtype=float)
    valid = (vals[1:] > vals[:-1]) & (n_left >= min_leaf) & (n - n_left >= min_leaf)
    if not np.any(valid):
        return None
    nl = n_left[valid]
    pl = pos_left[valid]
    nr = n - nl
    pr = n_pos - pl
    # n * weighted gini == n - sum_k(c_k^2)/n_side over both sides
    impurity = n - (pl**2 + (nl - pl) ** 2) / nl - (pr**2 + (nr - pr) ** 2) / nr
    j = int(np.argmin(impurity))
    cut = int(np.flatnonzero(valid)[j])
    lo, hi = vals[cut], vals[cut + 1]
    mid = lo + (hi - lo) / 2.0
    threshold = float(mid if lo <= mid < hi else lo)
    return float(impurity[j]) / n, threshold


class _TreeBuilder:
    def __init__(self, X: np.ndarray, y: np.ndarray, cfg: TreeConfig, rng: Xoshiro256StarStar | None):
        self.X = X
        self.y = y
        self.cfg = cfg
        self.rng = rng
        self.n_features = X.shape[1]
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.counts: list[tuple[int, int]] = []

    def _new_node(self, idx: np.ndarray) -> int:
        n_pos = int(np.count_nonzero(self.y[idx]))
        self.feature.append(LEAF)
        self.threshold.append(0.0)
        self.left.append(LEAF)
        self.right.append(LEAF)
        self.counts.append((idx.size - n_pos, n_pos))
        return len(self.feature) - 1

    def _candidate_features(self) -> tuple[list[int], list[int]]:
        m = self.cfg.max_features
        if m is None or m >= self.n_features:
            return list(range(self.n_features)), []
        assert self.rng is not None, "feature subsampling needs a generator"
        perm = self.rng.permutation(self.n_features).tolist()
        return sorted(perm[:m]), perm[m:]

    def _best_split(self, idx: np.ndarray) -> tuple[int, float] | None:
        y = self.y[idx]
        n_pos = int(np.count_nonzero(y))
        primary, reserve = self._candidate_features()
        best: tuple[float, int, float] | None = None
        for f in primary:
            found = _split_on_feature(self.X[idx, f], y, n_pos, self.cfg.min_leaf)
            if found is not None and (best is None or found[0] < best[0]):
                best = (found[0], f, found[1])
        # sampled features may all be constant here; fall back to the rest in draw order
        for f in reserve:
            if best is not None:
                break
            found = _split_on_feature(self.X[idx, f], y, n_pos, self.cfg.min_leaf)
            if found is not None:
                best = (found[0], f, found[1])
        return None if best is None else (best[1], best[2])

    def build(self) -> TreeModel:
        stack = [(self._new_node(np.arange(self.y.size)), np.arange(self.y.size), 0)]
        while stack:
            node, idx, depth = stack.pop()
            n_imp, n_pos = self.counts[node]
            if n_imp == 0 or n_pos == 0:
                continue
            if self.cfg.max_depth is not None and depth >= self.cfg.max_depth:
                continue
            if idx.size < 2 * self.cfg.min_leaf:
                continue
            split = self._best_split(idx)
            if split is None:
                continue
            f, thr = split
            go_left = self.X[idx, f] <= thr
            left_idx, right_idx = idx[go_left], idx[~go_left]
            self.feature[node] = f
            self.threshold[node] = thr
            self.left[node] = self._new_node(left_idx)
            self.right[node] = self._new_node(right_idx)
            stack.append((self.right[node], right_idx, depth + 1))
            stack.append((self.left[node], left_idx, depth + 1))
        return TreeModel(
            feature=np.array(self.feature, dtype=np.int64),
            threshold=np.array(self.threshold, dtype=float),
            left=np.array(self.left, dtype=np.int64),
            right=np.array(self.right, dtype=np.int64),
            counts=np.array(self.counts, dtype=np.int64).reshape(-1, 2),
            n_features=self.n_features,
        )


def tree_fit(
    X: np.ndarray,
    y: np.ndarray,
    cfg: TreeConfig | None = None,
    rng: Xoshiro256StarStar | None = None,
) -> TreeModel:
    """Greedy CART with Gini impurity.

    Each node takes the (feature, threshold) with the lowest weighted Gini,
    thresholds being midpoints between consecutive distinct values; ties go
    to the lowest feature index, then the lowest threshold. A node stays a
    leaf when pure, at max_depth, or when no split leaves min_leaf samples
    on both sides.
    """
    X, y = check_training_data(X, y)
    return _TreeBuilder(X, y, cfg or TreeConfig(), rng).build()
