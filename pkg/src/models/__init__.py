"""Data preparation and the three classifiers (KNN, decision tree, random forest)."""

from models.base import GENUINE, IMPOSTOR, Classifier
from models.data import LabeledSample, LabeledSet, StratificationError, sample_impostors, train_test_split
from models.factory import MODEL_NAMES, ModelSpec, build_classifier
from models.forest import ForestConfig, ForestModel, forest_fit
from models.knn import KnnModel, ScaledKnn, knn_fit, scaled_knn_fit
from models.scaler import Scaler, apply_scaler, fit_scaler
from models.tree import TreeConfig, TreeModel, gini, tree_fit

__all__ = [
    "GENUINE",
    "IMPOSTOR",
    "Classifier",
    "LabeledSample",
    "LabeledSet",
    "StratificationError",
    "sample_impostors",
    "train_test_split",
    "MODEL_NAMES",
    "ModelSpec",
    "build_classifier",
    "ForestConfig",
    "ForestModel",
    "forest_fit",
    "KnnModel",
    "ScaledKnn",
    "knn_fit",
    "scaled_knn_fit",
    "Scaler",
    "apply_scaler",
    "fit_scaler",
    "TreeConfig",
    "TreeModel",
    "gini",
    "tree_fit",
]
