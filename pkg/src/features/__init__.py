from features.extraction import (
    FEATURE_NAMES,
    N_FEATURES,
    FeatureConfig,
    FeatureTable,
    FeatureVector,
    a_beg_time,
    extract_all,
    extract_features,
    largest_deviation,
    num_critical_points,
)
from features.kinematics import KinematicSeries, kinematics

__all__ = [
    "FEATURE_NAMES",
    "N_FEATURES",
    "FeatureConfig",
    "FeatureTable",
    "FeatureVector",
    "a_beg_time",
    "extract_all",
    "extract_features",
    "largest_deviation",
    "num_critical_points",
    "KinematicSeries",
    "kinematics",
]
