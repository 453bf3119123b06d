"""Metrics, ROC analysis and the experiment drivers."""

from engine.evaluation import EvalReport, EvaluationEngine, UserResult, run_scenario_a, run_scenario_b, run_verification
from engine.metrics import ConfusionMatrix, Rates, confusion, eer_eq8, far_frr, metrics
from engine.roc import ROCCurve, auc, eer_roc, roc_curve
from engine.scenario import (
    AuthenticationTaskGenerator,
    ProtocolConfig,
    TaskGenerator,
    UserTask,
    VerificationTaskGenerator,
    ordered_users,
)

__all__ = [
    "EvalReport",
    "EvaluationEngine",
    "UserResult",
    "run_scenario_a",
    "run_scenario_b",
    "run_verification",
    "ConfusionMatrix",
    "Rates",
    "confusion",
    "eer_eq8",
    "far_frr",
    "metrics",
    "ROCCurve",
    "auc",
    "eer_roc",
    "roc_curve",
    "AuthenticationTaskGenerator",
    "ProtocolConfig",
    "TaskGenerator",
    "UserTask",
    "VerificationTaskGenerator",
    "ordered_users",
]
