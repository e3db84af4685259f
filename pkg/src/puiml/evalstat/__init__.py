"""Evaluation protocol: folds, F1, cross-validation, grid search and t-tests."""

from .crossval import (
    DT_GRID,
    KNN_GRID,
    MODEL_IDS,
    ClassifierSpec,
    CVResult,
    FoldAudit,
    cross_validate,
    derive_seed,
    evaluate,
    grid_search,
    table5_specs,
)
from .metrics import AVERAGING, FoldAssignment, f1_score, make_folds
from .stats import DegenerateTestError, GroupStats, TTestResult, group_stats, t_test, t_two_sided_p

__all__ = [
    "AVERAGING",
    "DT_GRID",
    "KNN_GRID",
    "MODEL_IDS",
    "CVResult",
    "ClassifierSpec",
    "DegenerateTestError",
    "FoldAssignment",
    "FoldAudit",
    "GroupStats",
    "TTestResult",
    "cross_validate",
    "derive_seed",
    "evaluate",
    "f1_score",
    "grid_search",
    "group_stats",
    "make_folds",
    "t_test",
    "t_two_sided_p",
    "table5_specs",
]
