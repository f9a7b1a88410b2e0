"""
Evaluation package.

Greedy detection matching, FROC curves and scores, fold assignment and
report writers.
"""

from evaluation.folds import fold_assignment, split_folds, write_folds
from evaluation.froc import (
    FrocCurve,
    MatchResult,
    evaluate_predictions,
    froc_curve,
    match_detections,
)
from evaluation.report import froc_report, write_curve_tsv, write_report

__all__ = [
    "MatchResult",
    "FrocCurve",
    "match_detections",
    "froc_curve",
    "evaluate_predictions",
    "split_folds",
    "fold_assignment",
    "write_folds",
    "froc_report",
    "write_report",
    "write_curve_tsv",
]
