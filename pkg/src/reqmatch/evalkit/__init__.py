"""Evaluation: one-shot recall@k, split construction, report rendering."""

from .splits import (
    SPLIT_NAMES,
    DatasetSplit,
    check_split_invariants,
    load_splits,
    make_splits,
    save_splits,
)
from .recall import one_shot_recall
from .report import ALL_LANGUAGES, EvalReport, evaluate_checkpoint, render_report_table

__all__ = [
    "ALL_LANGUAGES",
    "DatasetSplit",
    "EvalReport",
    "SPLIT_NAMES",
    "check_split_invariants",
    "evaluate_checkpoint",
    "load_splits",
    "make_splits",
    "one_shot_recall",
    "render_report_table",
    "save_splits",
]
