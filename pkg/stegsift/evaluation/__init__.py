"""
Scoring of detection runs against corpus ground truth, with CSV and
plot-data export.
"""

from stegsift.evaluation.export import (
    DETECTION_COLUMNS,
    FN_COLUMNS,
    SUMMARY_FILE,
    emit_csv,
    emit_plot_data,
    load_detections_csv,
    load_fn_csv,
    write_summary,
)
from stegsift.evaluation.scoring import (
    BucketRow,
    DurationRow,
    EvalSummary,
    FormatCounts,
    TrendCheck,
    evaluate,
)

__all__ = [
    "DETECTION_COLUMNS",
    "FN_COLUMNS",
    "SUMMARY_FILE",
    "emit_csv",
    "emit_plot_data",
    "load_detections_csv",
    "load_fn_csv",
    "write_summary",
    "BucketRow",
    "DurationRow",
    "EvalSummary",
    "FormatCounts",
    "TrendCheck",
    "evaluate",
]
