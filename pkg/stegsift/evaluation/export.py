"""
CSV, gnuplot and YAML output for evaluation summaries.

    detections_wav.csv / detections_mp3.csv   duration_s,detected,total,extracted_exact
    fn_distribution.csv                       format,bucket_start,fn_rate
    *.dat                                     whitespace-separated mirrors, NaN for no rate
    summary.yaml                              the full summary
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import yaml

from stegsift.detection.report import plain
from stegsift.evaluation.scoring import FORMATS, DurationRow, EvalSummary
from stegsift.exceptions import IOFailureError


DETECTION_COLUMNS = ["duration_s", "detected", "total", "extracted_exact"]
FN_COLUMNS = ["format", "bucket_start", "fn_rate"]
FN_FILE = "fn_distribution"
SUMMARY_FILE = "summary.yaml"


def detections_name(fmt: str) -> str:
    return f"detections_{fmt}"


def _number(value: float) -> str:
    return f"{value:g}"


def _rate(value: float | None) -> str:
    return "" if value is None else f"{value:.6f}"


def _detection_rows(summary: EvalSummary, fmt: str) -> list[list[str]]:
    return [
        [_number(r.duration_s), str(r.detected), str(r.total), str(r.extracted_exact)]
        for r in summary.durations(fmt)
    ]


def _fn_rows(summary: EvalSummary) -> list[list[str]]:
    rows = []
    for fmt in FORMATS:
        for bucket in summary.buckets(fmt):
            rows.append([fmt, _number(bucket.bucket_start), _rate(bucket.fn_rate)])
    return rows


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> Path:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as e:
        raise IOFailureError(str(path), e.strerror or str(e)) from e
    return path


def _write_dat(path: Path, header: list[str], rows: list[list[str]]) -> Path:
    lines = ["# " + " ".join(header)]
    for row in rows:
        lines.append(" ".join(cell if cell != "" else "NaN" for cell in row))
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as e:
        raise IOFailureError(str(path), e.strerror or str(e)) from e
    return path


def _ensure_dir(out_dir: Path | str) -> Path:
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise IOFailureError(str(out), e.strerror or str(e)) from e
    return out


def emit_csv(summary: EvalSummary, out_dir: Path | str) -> list[Path]:
    """Write the detection-count and FN-distribution CSVs."""
    out = _ensure_dir(out_dir)
    paths = [
        _write_csv(
            out / f"{detections_name(fmt)}.csv", DETECTION_COLUMNS, _detection_rows(summary, fmt)
        )
        for fmt in FORMATS
    ]
    paths.append(_write_csv(out / f"{FN_FILE}.csv", FN_COLUMNS, _fn_rows(summary)))
    return paths


def emit_plot_data(summary: EvalSummary, out_dir: Path | str) -> list[Path]:
    """Write gnuplot-ready `.dat` mirrors of the CSVs."""
    out = _ensure_dir(out_dir)
    paths = [
        _write_dat(
            out / f"{detections_name(fmt)}.dat", DETECTION_COLUMNS, _detection_rows(summary, fmt)
        )
        for fmt in FORMATS
    ]
    paths.append(_write_dat(out / f"{FN_FILE}.dat", FN_COLUMNS, _fn_rows(summary)))
    return paths


def write_summary(summary: EvalSummary, out_dir: Path | str) -> Path:
    path = _ensure_dir(out_dir) / SUMMARY_FILE
    text = yaml.safe_dump(plain(summary.to_dict()), default_flow_style=False, sort_keys=False)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise IOFailureError(str(path), e.strerror or str(e)) from e
    return path


def load_detections_csv(path: Path | str, fmt: str) -> list[DurationRow]:
    """Re-read a detections CSV written by emit_csv."""
    with open(path, newline="", encoding="utf-8") as fh:
        return [
            DurationRow(
                format=fmt,
                duration_s=float(row["duration_s"]),
                detected=int(row["detected"]),
                total=int(row["total"]),
                extracted_exact=int(row["extracted_exact"]),
            )
            for row in csv.DictReader(fh)
        ]


def load_fn_csv(path: Path | str) -> list[tuple[str, float, float | None]]:
    """Re-read fn_distribution.csv as (format, bucket_start, fn_rate) tuples."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            rate = float(row["fn_rate"]) if row["fn_rate"] else None
            if rate is not None and math.isnan(rate):
                rate = None
            rows.append((row["format"], float(row["bucket_start"]), rate))
    return rows
