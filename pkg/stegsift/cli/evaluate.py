"""
CLI command for scoring a scan against corpus ground truth.

Usage:
    stegsift eval corpus/manifest.csv scan/ --out results/
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.table import Table

from stegsift.cli.common import fail, get_config
from stegsift.cli.extract import LOG_FILE
from stegsift.cli.scan import load_reports
from stegsift.core.manifest import CorpusManifest
from stegsift.evaluation import (
    EvalSummary,
    emit_csv,
    emit_plot_data,
    evaluate,
    write_summary,
)
from stegsift.evaluation.scoring import DEFAULT_BUCKET_WIDTH, FORMATS
from stegsift.exceptions import StegSiftError
from stegsift.recovery import read_extraction_log
from stegsift.utils.progress import is_quiet, print_info, print_success, print_warning


console = Console()


def evaluate_command(
    ctx: typer.Context,
    manifest_path: Path = typer.Argument(
        ...,
        help="Corpus manifest.csv",
    ),
    scan_dir: Path = typer.Argument(
        ...,
        help="Output directory of the scan over the corpus",
    ),
    out: Path = typer.Option(
        Path("./results"),
        "--out", "-o",
        help="Results root; files go to <out>/eval-<config hash>/",
    ),
    extraction_log: Optional[Path] = typer.Option(
        None,
        "--extraction-log",
        help="Extraction log (default: SCAN_DIR/extraction_log.csv)",
    ),
    bucket_width: float = typer.Option(
        DEFAULT_BUCKET_WIDTH,
        "--bucket-width",
        help="Width of the false-negative duration buckets in seconds",
    ),
    plot_data: bool = typer.Option(
        True,
        "--plot-data/--no-plot-data",
        help="Also write gnuplot .dat files",
    ),
) -> None:
    """
    Score scan reports against a corpus manifest and write result CSVs.

    Examples:
        stegsift eval corpus/manifest.csv scan/
        stegsift eval trend/manifest.csv trend-scan/ --bucket-width 100
    """
    config = get_config(ctx)
    try:
        manifest = CorpusManifest.load(manifest_path)
        reports = load_reports(scan_dir, config.folders)
        artifacts = read_extraction_log(extraction_log or scan_dir / LOG_FILE)
        thresholds = reports[0].thresholds if reports else config.detection.thresholds_dict()
        summary = evaluate(
            manifest,
            reports,
            artifacts,
            bucket_width=bucket_width,
            thresholds=thresholds,
        )
        run_dir = out / summary.run_name
        emit_csv(summary, run_dir)
        if plot_data:
            emit_plot_data(summary, run_dir)
        write_summary(summary, run_dir)
    except ValueError as e:
        fail(str(e))
    except StegSiftError as e:
        fail(e)

    if not is_quiet():
        _display_summary(summary)
    print_success(f"Results written to {run_dir}")


def _rate(value: float | None) -> str:
    return "-" if value is None else f"{value:.1%}"


def _display_summary(summary: EvalSummary) -> None:
    table = Table(title=f"Evaluation {summary.run_name}")
    table.add_column("Format", style="cyan")
    table.add_column("TP", justify="right")
    table.add_column("FN", justify="right")
    table.add_column("FP", justify="right")
    table.add_column("TN", justify="right")
    table.add_column("Detection", justify="right", style="green")
    table.add_column("FP rate", justify="right", style="red")
    table.add_column("Exact", justify="right")

    for fmt in FORMATS:
        counts = summary.per_format[fmt]
        table.add_row(
            fmt,
            str(counts.true_positives),
            str(counts.false_negatives),
            str(counts.false_positives),
            str(counts.true_negatives),
            _rate(counts.detection_rate),
            _rate(counts.false_positive_rate),
            f"{counts.extracted_exact_count}/{counts.true_positives}",
        )
    console.print(table)

    trend = summary.trend("mp3")
    if trend.holds:
        print_info(f"Duration trend: {trend.note}")
    else:
        print_warning(f"Duration trend does not hold: {trend.note}")
