"""
CLI command for scanning evidence files.

Inputs are copied to `<out>/original_copy/` and only the copies are
analysed. Per-file reports go to `<out>/reports/<name>.report.yaml` and a
one-row-per-file index to `<out>/scan_index.csv`.

Usage:
    stegsift scan ./evidence/original --db hashes.db --out ./scan
"""

from __future__ import annotations

import csv
import logging
import shutil
import sys
import time
from contextlib import nullcontext
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.table import Table

from stegsift.cli.common import ensure_outside, fail, get_config
from stegsift.core.config import DetectionConfig, FolderConfig
from stegsift.detection import DetectionReport, FileTimes, SignatureTable, run_pipeline
from stegsift.detection.report import SCAN_INDEX_COLUMNS
from stegsift.exceptions import IOFailureError, StegSiftError
from stegsift.integrity import HashDb, list_source_files
from stegsift.utils.progress import (
    ProgressTracker,
    is_quiet,
    is_verbose,
    print_success,
    print_warning,
)


logger = logging.getLogger(__name__)
console = Console()

INDEX_FILE = "scan_index.csv"
REPORT_SUFFIX = ".report.yaml"


@dataclass
class ScanOutcome:
    name: str
    report: DetectionReport | None = None
    error: str | None = None


def report_path(reports_dir: Path, name: str) -> Path:
    return reports_dir / f"{name}{REPORT_SUFFIX}"


def load_reports(scan_dir: Path, folders: FolderConfig | None = None) -> list[DetectionReport]:
    """Read every report written by a scan, ordered by file name."""
    folders = folders or FolderConfig()
    reports_dir = scan_dir / folders.reports
    if not reports_dir.is_dir():
        raise IOFailureError(str(reports_dir), "no scan reports found")
    paths = sorted(reports_dir.glob(f"*{REPORT_SUFFIX}"))
    return [DetectionReport.load(p) for p in paths]


def write_scan_index(reports: list[DetectionReport], path: Path) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=SCAN_INDEX_COLUMNS, lineterminator="\n")
            writer.writeheader()
            for report in reports:
                writer.writerow(report.index_row())
    except OSError as e:
        raise IOFailureError(str(path), e.strerror or str(e)) from e


def copy_to_working(files: list[Path], working_dir: Path) -> list[Path]:
    """Copy evidence into the working folder, preserving timestamps."""
    try:
        working_dir.mkdir(parents=True, exist_ok=True)
        return [Path(shutil.copy2(src, working_dir / src.name)) for src in files]
    except OSError as e:
        raise IOFailureError(str(working_dir), e.strerror or str(e)) from e


def _scan_one(
    original: Path,
    copy: Path,
    *,
    db: HashDb | None,
    reference_dir: Path | None,
    config: DetectionConfig,
    signatures: SignatureTable,
    now: float,
) -> ScanOutcome:
    reference = None
    if reference_dir is not None and (reference_dir / original.name).is_file():
        reference = reference_dir / original.name
    try:
        times = FileTimes.from_path(original)
    except OSError:
        times = None
    try:
        report = run_pipeline(
            copy,
            db,
            reference,
            config=config,
            signatures=signatures,
            times=times,
            now=now,
        )
    except StegSiftError as e:
        logger.warning("Skipping %s: %s", original.name, e.message)
        return ScanOutcome(original.name, error=e.message)
    return ScanOutcome(original.name, report=report)


def scan(
    ctx: typer.Context,
    input_dir: Path = typer.Argument(
        ...,
        help="Directory of evidence files (WAV and MP3)",
    ),
    out: Path = typer.Option(
        Path("./scan"),
        "--out", "-o",
        help="Output directory for working copies and reports",
    ),
    db: Optional[Path] = typer.Option(
        None,
        "--db",
        help="Hash database of the originals (enables the HASH stage)",
    ),
    reference_dir: Optional[Path] = typer.Option(
        None,
        "--reference-dir", "-r",
        help="Directory of clean reference WAVs with matching names",
    ),
    threshold: Optional[list[str]] = typer.Option(
        None,
        "--threshold", "-t",
        help="Stage threshold override, e.g. saf=0.6 or saf.suspicious=0.1 (repeatable)",
    ),
    output_format: str = typer.Option(
        "text",
        "--format", "-f",
        help="Summary output: text or csv",
    ),
    jobs: Optional[int] = typer.Option(
        None,
        "--jobs", "-j",
        help="Worker threads (default from config)",
    ),
) -> None:
    """
    Run the detection pipeline over every file in INPUT_DIR.

    Examples:
        stegsift scan corpus/original --out scan/
        stegsift scan evidence/ --db hashes.db --threshold saf=0.6 --format csv
    """
    config = get_config(ctx)
    if output_format not in ("text", "csv"):
        fail(f"Unknown format: {output_format} (expected text or csv)")

    try:
        ensure_outside(out, input_dir)
        detection = config.detection
        for override in threshold or []:
            detection.apply_override(override)
        signatures = SignatureTable.with_file(detection.signature_file)
        database = HashDb.open(db or config.db_path) if (db or config.db_path) else None
        originals = list_source_files(input_dir)
        working = copy_to_working(originals, out / config.folders.working_copy)
        reports_dir = out / config.folders.reports
        reports_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        fail(IOFailureError(str(out), e.strerror or str(e)))
    except StegSiftError as e:
        fail(e)

    now = time.time()
    workers = max(1, jobs or config.jobs)
    outcomes: list[ScanOutcome] = []
    tracker = ProgressTracker("Scanning", total_steps=len(originals), tally="flagged")
    # CSV goes to stdout, so no live progress display in that mode
    with tracker if output_format == "text" else nullcontext(tracker):
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(
                    _scan_one,
                    original,
                    copy,
                    db=database,
                    reference_dir=reference_dir,
                    config=detection,
                    signatures=signatures,
                    now=now,
                )
                for original, copy in zip(originals, working)
            ]
            for future in futures:
                outcome = future.result()
                tracker.update(f"Scanned {outcome.name}")
                if is_verbose() and outcome.report is not None and output_format == "text":
                    tracker.log(f"{outcome.name}: {outcome.report.final_verdict.value}")
                tracker.advance(counted=outcome.report is not None and outcome.report.is_positive)
                outcomes.append(outcome)

    reports = [o.report for o in sorted(outcomes, key=lambda o: o.name) if o.report is not None]
    try:
        for report in reports:
            report.save(report_path(reports_dir, report.file))
        write_scan_index(reports, out / INDEX_FILE)
    except OSError as e:
        fail(IOFailureError(str(reports_dir), e.strerror or str(e)))
    except StegSiftError as e:
        fail(e)

    failed = [o for o in outcomes if o.error is not None]
    if output_format == "csv":
        writer = csv.DictWriter(sys.stdout, fieldnames=SCAN_INDEX_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for report in reports:
            writer.writerow(report.index_row())
    elif not is_quiet():
        _display_reports(reports)

    for outcome in failed:
        print_warning(f"{outcome.name}: {outcome.error}")
    if originals and len(failed) == len(originals):
        fail("No file could be scanned")
    if not originals:
        print_warning(f"No files found in {input_dir}")

    positives = sum(r.is_positive for r in reports)
    if output_format == "text":
        print_success(
            f"Scanned {len(reports)} file(s), {positives} flagged; reports in {reports_dir}"
        )


def _display_reports(reports: list[DetectionReport]) -> None:
    table = Table(title="Scan Results")
    table.add_column("File", style="cyan")
    table.add_column("Verdict")
    table.add_column("Confidence", justify="right")
    table.add_column("SAF")
    table.add_column("FSA")
    table.add_column("Hits")

    for report in reports:
        verdict = (
            "[red]stego_detected[/red]" if report.is_positive else "[green]clean[/green]"
        )
        row = report.index_row()
        table.add_row(
            report.file,
            verdict,
            f"{report.confidence:.3f}",
            row["SAF"],
            row["FSA"],
            row["hit_types"] or "-",
        )
    console.print(table)
