"""
CLI command for carving payloads out of scanned files.

Usage:
    stegsift extract ./scan --wordlist rockyou.txt
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.table import Table

from stegsift.cli.common import fail, get_config
from stegsift.cli.scan import load_reports
from stegsift.exceptions import StegSiftError
from stegsift.recovery import (
    ExtractedArtifact,
    Wordlist,
    extract_all,
    write_extraction_log,
)
from stegsift.utils.progress import (
    ProgressTracker,
    is_quiet,
    print_debug,
    print_info,
    print_success,
    print_warning,
)


console = Console()

LOG_FILE = "extraction_log.csv"


def extract(
    ctx: typer.Context,
    scan_dir: Path = typer.Argument(
        ...,
        help="Output directory of a previous scan",
    ),
    out: Optional[Path] = typer.Option(
        None,
        "--out", "-o",
        help="Where extracted/ and the extraction log go (default: SCAN_DIR)",
    ),
    wordlist: Optional[Path] = typer.Option(
        None,
        "--wordlist", "-w",
        help="Password candidates; encrypted archives are only attacked when given",
    ),
    budget: Optional[int] = typer.Option(
        None,
        "--budget", "-b",
        help="Maximum password attempts per archive",
    ),
    force: bool = typer.Option(
        False,
        "--force",
        help="Carve every report with hits, not only positive ones",
    ),
) -> None:
    """
    Extract hidden files from the working copies of positive reports.

    Examples:
        stegsift extract scan/
        stegsift extract scan/ --wordlist wordlist.txt --budget 5000
    """
    config = get_config(ctx)
    out_dir = out or scan_dir
    try:
        reports = load_reports(scan_dir, config.folders)
        # configured wordlists only feed `crack`; extract attacks on request
        words = Wordlist.from_file(wordlist) if wordlist else None
    except StegSiftError as e:
        fail(e)

    selected = [r for r in reports if r.signature_hits and (force or r.is_positive)]
    print_debug(f"{len(selected)} of {len(reports)} report(s) selected for extraction")
    working_dir = scan_dir / config.folders.working_copy
    extracted_dir = out_dir / config.folders.extracted
    try:
        extracted_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        fail(f"Cannot create {extracted_dir}: {e}")

    artifacts: list[ExtractedArtifact] = []
    with ProgressTracker("Extracting", total_steps=len(selected), tally="artifacts") as tracker:
        for report in selected:
            tracker.update(f"Extracting {report.file}")
            carrier = working_dir / report.file
            try:
                found = extract_all(
                    report,
                    carrier,
                    out_dir,
                    wordlist=words,
                    budget=budget,
                    config=config.detection,
                    extracted_folder=config.folders.extracted,
                )
                artifacts.extend(found)
            except StegSiftError as e:
                print_warning(f"{report.file}: {e.message}")
                found = []
            tracker.advance(counted=len(found))

    try:
        write_extraction_log(artifacts, out_dir / LOG_FILE)
    except StegSiftError as e:
        fail(e)

    if not selected:
        print_info("No positive reports; nothing to extract")
    elif not is_quiet():
        _display_artifacts(artifacts)
    print_success(f"{len(artifacts)} artifact(s) written to {extracted_dir}")


def _display_artifacts(artifacts: list[ExtractedArtifact]) -> None:
    table = Table(title="Extracted Artifacts")
    table.add_column("Source", style="cyan")
    table.add_column("Plane")
    table.add_column("Type", style="green")
    table.add_column("Bytes", justify="right")
    table.add_column("Notes", style="dim")

    for artifact in artifacts:
        table.add_row(
            artifact.source_file,
            artifact.plane.value,
            artifact.type_id,
            str(artifact.length),
            "; ".join(artifact.notes) or "-",
        )
    console.print(table)
