"""
CLI commands for the evidence hash database.

Usage:
    stegsift hashdb build ./evidence/original --db hashes.db
    stegsift hashdb verify ./scan/original_copy --db hashes.db
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import typer

from stegsift.cli.common import EXIT_FINDINGS, fail, get_config, resolve_db
from stegsift.exceptions import StegSiftError
from stegsift.integrity import FindingStatus, HashDb, build_db, verify_against_db
from stegsift.utils.progress import print_info, print_success, print_warning


hashdb_app = typer.Typer(
    help="Build and verify the evidence hash database",
    no_args_is_help=True,
)


@hashdb_app.command("build")
def build(
    ctx: typer.Context,
    source_dir: Path = typer.Argument(
        ...,
        help="Directory of original evidence files",
    ),
    db: Optional[Path] = typer.Option(
        None,
        "--db",
        help="Hash database to create or replace",
    ),
) -> None:
    """Hash every file in SOURCE_DIR and commit the database."""
    try:
        db_path = resolve_db(db, get_config(ctx))
        result = build_db(source_dir, db_path)
    except StegSiftError as e:
        fail(e)
    print_success(f"Recorded {len(result)} file(s) in {db_path}")


@hashdb_app.command("verify")
def verify(
    ctx: typer.Context,
    working_dir: Path = typer.Argument(
        ...,
        help="Directory of working copies to check",
    ),
    db: Optional[Path] = typer.Option(
        None,
        "--db",
        help="Hash database built from the originals",
    ),
    known_benign: Optional[Path] = typer.Option(
        None,
        "--known-benign",
        help="Optional database of known-benign files",
    ),
    md5: bool = typer.Option(
        False,
        "--md5",
        help="Compare MD5 instead of SHA-256",
    ),
) -> None:
    """
    Compare working copies against the database.

    Prints one `<status>\\t<name>` line per file and exits 1 if any file
    differs from its record.
    """
    try:
        database = HashDb.open(resolve_db(db, get_config(ctx)))
        benign = HashDb.open(known_benign) if known_benign else None
        findings = verify_against_db(
            database, working_dir, known_benign=benign, algorithm="md5" if md5 else "sha256"
        )
    except StegSiftError as e:
        fail(e)

    for finding in findings:
        suffix = "\tknown_benign" if finding.known_benign else ""
        typer.echo(f"{finding.status.value}\t{finding.name}{suffix}")

    mismatched = [f for f in findings if f.status is FindingStatus.MISMATCH]
    if mismatched:
        print_warning(f"{len(mismatched)} of {len(findings)} file(s) do not match the database")
        raise typer.Exit(EXIT_FINDINGS)
    print_info(f"[green]All {len(findings)} file(s) checked, no mismatches[/green]")
