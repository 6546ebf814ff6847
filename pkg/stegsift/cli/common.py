"""
Shared helpers for CLI commands: exit codes, config lookup, error exits.
"""

from __future__ import annotations

from pathlib import Path
from typing import NoReturn

import typer

from stegsift.core.config import StegSiftConfig
from stegsift.exceptions import ConfigurationError, StegSiftError
from stegsift.utils.progress import get_console, is_verbose, print_error


EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_ERROR = 2


def get_config(ctx: typer.Context | None) -> StegSiftConfig:
    """The config loaded by the app callback, or the default lookup."""
    if ctx is not None and isinstance(ctx.obj, StegSiftConfig):
        return ctx.obj
    return StegSiftConfig.load_default()


def fail(error: StegSiftError | str) -> NoReturn:
    """Print an error and exit with the operational-error status."""
    print_error(str(error))
    if is_verbose() and isinstance(error, StegSiftError) and error.details:
        get_console().print(f"[dim]{error.details}[/dim]")
    raise typer.Exit(EXIT_ERROR)


def resolve_db(db: Path | None, config: StegSiftConfig) -> Path:
    """The --db flag, falling back to the configured database path."""
    path = db or config.db_path
    if path is None:
        raise ConfigurationError(
            "No hash database given",
            suggestion="Pass --db or set STEGSIFT_DB / db_path in the config file.",
        )
    return path


def ensure_outside(out_dir: Path, input_dir: Path) -> None:
    """Refuse an output directory placed inside an input directory."""
    out = out_dir.resolve()
    src = input_dir.resolve()
    if out == src or src in out.parents:
        raise ConfigurationError(
            f"Output directory {out_dir} lies inside the input directory {input_dir}",
            suggestion="Choose an output directory outside the evidence folder.",
        )
