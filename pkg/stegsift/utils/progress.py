"""
Console output, verbosity and log routing for StegSift.

Every CLI command prints through one shared rich Console. Library
modules only log; `set_verbosity` decides how much of that log reaches
the console.
"""

from __future__ import annotations

import logging
from enum import IntEnum
from typing import Any

from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    SpinnerColumn,
    TextColumn,
    TimeElapsedColumn,
)


LOGGER_NAME = "stegsift"


class VerbosityLevel(IntEnum):
    """Verbosity levels for CLI output."""

    QUIET = 0      # errors and warnings only
    NORMAL = 1
    VERBOSE = 2    # debug lines and library DEBUG logs

    @classmethod
    def from_flags(cls, *, verbose: bool, quiet: bool) -> VerbosityLevel:
        """--quiet wins over --verbose."""
        if quiet:
            return cls.QUIET
        return cls.VERBOSE if verbose else cls.NORMAL

    @property
    def log_level(self) -> int:
        return {
            VerbosityLevel.QUIET: logging.WARNING,
            VerbosityLevel.NORMAL: logging.INFO,
            VerbosityLevel.VERBOSE: logging.DEBUG,
        }[self]


_verbosity: VerbosityLevel = VerbosityLevel.NORMAL
_console: Console | None = None
_handler: RichHandler | None = None


def get_console() -> Console:
    global _console
    if _console is None:
        _console = Console()
    return _console


def set_verbosity(level: VerbosityLevel) -> None:
    """Set the verbosity and route the `stegsift` logger through rich."""
    global _verbosity, _handler
    _verbosity = level

    logger = logging.getLogger(LOGGER_NAME)
    if _handler is None:
        _handler = RichHandler(console=get_console(), show_path=False, markup=False)
        logger.addHandler(_handler)
        logger.propagate = False
    logger.setLevel(level.log_level)
    _handler.setLevel(level.log_level)


def is_quiet() -> bool:
    return _verbosity == VerbosityLevel.QUIET


def is_verbose() -> bool:
    return _verbosity == VerbosityLevel.VERBOSE


def print_info(message: str, **kwargs: Any) -> None:
    """Print an info line (hidden in quiet mode)."""
    if _verbosity >= VerbosityLevel.NORMAL:
        get_console().print(message, **kwargs)


def print_success(message: str, **kwargs: Any) -> None:
    """Print a success line (hidden in quiet mode)."""
    if _verbosity >= VerbosityLevel.NORMAL:
        get_console().print(f"[green]✓[/green] {message}", **kwargs)


def print_warning(message: str, **kwargs: Any) -> None:
    """Print a warning (always shown). Evidence names are printed literally."""
    get_console().print(f"[yellow]⚠[/yellow] {escape(message)}", **kwargs)


def print_error(message: str, **kwargs: Any) -> None:
    """Print an error (always shown). Evidence names are printed literally."""
    get_console().print(f"[red]✗[/red] {escape(message)}", **kwargs)


def print_debug(message: str, **kwargs: Any) -> None:
    if _verbosity >= VerbosityLevel.VERBOSE:
        get_console().print(f"[dim]{escape(message)}[/dim]", **kwargs)


class ProgressTracker:
    """
    Per-file progress bar with an optional running tally.

    Example usage:
        tracker = ProgressTracker("Scanning", total_steps=len(files), tally="flagged")

        with tracker:
            for path in files:
                tracker.update(f"Scanning {path.name}")
                report = ...
                tracker.advance(counted=report.is_positive)

    Outside a `with` block, or in quiet mode, every method only keeps count.
    """

    def __init__(
        self,
        description: str,
        total_steps: int,
        *,
        tally: str | None = None,
    ) -> None:
        """
        Args:
            description: Label shown before the bar
            total_steps: Number of files to process
            tally: Label for a running count shown after the bar (e.g. "flagged")
        """
        self.description = description
        self.total_steps = total_steps
        self.tally = tally
        self.current_step = 0
        self.counted = 0
        self._progress: Progress | None = None
        self._task_id: Any = None

    def __enter__(self) -> ProgressTracker:
        if is_quiet():
            return self

        columns: list[Any] = [
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            MofNCompleteColumn(),
            TimeElapsedColumn(),
        ]
        if self.tally is not None:
            columns.append(TextColumn(f"[red]{{task.fields[counted]}} {self.tally}[/red]"))
        self._progress = Progress(*columns, console=get_console(), transient=False)
        self._progress.__enter__()
        self._task_id = self._progress.add_task(
            self.description, total=self.total_steps, counted=0
        )
        return self

    def __exit__(self, *args: Any) -> None:
        if self._progress is not None:
            self._progress.__exit__(*args)
            self._progress = None

    def update(self, description: str) -> None:
        if self._progress is not None:
            self._progress.update(self._task_id, description=escape(description))

    def advance(self, steps: int = 1, *, counted: bool | int = 0) -> None:
        """Advance by `steps` files and add `counted` to the tally."""
        self.current_step += steps
        self.counted += int(counted)
        if self._progress is not None:
            self._progress.update(self._task_id, advance=steps, counted=self.counted)

    def log(self, message: str) -> None:
        """Print a line above the bar without disturbing it."""
        if is_quiet():
            return
        if self._progress is not None:
            self._progress.console.print(escape(message))
        else:
            get_console().print(escape(message))
