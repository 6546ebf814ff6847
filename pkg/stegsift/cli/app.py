"""
Main CLI application entry point.

Provides commands for:
- Building and verifying the evidence hash database
- Generating the synthetic evaluation corpus
- Scanning evidence through the detection pipeline
- Extracting and decrypting hidden payloads
- Scoring a scan against corpus ground truth
"""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Optional

import typer

from stegsift import __version__
from stegsift.cli.common import EXIT_ERROR, fail
from stegsift.cli.corpus import gen_corpus as gen_corpus_command
from stegsift.cli.crack import crack as crack_command
from stegsift.cli.evaluate import evaluate_command
from stegsift.cli.extract import extract as extract_command
from stegsift.cli.hashdb import hashdb_app
from stegsift.cli.scan import scan as scan_command
from stegsift.core.config import StegSiftConfig
from stegsift.exceptions import ConfigurationError, StegSiftError
from stegsift.utils.progress import (
    VerbosityLevel,
    get_console,
    is_verbose,
    print_error,
    set_verbosity,
)

app = typer.Typer(
    name="stegsift",
    help="Forensic steganalysis toolkit for WAV and MP3 evidence",
    add_completion=False,
    no_args_is_help=True,
)


def _version_callback(value: bool) -> None:
    if value:
        typer.echo(f"stegsift {__version__}")
        raise typer.Exit()


@app.callback()
def main_callback(
    ctx: typer.Context,
    verbose: bool = typer.Option(
        False,
        "--verbose", "-v",
        help="Enable verbose output with detailed logging",
    ),
    quiet: bool = typer.Option(
        False,
        "--quiet", "-q",
        help="Minimal output (errors only)",
    ),
    config_file: Optional[Path] = typer.Option(
        None,
        "--config",
        help="YAML config file (default: ./stegsift.yaml, then ~/.stegsift/config.yaml)",
    ),
    version: bool = typer.Option(
        False,
        "--version",
        callback=_version_callback,
        is_eager=True,
        help="Show the version and exit",
    ),
) -> None:
    """StegSift: find, extract and score data hidden in audio evidence."""
    set_verbosity(VerbosityLevel.from_flags(verbose=verbose, quiet=quiet))

    try:
        if config_file is not None:
            if not config_file.is_file():
                raise ConfigurationError(f"Config file not found: {config_file}")
            ctx.obj = StegSiftConfig.from_yaml(config_file)
        else:
            ctx.obj = StegSiftConfig.load_default()
    except StegSiftError as e:
        fail(e)


# Register commands
app.add_typer(hashdb_app, name="hashdb")
app.command("gen-corpus")(gen_corpus_command)
app.command("scan")(scan_command)
app.command("extract")(extract_command)
app.command("crack")(crack_command)
app.command("eval")(evaluate_command)


def main() -> None:
    """Main entry point with global error handling."""
    try:
        app()
    except StegSiftError as e:
        print_error(str(e))
        sys.exit(EXIT_ERROR)
    except KeyboardInterrupt:
        get_console().print("\n[dim]Interrupted.[/dim]")
        sys.exit(130)
    except Exception as e:
        if is_verbose():
            get_console().print_exception()
        else:
            print_error(f"Unexpected error: {e}")
            get_console().print("[dim]Run with --verbose for full traceback.[/dim]")
        sys.exit(EXIT_ERROR)


if __name__ == "__main__":
    main()
