"""
CLI command for synthesizing the evaluation corpus.

Usage:
    stegsift gen-corpus --out ./corpus --seed 20240601
    stegsift gen-corpus --config-file corpus.cfg --files 64 --max-duration 400
    stegsift gen-corpus --preset paper --out paper/
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from stegsift.cli.common import fail, get_config
from stegsift.core.manifest import CorpusManifest
from stegsift.corpus import CorpusConfig, CorpusLayout, CorpusPreset, generate_corpus
from stegsift.exceptions import StegSiftError
from stegsift.utils.progress import ProgressTracker, is_quiet, print_success


console = Console()


def gen_corpus(
    ctx: typer.Context,
    out: Path = typer.Option(
        Path("./corpus"),
        "--out", "-o",
        help="Output directory for the corpus",
    ),
    config_file: Optional[Path] = typer.Option(
        None,
        "--config-file", "-c",
        help="key=value corpus configuration file",
    ),
    preset: Optional[CorpusPreset] = typer.Option(
        None,
        "--preset", "-p",
        help="Named starting configuration: desk, trend or paper",
    ),
    seed: Optional[int] = typer.Option(
        None,
        "--seed", "-s",
        help="Master seed (every random draw derives from it)",
    ),
    files: Optional[int] = typer.Option(
        None,
        "--files", "-n",
        help="Total number of files, split evenly between WAV and MP3",
    ),
    min_duration: Optional[float] = typer.Option(
        None,
        "--min-duration",
        help="Shortest carrier in seconds",
    ),
    max_duration: Optional[float] = typer.Option(
        None,
        "--max-duration",
        help="Longest carrier in seconds",
    ),
    schedule: Optional[str] = typer.Option(
        None,
        "--schedule",
        help="Duration schedule: linear or geometric",
    ),
    payload_rate: Optional[float] = typer.Option(
        None,
        "--payload-rate",
        help="Payload bytes per second of carrier",
    ),
    clean_fraction: Optional[float] = typer.Option(
        None,
        "--clean-fraction",
        help="Fraction of each format left clean as controls",
    ),
    embed_mode: Optional[str] = typer.Option(
        None,
        "--embed-mode",
        help="Payload layout: framed or raw",
    ),
    bits_per_sample: Optional[int] = typer.Option(
        None,
        "--bits-per-sample",
        help="LSB depth for WAV embedding (1 or 2)",
    ),
    references: Optional[bool] = typer.Option(
        None,
        "--references/--no-references",
        help="Also write the pre-embedding carriers under reference/",
    ),
) -> None:
    """
    Generate a deterministic corpus of clean and stego WAV/MP3 files.

    Examples:
        stegsift gen-corpus --out corpus/
        stegsift gen-corpus --preset trend --out trend/
    """
    try:
        if preset is not None and config_file is not None:
            fail("--preset and --config-file are mutually exclusive")
        if config_file is not None:
            base = CorpusConfig.from_file(config_file)
        else:
            base = CorpusConfig.preset(preset or CorpusPreset.DESK)
        config = base.with_overrides(
            seed=seed,
            total_files=files,
            min_duration=min_duration,
            max_duration=max_duration,
            duration_schedule=schedule,
            payload_rate=payload_rate,
            clean_fraction=clean_fraction,
            embed_mode=embed_mode,
            bits_per_sample=bits_per_sample,
            write_references=references,
        )
    except StegSiftError as e:
        fail(e)

    if not is_quiet():
        console.print(Panel.fit(
            "[bold blue]StegSift[/bold blue] - Corpus Generation",
            subtitle=f"seed {config.seed}, {config.total_files} files",
        ))

    original_folder = get_config(ctx).folders.original
    tracker = ProgressTracker("Generating corpus", total_steps=config.total_files)

    def on_entry(name: str) -> None:
        tracker.update(f"Wrote {name}")
        tracker.advance()

    try:
        with tracker:
            manifest = generate_corpus(
                config, out, original_folder=original_folder, on_entry=on_entry
            )
    except StegSiftError as e:
        fail(e)

    if not is_quiet():
        _display_summary(manifest)
    print_success(f"Manifest written to {CorpusLayout(out, original_folder).manifest}")


def _display_summary(manifest: CorpusManifest) -> None:
    table = Table(title="Corpus")
    table.add_column("Format", style="cyan")
    table.add_column("Files", justify="right")
    table.add_column("Stego", justify="right", style="red")
    table.add_column("Clean", justify="right", style="green")
    table.add_column("Payload bytes", justify="right")

    for fmt in ("wav", "mp3"):
        entries = manifest.by_format(fmt)
        stego = [e for e in entries if e.is_stego]
        table.add_row(
            fmt,
            str(len(entries)),
            str(len(stego)),
            str(len(entries) - len(stego)),
            str(sum(e.payload_bytes or 0 for e in stego)),
        )
    console.print(table)
