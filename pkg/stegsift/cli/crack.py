"""
CLI command for a standalone ZipCrypto dictionary attack.

Usage:
    stegsift crack extracted/wav_003_lsb_plane_0.zip --wordlist words.txt
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import typer

from stegsift.cli.common import EXIT_FINDINGS, fail, get_config
from stegsift.exceptions import ExhaustedError, StegSiftError
from stegsift.recovery import Wordlist, zip_brute_force
from stegsift.recovery.extractor import safe_member_name
from stegsift.utils.progress import print_info, print_success, print_warning


def crack(
    ctx: typer.Context,
    archive: Path = typer.Argument(
        ...,
        help="Encrypted ZIP archive",
        exists=True,
        dir_okay=False,
    ),
    wordlist: Optional[Path] = typer.Option(
        None,
        "--wordlist", "-w",
        help="Password candidates (default: configured or bundled wordlist)",
    ),
    budget: Optional[int] = typer.Option(
        None,
        "--budget", "-b",
        help="Maximum number of attempts",
    ),
    out: Optional[Path] = typer.Option(
        None,
        "--out", "-o",
        help="Write the decrypted members to this directory",
    ),
) -> None:
    """
    Recover the password of a ZipCrypto archive from a wordlist.

    Exits 1 when no candidate is confirmed.
    """
    config = get_config(ctx)
    try:
        source = wordlist or config.wordlist_path
        words = Wordlist.from_file(source) if source else Wordlist.bundled()
        print_info(f"Trying {len(words)} candidate(s) from {words.source}")
        result = zip_brute_force(archive.read_bytes(), words, budget)
    except ExhaustedError as e:
        print_warning(e.message)
        raise typer.Exit(EXIT_FINDINGS)
    except OSError as e:
        fail(f"Cannot read {archive}: {e}")
    except StegSiftError as e:
        fail(e)

    typer.echo(f"password\t{result.password}")
    print_success(f"Password confirmed after {result.attempts} attempt(s)")

    if out is not None:
        try:
            out.mkdir(parents=True, exist_ok=True)
            for name, content in result.members.items():
                (out / safe_member_name(name)).write_bytes(content)
        except OSError as e:
            fail(f"Cannot write members to {out}: {e}")
        print_success(f"{len(result.members)} member(s) written to {out}")
