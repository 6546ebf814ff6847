"""
Dictionary attack on ZipCrypto-encrypted archives.

Candidates are tried in wordlist order. The standard-library reader
screens each one with the encryption-header check byte and then
verifies the CRC-32 of the fully decrypted, decompressed entry, so a
returned password always reproduces every encrypted entry intact.
"""

from __future__ import annotations

import io
import logging
import zipfile
import zlib
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from stegsift.exceptions import (
    ConfigurationError,
    ExhaustedError,
    NotEncryptedError,
    RecoveryError,
    UnsupportedEncryptionError,
)


logger = logging.getLogger(__name__)

AES_COMPRESS_TYPE = 99
FLAG_ENCRYPTED = 0x0001
FLAG_STRONG_ENCRYPTION = 0x0040
_PROGRESS_EVERY = 1000

_FAILED_CANDIDATE = (RuntimeError, zipfile.BadZipFile, zlib.error, EOFError, ValueError)


@dataclass
class Wordlist:
    """Ordered password candidates; attempt order is file order."""

    entries: list[str]
    source: str = "<memory>"

    @classmethod
    def from_file(cls, path: Path | str) -> Wordlist:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8", errors="replace")
        except OSError as e:
            raise ConfigurationError(f"Cannot read wordlist {path}: {e}") from e
        entries = [line.rstrip("\r") for line in text.split("\n")]
        return cls([e for e in entries if e], str(path))

    @classmethod
    def bundled(cls) -> Wordlist:
        """The wordlist shipped with the package."""
        resource = resources.files("stegsift.data").joinpath("wordlist.txt")
        text = resource.read_text(encoding="utf-8")
        return cls([line for line in text.splitlines() if line], "stegsift/data/wordlist.txt")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


@dataclass
class CrackResult:
    password: str
    attempts: int
    members: dict[str, bytes] = field(default_factory=dict)


def _open_archive(zip_bytes: bytes) -> zipfile.ZipFile:
    try:
        return zipfile.ZipFile(io.BytesIO(zip_bytes))
    except (zipfile.BadZipFile, ValueError) as e:
        raise RecoveryError(f"Not a readable ZIP archive: {e}") from e


def encrypted_entries(zip_bytes: bytes) -> list[zipfile.ZipInfo]:
    """
    Entries flagged as encrypted.

    Raises:
        UnsupportedEncryptionError: AES or strong-encryption entries present
    """
    with _open_archive(zip_bytes) as archive:
        infos = archive.infolist()
    encrypted = [i for i in infos if i.flag_bits & FLAG_ENCRYPTED]
    for info in encrypted:
        if info.compress_type == AES_COMPRESS_TYPE:
            raise UnsupportedEncryptionError("WinZip AES")
        if info.flag_bits & FLAG_STRONG_ENCRYPTION:
            raise UnsupportedEncryptionError("PKWARE strong encryption")
    return encrypted


def is_encrypted_zip(zip_bytes: bytes) -> bool:
    try:
        return bool(encrypted_entries(zip_bytes))
    except RecoveryError:
        return False


def _try_password(
    archive: zipfile.ZipFile, targets: list[zipfile.ZipInfo], pwd: bytes
) -> dict[str, bytes] | None:
    members = {}
    for info in targets:
        try:
            members[info.filename] = archive.read(info, pwd=pwd)
        except _FAILED_CANDIDATE:
            return None
    return members


def zip_brute_force(
    zip_bytes: bytes,
    wordlist: Wordlist,
    budget: int | None = None,
) -> CrackResult:
    """
    Recover the password of a ZipCrypto archive from a wordlist.

    The smallest encrypted entry is tried first for every candidate; only
    candidates that survive it are checked against the remaining entries.

    Raises:
        NotEncryptedError: No encrypted entries
        UnsupportedEncryptionError: AES or strong encryption
        ExhaustedError: No candidate confirmed within the budget
    """
    targets = sorted(encrypted_entries(zip_bytes), key=lambda i: (i.compress_size, i.filename))
    if not targets:
        raise NotEncryptedError()
    if not wordlist.entries:
        raise ConfigurationError("Wordlist is empty", suggestion="Supply at least one candidate.")

    limit = len(wordlist) if budget is None else min(budget, len(wordlist))
    attempts = 0
    with _open_archive(zip_bytes) as archive:
        plain = [i for i in archive.infolist() if not i.flag_bits & FLAG_ENCRYPTED]
        for candidate in wordlist.entries[:limit]:
            attempts += 1
            pwd = candidate.encode("utf-8")
            members = _try_password(archive, targets[:1], pwd)
            if members is not None and len(targets) > 1:
                members = _try_password(archive, targets, pwd)
            if members is not None:
                for info in plain:
                    members[info.filename] = archive.read(info)
                logger.info("Password confirmed after %d attempts", attempts)
                return CrackResult(candidate, attempts, members)
            if attempts % _PROGRESS_EVERY == 0:
                logger.debug("%d candidates tried", attempts)

    raise ExhaustedError(attempts)
