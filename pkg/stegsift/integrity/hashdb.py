"""
Persistent hash database for evidence integrity.

One SQLite file, one table:

    hashes(id INTEGER PRIMARY KEY, name TEXT UNIQUE, md5 TEXT,
           sha256 TEXT, recorded_at INTEGER)

Builds are single-writer (a `.lock` file beside the database) and commit
atomically by writing a temporary database and renaming it into place.
"""

from __future__ import annotations

import logging
import os
import sqlite3
import time
from dataclasses import asdict, dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Iterator

from stegsift.exceptions import DatabaseBusyError, DuplicateNameError, IOFailureError
from stegsift.integrity.digests import digest_file


logger = logging.getLogger(__name__)

SCHEMA = (
    "CREATE TABLE hashes ("
    "id INTEGER PRIMARY KEY, "
    "name TEXT UNIQUE NOT NULL, "
    "md5 TEXT NOT NULL, "
    "sha256 TEXT NOT NULL, "
    "recorded_at INTEGER NOT NULL)"
)


@dataclass(frozen=True)
class HashRecord:
    id: int
    name: str
    md5: str
    sha256: str
    recorded_at: int

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


class FindingStatus(str, Enum):
    MATCH = "match"
    MISMATCH = "mismatch"
    MISSING = "missing"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class VerificationFinding:
    """
    Outcome of comparing one file against the database.

    known_benign is only ever set on `unknown` findings whose SHA-256
    appears in the optional known-benign database.
    """

    name: str
    status: FindingStatus
    expected: str | None = None
    actual: str | None = None
    known_benign: bool = False

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["status"] = self.status.value
        return data


class HashDb:
    """Read-side view of a committed hash database."""

    def __init__(self, path: Path, records: list[HashRecord]) -> None:
        self.path = path
        self._records = {r.name: r for r in records}

    @classmethod
    def open(cls, path: Path | str) -> HashDb:
        """
        Load every record from an existing database file.

        Raises:
            IOFailureError: File missing or not a readable hash database
        """
        path = Path(path)
        if not path.is_file():
            raise IOFailureError(str(path), "hash database not found")
        try:
            conn = sqlite3.connect(f"{path.resolve().as_uri()}?mode=ro", uri=True)
            try:
                rows = conn.execute(
                    "SELECT id, name, md5, sha256, recorded_at FROM hashes ORDER BY id"
                ).fetchall()
            finally:
                conn.close()
        except sqlite3.Error as e:
            raise IOFailureError(str(path), f"cannot read hash database: {e}") from e
        return cls(path, [HashRecord(*row) for row in rows])

    def get(self, name: str) -> HashRecord | None:
        return self._records.get(name)

    def sha256_set(self) -> set[str]:
        return {r.sha256 for r in self._records.values()}

    @property
    def records(self) -> list[HashRecord]:
        return sorted(self._records.values(), key=lambda r: r.id)

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[HashRecord]:
        return iter(self.records)

    def __contains__(self, name: object) -> bool:
        return name in self._records


def list_source_files(directory: Path | str) -> list[Path]:
    """
    Top-level regular files, sorted by name.

    Raises:
        IOFailureError: directory missing or unreadable
        DuplicateNameError: two names equal under case folding
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise IOFailureError(str(directory), "not a directory")
    try:
        files = sorted((p for p in directory.iterdir() if p.is_file()), key=lambda p: p.name)
    except OSError as e:
        raise IOFailureError(str(directory), e.strerror or str(e)) from e

    seen: dict[str, str] = {}
    for path in files:
        folded = path.name.casefold()
        if folded in seen:
            raise DuplicateNameError(path.name)
        seen[folded] = path.name
    return files


class _WriterLock:
    """Exclusive lock file; creation fails if another writer holds it."""

    def __init__(self, db_path: Path) -> None:
        self.path = db_path.with_name(db_path.name + ".lock")

    def __enter__(self) -> _WriterLock:
        try:
            fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError as e:
            raise DatabaseBusyError(str(self.path)) from e
        except OSError as e:
            raise IOFailureError(str(self.path), e.strerror or str(e)) from e
        os.write(fd, str(os.getpid()).encode())
        os.close(fd)
        return self

    def __exit__(self, *args: Any) -> None:
        try:
            self.path.unlink()
        except FileNotFoundError:
            pass


def build_db(
    source_dir: Path | str,
    db_path: Path | str,
    *,
    clock: Callable[[], float] = time.time,
) -> HashDb:
    """
    Hash every top-level file in source_dir and commit a fresh database.

    Ids are assigned 1..n in name order. The previous database, if any,
    is replaced only once the new one is fully written.
    """
    db_path = Path(db_path)
    files = list_source_files(source_dir)
    recorded_at = int(clock())

    records = []
    for index, path in enumerate(files, start=1):
        digests = digest_file(path)
        records.append(HashRecord(index, path.name, digests.md5, digests.sha256, recorded_at))

    try:
        db_path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise IOFailureError(str(db_path.parent), e.strerror or str(e)) from e

    with _WriterLock(db_path):
        tmp_path = db_path.with_name(f".{db_path.name}.{os.getpid()}.tmp")
        try:
            if tmp_path.exists():
                tmp_path.unlink()
            conn = sqlite3.connect(tmp_path)
            try:
                conn.execute(SCHEMA)
                conn.executemany(
                    "INSERT INTO hashes (id, name, md5, sha256, recorded_at) "
                    "VALUES (?, ?, ?, ?, ?)",
                    [(r.id, r.name, r.md5, r.sha256, r.recorded_at) for r in records],
                )
                conn.commit()
            finally:
                conn.close()
            os.replace(tmp_path, db_path)
        except (OSError, sqlite3.Error) as e:
            if tmp_path.exists():
                tmp_path.unlink()
            raise IOFailureError(str(db_path), str(e)) from e

    logger.info("Committed %d hash records to %s", len(records), db_path)
    return HashDb(db_path, records)


def check_file(db: HashDb, path: Path | str, algorithm: str = "sha256") -> VerificationFinding:
    """Compare one file against its record, by file name."""
    path = Path(path)
    digests = digest_file(path)
    record = db.get(path.name)
    actual = digests.get(algorithm)
    if record is None:
        return VerificationFinding(path.name, FindingStatus.UNKNOWN, actual=actual)
    expected = getattr(record, algorithm)
    status = FindingStatus.MATCH if expected == actual else FindingStatus.MISMATCH
    return VerificationFinding(path.name, status, expected=expected, actual=actual)


def verify_against_db(
    db: HashDb,
    working_dir: Path | str,
    *,
    known_benign: HashDb | None = None,
    algorithm: str = "sha256",
) -> list[VerificationFinding]:
    """
    One finding per file name in the union of database and directory.

    Findings are sorted by name. algorithm selects the compared digest
    (sha256 by default, md5 for interoperability).
    """
    if algorithm not in ("sha256", "md5"):
        raise ValueError(f"Unsupported comparison digest: {algorithm}")

    files = {p.name: p for p in list_source_files(working_dir)}
    benign = known_benign.sha256_set() if known_benign is not None else set()

    findings = []
    for name in sorted(set(files) | {r.name for r in db}):
        if name not in files:
            record = db.get(name)
            findings.append(VerificationFinding(
                name, FindingStatus.MISSING, expected=getattr(record, algorithm)
            ))
            continue
        finding = check_file(db, files[name], algorithm)
        if finding.status is FindingStatus.UNKNOWN and benign:
            sha256 = digest_file(files[name]).sha256
            finding = VerificationFinding(
                name, FindingStatus.UNKNOWN, actual=finding.actual, known_benign=sha256 in benign
            )
        findings.append(finding)

    mismatches = sum(1 for f in findings if f.status is FindingStatus.MISMATCH)
    if mismatches:
        logger.warning("%d file(s) differ from the hash database", mismatches)
    return findings
