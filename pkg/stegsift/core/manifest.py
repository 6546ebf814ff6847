"""
Ground-truth manifest for a generated corpus.

The manifest is a CSV file: one header row, one row per corpus file,
then `# config.<key>=<value>` comment lines echoing the generator
configuration and a final `# manifest_sha256=<hex>` line. The digest
covers the header and entry rows exactly as written, so regenerating a
corpus with the same configuration reproduces it byte for byte.
"""

from __future__ import annotations

import csv
import hashlib
import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator

from stegsift.exceptions import ConfigurationError, IOFailureError


logger = logging.getLogger(__name__)

MANIFEST_COLUMNS = [
    "filename",
    "format",
    "duration_s",
    "is_stego",
    "payload_type",
    "payload_bytes",
    "embed_mode",
    "embed_location",
    "bits_per_sample",
    "zip_password",
    "payload_sha256",
]

CONFIG_PREFIX = "# config."
DIGEST_PREFIX = "# manifest_sha256="


@dataclass(frozen=True)
class ManifestEntry:
    """One corpus file. Payload fields are None for clean controls."""

    filename: str
    format: str
    duration_s: float
    is_stego: bool
    payload_type: str | None = None
    payload_bytes: int | None = None
    embed_mode: str | None = None
    embed_location: str | None = None
    bits_per_sample: int | None = None
    zip_password: str | None = None
    payload_sha256: str | None = None

    def __post_init__(self) -> None:
        payload_fields = (
            self.payload_type,
            self.payload_bytes,
            self.embed_mode,
            self.embed_location,
            self.payload_sha256,
        )
        if not self.is_stego and any(v is not None for v in payload_fields):
            raise ConfigurationError(f"Clean manifest entry {self.filename} carries payload fields")
        if self.is_stego and self.payload_sha256 is None:
            raise ConfigurationError(f"Stego manifest entry {self.filename} has no payload digest")

    def to_row(self) -> dict[str, str]:
        def text(value: Any) -> str:
            return "" if value is None else str(value)

        return {
            "filename": self.filename,
            "format": self.format,
            "duration_s": f"{self.duration_s:.3f}",
            "is_stego": str(self.is_stego).lower(),
            "payload_type": text(self.payload_type),
            "payload_bytes": text(self.payload_bytes),
            "embed_mode": text(self.embed_mode),
            "embed_location": text(self.embed_location),
            "bits_per_sample": text(self.bits_per_sample),
            "zip_password": text(self.zip_password),
            "payload_sha256": text(self.payload_sha256),
        }

    @classmethod
    def from_row(cls, row: dict[str, str]) -> ManifestEntry:
        def opt(key: str) -> str | None:
            value = row.get(key, "")
            return value if value != "" else None

        def opt_int(key: str) -> int | None:
            value = opt(key)
            return int(value) if value is not None else None

        try:
            return cls(
                filename=row["filename"],
                format=row["format"],
                duration_s=float(row["duration_s"]),
                is_stego=row["is_stego"].strip().lower() == "true",
                payload_type=opt("payload_type"),
                payload_bytes=opt_int("payload_bytes"),
                embed_mode=opt("embed_mode"),
                embed_location=opt("embed_location"),
                bits_per_sample=opt_int("bits_per_sample"),
                zip_password=opt("zip_password"),
                payload_sha256=opt("payload_sha256"),
            )
        except (KeyError, ValueError) as e:
            raise ConfigurationError(f"Invalid manifest row {row}: {e}") from e


@dataclass
class CorpusManifest:
    """Entries plus the configuration that produced them."""

    entries: list[ManifestEntry] = field(default_factory=list)
    config: dict[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[ManifestEntry]:
        return iter(self.entries)

    def by_format(self, fmt: str) -> list[ManifestEntry]:
        return [e for e in self.entries if e.format == fmt]

    def get(self, filename: str) -> ManifestEntry | None:
        return next((e for e in self.entries if e.filename == filename), None)

    def entry_block(self) -> str:
        """Header and entry rows exactly as they appear in the file."""
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=MANIFEST_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for entry in self.entries:
            writer.writerow(entry.to_row())
        return buffer.getvalue()

    @property
    def manifest_sha256(self) -> str:
        return hashlib.sha256(self.entry_block().encode("utf-8")).hexdigest()

    def to_text(self) -> str:
        lines = [self.entry_block()]
        for key in sorted(self.config):
            lines.append(f"{CONFIG_PREFIX}{key}={self.config[key]}\n")
        lines.append(f"{DIGEST_PREFIX}{self.manifest_sha256}\n")
        return "".join(lines)

    def save(self, path: Path | str) -> None:
        path = Path(path)
        try:
            path.write_text(self.to_text(), encoding="utf-8", newline="")
        except OSError as e:
            raise IOFailureError(str(path), e.strerror or str(e)) from e

    @classmethod
    def from_text(cls, text: str) -> CorpusManifest:
        """
        Parse manifest text.

        Raises:
            ConfigurationError: Missing header or stored digest does not match
        """
        rows: list[str] = []
        config: dict[str, str] = {}
        stored_digest: str | None = None
        for line in text.splitlines():
            if line.startswith(DIGEST_PREFIX):
                stored_digest = line[len(DIGEST_PREFIX):].strip()
            elif line.startswith(CONFIG_PREFIX):
                key, _, value = line[len(CONFIG_PREFIX):].partition("=")
                config[key] = value
            elif line.strip():
                rows.append(line)

        if not rows or rows[0].split(",") != MANIFEST_COLUMNS:
            raise ConfigurationError(
                "Manifest has no valid header row",
                suggestion=f"Expected columns: {','.join(MANIFEST_COLUMNS)}",
            )
        reader = csv.DictReader(io.StringIO("\n".join(rows) + "\n"))
        manifest = cls([ManifestEntry.from_row(r) for r in reader], config)

        if stored_digest is not None and stored_digest != manifest.manifest_sha256:
            raise ConfigurationError(
                "Manifest digest does not match its entries",
                suggestion="The manifest was edited after generation; regenerate the corpus.",
                details={"stored": stored_digest, "computed": manifest.manifest_sha256},
            )
        return manifest

    @classmethod
    def load(cls, path: Path | str) -> CorpusManifest:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise IOFailureError(str(path), e.strerror or str(e)) from e
        manifest = cls.from_text(text)
        logger.debug("Loaded manifest %s with %d entries", path, len(manifest))
        return manifest

    @staticmethod
    def hash_config(config: dict[str, Any]) -> str:
        """Short digest of a configuration, used to name evaluation runs."""
        hasher = hashlib.sha256()
        for key in sorted(config):
            hasher.update(f"{key}={config[key]}\n".encode("utf-8"))
        return hasher.hexdigest()[:16]
