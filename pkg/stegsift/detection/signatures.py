"""
File signature analysis (FSA).

A signature table maps type ids to magic byte strings. Scanning reports
every occurrence of every magic in every supplied stream, ordered by
plane, then LSB depth, then offset.

The table is extensible with a tab-separated text file, one entry per
line: `type_id<TAB>hex-bytes`. Blank lines and `#` comments are ignored.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Sequence

from stegsift.exceptions import ConfigurationError


logger = logging.getLogger(__name__)


class SourcePlane(str, Enum):
    """Byte streams a signature can be found in."""

    RAW_BYTES = "raw_bytes"
    LSB_PLANE = "lsb_plane"
    ID3_PADDING = "id3_padding"
    TRAILING = "trailing"

    @property
    def order(self) -> int:
        return list(SourcePlane).index(self)


@dataclass(frozen=True)
class Signature:
    type_id: str
    magic: bytes

    def to_dict(self) -> dict[str, str]:
        return {"type_id": self.type_id, "magic": self.magic.hex()}


BUILTIN_SIGNATURES: tuple[Signature, ...] = (
    Signature("zip", bytes.fromhex("504B0304")),
    Signature("png", bytes.fromhex("89504E470D0A1A0A")),
    Signature("sevenz", bytes.fromhex("377ABCAF271C")),
    Signature("pdf", bytes.fromhex("255044462D")),
    Signature("gzip", bytes.fromhex("1F8B08")),
    Signature("rar", bytes.fromhex("526172211A0700")),
    Signature("riff_wav", bytes.fromhex("52494646")),
    Signature("framed", bytes.fromhex("53474831")),
)


class SignatureTable:
    """Ordered collection of signatures."""

    def __init__(self, signatures: Iterable[Signature] = BUILTIN_SIGNATURES) -> None:
        self.signatures: list[Signature] = list(signatures)

    @classmethod
    def default(cls) -> SignatureTable:
        return cls()

    @classmethod
    def with_file(cls, path: Path | str | None) -> SignatureTable:
        """Built-in table extended by a signature file, if one is given."""
        table = cls()
        if path is not None:
            table.extend(load_signature_file(path))
        return table

    def extend(self, signatures: Iterable[Signature]) -> None:
        for sig in signatures:
            if sig not in self.signatures:
                self.signatures.append(sig)

    def type_ids(self) -> list[str]:
        return sorted({s.type_id for s in self.signatures})

    def longest_prefix(self, data: bytes) -> Signature | None:
        best: Signature | None = None
        for sig in self.signatures:
            if data.startswith(sig.magic) and (best is None or len(sig.magic) > len(best.magic)):
                best = sig
        return best

    def __iter__(self):
        return iter(self.signatures)

    def __len__(self) -> int:
        return len(self.signatures)


def load_signature_file(path: Path | str) -> list[Signature]:
    """
    Parse a `type_id<TAB>hex` signature file.

    Raises:
        ConfigurationError: Unreadable file or malformed entry
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise ConfigurationError(f"Cannot read signature file {path}: {e}") from e

    signatures = []
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ConfigurationError(
                f"{path}:{lineno}: expected 'type_id<TAB>hex-bytes'",
                suggestion="Separate the type id and the hex magic with a single tab.",
            )
        type_id, hex_magic = parts[0].strip(), parts[1].replace(" ", "")
        try:
            magic = bytes.fromhex(hex_magic)
        except ValueError:
            raise ConfigurationError(f"{path}:{lineno}: invalid hex '{parts[1]}'") from None
        if not type_id or not magic:
            raise ConfigurationError(f"{path}:{lineno}: empty type id or magic")
        signatures.append(Signature(type_id, magic))

    logger.debug("Loaded %d signatures from %s", len(signatures), path)
    return signatures


@dataclass(frozen=True)
class ScanStream:
    """
    A byte stream handed to the scanner.

    base_offset is where the stream starts in the file for planes that are
    contiguous file regions (raw, ID3 padding, trailing); it is 0 for the
    reassembled LSB plane.
    """

    plane: SourcePlane
    data: bytes
    bits_per_sample: int | None = None
    base_offset: int = 0


@dataclass(frozen=True)
class SignatureHit:
    offset: int
    type_id: str
    source_plane: SourcePlane
    bits_per_sample: int | None = None

    @property
    def sort_key(self) -> tuple[int, int, int, str]:
        return (self.source_plane.order, self.bits_per_sample or 0, self.offset, self.type_id)

    def to_dict(self) -> dict[str, Any]:
        return {
            "offset": self.offset,
            "type_id": self.type_id,
            "source_plane": self.source_plane.value,
            "bits_per_sample": self.bits_per_sample,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SignatureHit:
        return cls(
            offset=int(data["offset"]),
            type_id=str(data["type_id"]),
            source_plane=SourcePlane(data["source_plane"]),
            bits_per_sample=data.get("bits_per_sample"),
        )


def _find_all(data: bytes, magic: bytes) -> Iterable[int]:
    pos = data.find(magic)
    while pos != -1:
        yield pos
        pos = data.find(magic, pos + 1)


def fsa_scan(
    streams: Sequence[ScanStream | tuple[SourcePlane, bytes]],
    table: SignatureTable | None = None,
) -> list[SignatureHit]:
    """Report every signature occurrence in every stream."""
    table = table or SignatureTable.default()
    hits: list[SignatureHit] = []
    for stream in streams:
        if not isinstance(stream, ScanStream):
            plane, data = stream
            stream = ScanStream(SourcePlane(plane), data)
        for sig in table:
            for offset in _find_all(stream.data, sig.magic):
                hits.append(SignatureHit(offset, sig.type_id, stream.plane, stream.bits_per_sample))
    hits.sort(key=lambda h: h.sort_key)
    return hits
