"""
Boundary-aware carving of embedded files and magic-based identification.
"""

from __future__ import annotations

import logging
import struct
from dataclasses import dataclass

from stegsift.detection.signatures import SignatureHit, SignatureTable
from stegsift.exceptions import BoundaryNotFoundError


logger = logging.getLogger(__name__)

EOCD_MAGIC = b"PK\x05\x06"
EOCD_FIXED_SIZE = 22
PNG_SIGNATURE_SIZE = 8
SEVENZ_START_HEADER_SIZE = 32
FRAME_OVERHEAD = 17
FRAME_HEADER_SIZE = 13

MIN_SIZES = {
    "zip": 22,
    "docx": 22,
    "png": 8 + 25 + 12,
    "sevenz": 32,
    "framed": 17,
    "riff_wav": 12,
}

EXTENSIONS = {
    "sevenz": "7z",
    "gzip": "gz",
    "riff_wav": "wav",
    "unknown": "bin",
}


def extension_for(type_id: str) -> str:
    return EXTENSIONS.get(type_id, type_id)


@dataclass(frozen=True)
class Carving:
    """Bytes carved from a stream and where they came from."""

    data: bytes
    start: int
    end: int
    truncated: bool = False

    @property
    def length(self) -> int:
        return self.end - self.start


def _zip_end(stream: bytes, start: int) -> int:
    fallback = None
    pos = stream.find(EOCD_MAGIC, start)
    while pos != -1:
        if pos + EOCD_FIXED_SIZE <= len(stream):
            cd_size, cd_offset, comment_len = struct.unpack_from("<IIH", stream, pos + 12)
            end = pos + EOCD_FIXED_SIZE + comment_len
            if end <= len(stream):
                if cd_offset + cd_size == pos - start:
                    return end
                if fallback is None:
                    fallback = end
        pos = stream.find(EOCD_MAGIC, pos + 1)
    if fallback is not None:
        return fallback
    raise BoundaryNotFoundError("zip", "no End-Of-Central-Directory record")


def _png_end(stream: bytes, start: int) -> int:
    pos = start + PNG_SIGNATURE_SIZE
    while pos + 12 <= len(stream):
        (length,) = struct.unpack_from(">I", stream, pos)
        chunk_type = stream[pos + 4:pos + 8]
        if not chunk_type.isalpha():
            raise BoundaryNotFoundError("png", f"invalid chunk type at offset {pos}")
        nxt = pos + 12 + length
        if nxt > len(stream):
            break
        if chunk_type == b"IEND":
            return nxt
        pos = nxt
    raise BoundaryNotFoundError("png", "no IEND chunk")


def _sevenz_end(stream: bytes, start: int) -> int:
    if start + SEVENZ_START_HEADER_SIZE > len(stream):
        raise BoundaryNotFoundError("sevenz", "truncated start header")
    next_offset, next_size = struct.unpack_from("<QQ", stream, start + 12)
    end = start + SEVENZ_START_HEADER_SIZE + next_offset + next_size
    if end > len(stream):
        raise BoundaryNotFoundError("sevenz", "next header lies past end of stream")
    return end


def _framed_end(stream: bytes, start: int) -> int:
    if start + FRAME_HEADER_SIZE > len(stream):
        raise BoundaryNotFoundError("framed", "truncated frame header")
    (length,) = struct.unpack_from("<Q", stream, start + 5)
    end = start + FRAME_OVERHEAD + length
    if end > len(stream):
        raise BoundaryNotFoundError("framed", "frame runs past end of stream")
    return end


def _riff_end(stream: bytes, start: int) -> int:
    if start + 8 > len(stream):
        raise BoundaryNotFoundError("riff_wav", "truncated RIFF header")
    (size,) = struct.unpack_from("<I", stream, start + 4)
    end = start + 8 + size
    if end > len(stream):
        raise BoundaryNotFoundError("riff_wav", "RIFF size runs past end of stream")
    return end


_BOUNDARY_RULES = {
    "zip": _zip_end,
    "docx": _zip_end,
    "png": _png_end,
    "sevenz": _sevenz_end,
    "framed": _framed_end,
    "riff_wav": _riff_end,
}


def find_end(type_id: str, stream: bytes, start: int) -> int:
    """
    End offset (exclusive) of the file of type_id starting at start.

    Raises:
        BoundaryNotFoundError: no boundary rule, or the rule cannot be satisfied
    """
    rule = _BOUNDARY_RULES.get(type_id)
    if rule is None:
        raise BoundaryNotFoundError(type_id, "no boundary rule for this type")
    return rule(stream, start)


def carve(hit: SignatureHit, stream: bytes) -> Carving:
    """
    Cut the file a signature hit points at out of its stream.

    Falls back to end of stream, with truncated set, when no boundary is found.
    """
    start = hit.offset
    try:
        end = find_end(hit.type_id, stream, start)
        return Carving(stream[start:end], start, end)
    except BoundaryNotFoundError as e:
        logger.warning(
            "Carving %s at %s:%d to end of stream: %s",
            hit.type_id, hit.source_plane.value, start, e.message,
        )
        return Carving(stream[start:], start, len(stream), truncated=True)


def _first_zip_entry_name(data: bytes) -> bytes:
    if len(data) < 30:
        return b""
    (name_len,) = struct.unpack_from("<H", data, 26)
    return data[30:30 + name_len]


def identify_type(data: bytes, table: SignatureTable | None = None) -> str:
    """
    File type from leading bytes, longest matching signature first.

    A ZIP whose first entry is `[Content_Types].xml` or lives under
    `word/` is reported as docx.
    """
    table = table or SignatureTable.default()
    match = table.longest_prefix(data)
    if match is None:
        return "unknown"
    if match.type_id == "zip":
        name = _first_zip_entry_name(data)
        if name.startswith(b"[Content_Types].xml") or b"word/" in name:
            return "docx"
    return match.type_id
