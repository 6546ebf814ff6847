"""
Payload descriptors and the SGH1 frame format.

Wire layout of a framed payload (all integers little-endian):

    "SGH1" | type_code u8 | length u64 | body | crc32 u32

type_code: 0 txt, 1 docx, 2 png, 3 zip, 255 unknown.
"""

from __future__ import annotations

import hashlib
import struct
import zlib
from dataclasses import dataclass
from enum import Enum

from stegsift.exceptions import (
    BadMagicError,
    CrcMismatchError,
    PayloadTypeMismatchError,
    TruncatedFrameError,
)


FRAME_MAGIC = b"SGH1"
FRAME_HEADER_SIZE = 13
FRAME_OVERHEAD = 17

ZIP_MAGIC = b"PK\x03\x04"
PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


class PayloadType(str, Enum):
    """Declared payload type."""

    TXT = "txt"
    DOCX = "docx"
    PNG = "png"
    ZIP = "zip"
    UNKNOWN = "unknown"

    @property
    def type_code(self) -> int:
        return _TYPE_CODES[self]

    @classmethod
    def from_code(cls, code: int) -> PayloadType:
        for member, value in _TYPE_CODES.items():
            if value == code:
                return member
        return cls.UNKNOWN

    @property
    def extension(self) -> str:
        return "bin" if self is PayloadType.UNKNOWN else self.value


_TYPE_CODES = {
    PayloadType.TXT: 0,
    PayloadType.DOCX: 1,
    PayloadType.PNG: 2,
    PayloadType.ZIP: 3,
    PayloadType.UNKNOWN: 255,
}

_EXPECTED_MAGIC = {
    PayloadType.DOCX: ZIP_MAGIC,
    PayloadType.ZIP: ZIP_MAGIC,
    PayloadType.PNG: PNG_MAGIC,
}


class EmbedMode(str, Enum):
    """How payload bytes are laid into a carrier."""

    RAW = "raw"
    FRAMED = "framed"


@dataclass(frozen=True)
class PayloadSpec:
    """
    A payload to embed.

    Attributes:
        data: Payload bytes, never empty
        declared_type: What the payload claims to be
        mode: Raw bytes or SGH1-framed
    """

    data: bytes
    declared_type: PayloadType = PayloadType.UNKNOWN
    mode: EmbedMode = EmbedMode.RAW

    def __post_init__(self) -> None:
        if not self.data:
            raise ValueError("payload data must not be empty")
        object.__setattr__(self, "declared_type", PayloadType(self.declared_type))
        object.__setattr__(self, "mode", EmbedMode(self.mode))
        magic = _EXPECTED_MAGIC.get(self.declared_type)
        if magic is not None and not self.data.startswith(magic):
            raise PayloadTypeMismatchError(
                self.declared_type.value, f"data starts with {self.data[:8].hex()}"
            )

    @property
    def sha256(self) -> str:
        return hashlib.sha256(self.data).hexdigest()

    def serialize(self) -> bytes:
        """Bytes actually written into the carrier."""
        if self.mode is EmbedMode.FRAMED:
            return frame_payload(self)
        return self.data

    @property
    def serialized_length(self) -> int:
        return len(self.data) + (FRAME_OVERHEAD if self.mode is EmbedMode.FRAMED else 0)


@dataclass(frozen=True)
class FramedPayload:
    """An SGH1 frame. Unlike PayloadSpec the body may be empty."""

    declared_type: PayloadType
    body: bytes

    @property
    def crc32(self) -> int:
        return zlib.crc32(self.body) & 0xFFFFFFFF

    @property
    def total_length(self) -> int:
        return FRAME_OVERHEAD + len(self.body)

    def encode(self) -> bytes:
        header = FRAME_MAGIC + struct.pack("<BQ", self.declared_type.type_code, len(self.body))
        return header + self.body + struct.pack("<I", self.crc32)

    @classmethod
    def decode(cls, data: bytes) -> FramedPayload:
        """
        Parse a frame from the start of data. Bytes after the frame are ignored.

        Raises:
            BadMagicError: data does not start with SGH1
            TruncatedFrameError: fewer bytes than the header declares
            CrcMismatchError: body does not match the stored CRC-32
        """
        if data[:4] != FRAME_MAGIC:
            raise BadMagicError(bytes(data[:4]))
        if len(data) < FRAME_OVERHEAD:
            raise TruncatedFrameError(FRAME_OVERHEAD, len(data))
        type_code, length = struct.unpack_from("<BQ", data, 4)
        end = FRAME_HEADER_SIZE + length
        if end + 4 > len(data):
            raise TruncatedFrameError(length, max(len(data) - FRAME_OVERHEAD, 0))
        body = bytes(data[FRAME_HEADER_SIZE:end])
        (stored,) = struct.unpack_from("<I", data, end)
        frame = cls(PayloadType.from_code(type_code), body)
        if frame.crc32 != stored:
            raise CrcMismatchError(stored, frame.crc32)
        return frame


def frame_payload(payload: PayloadSpec) -> bytes:
    return FramedPayload(payload.declared_type, payload.data).encode()


def deframe_payload(data: bytes) -> PayloadSpec:
    """Decode an SGH1 frame back into a framed PayloadSpec."""
    frame = FramedPayload.decode(data)
    return PayloadSpec(data=frame.body, declared_type=frame.declared_type, mode=EmbedMode.FRAMED)
