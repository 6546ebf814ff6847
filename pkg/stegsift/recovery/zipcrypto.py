"""
Traditional PKZIP (ZipCrypto) archive writer.

The standard library can read ZipCrypto entries but not write them, so
encrypted corpus payloads and test fixtures are assembled here. Each
entry gets a 12-byte encryption header whose last byte is the high byte
of the entry CRC-32, which is what readers use as the password check
byte.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass
from typing import Callable, Sequence


def _crc_table() -> list[int]:
    table = []
    for i in range(256):
        crc = i
        for _ in range(8):
            crc = (crc >> 1) ^ 0xEDB88320 if crc & 1 else crc >> 1
        table.append(crc)
    return table


CRC_TABLE = _crc_table()

ENCRYPTION_HEADER_SIZE = 12
METHOD_STORED = 0
METHOD_DEFLATED = 8
FLAG_ENCRYPTED = 0x0001
# 1980-01-01 00:00:00, the DOS epoch, keeps output deterministic
DOS_DATE = (0 << 9) | (1 << 5) | 1
DOS_TIME = 0


class ZipCryptoCipher:
    """Stream cipher state for one entry."""

    def __init__(self, password: bytes) -> None:
        self.key0 = 0x12345678
        self.key1 = 0x23456789
        self.key2 = 0x34567890
        for byte in password:
            self._update(byte)

    @staticmethod
    def _crc(byte: int, crc: int) -> int:
        return (crc >> 8) ^ CRC_TABLE[(crc ^ byte) & 0xFF]

    def _update(self, byte: int) -> None:
        self.key0 = self._crc(byte, self.key0)
        self.key1 = (self.key1 + (self.key0 & 0xFF)) & 0xFFFFFFFF
        self.key1 = (self.key1 * 134775813 + 1) & 0xFFFFFFFF
        self.key2 = self._crc((self.key1 >> 24) & 0xFF, self.key2)

    def _stream_byte(self) -> int:
        k = self.key2 | 2
        return ((k * (k ^ 1)) >> 8) & 0xFF

    def encrypt(self, data: bytes) -> bytes:
        out = bytearray(len(data))
        for i, plain in enumerate(data):
            out[i] = plain ^ self._stream_byte()
            self._update(plain)
        return bytes(out)

    def decrypt(self, data: bytes) -> bytes:
        out = bytearray(len(data))
        for i, cipher in enumerate(data):
            plain = cipher ^ self._stream_byte()
            out[i] = plain
            self._update(plain)
        return bytes(out)


@dataclass(frozen=True)
class ZipMember:
    name: str
    data: bytes


def _compress(data: bytes, method: int) -> bytes:
    if method == METHOD_STORED:
        return data
    compressor = zlib.compressobj(9, zlib.DEFLATED, -15)
    return compressor.compress(data) + compressor.flush()


def write_zip(
    members: Sequence[ZipMember],
    *,
    password: bytes | None = None,
    method: int = METHOD_DEFLATED,
    random_bytes: Callable[[int], bytes] | None = None,
) -> bytes:
    """
    Assemble a ZIP archive, optionally ZipCrypto-encrypting every entry.

    Args:
        members: Entries in archive order
        password: Encrypt all entries with this password when given
        method: METHOD_STORED or METHOD_DEFLATED
        random_bytes: Source of the 11 random header bytes per entry;
            must be supplied with a password so output stays reproducible
    """
    if password is not None and random_bytes is None:
        raise ValueError("random_bytes is required when encrypting")

    flags = FLAG_ENCRYPTED if password is not None else 0
    local_parts: list[bytes] = []
    central_parts: list[bytes] = []
    offset = 0

    for member in members:
        name = member.name.encode("utf-8")
        crc = zlib.crc32(member.data) & 0xFFFFFFFF
        body = _compress(member.data, method)
        if password is not None:
            salt = random_bytes(ENCRYPTION_HEADER_SIZE - 1)  # type: ignore[misc]
            header = salt + bytes([crc >> 24])
            body = ZipCryptoCipher(password).encrypt(header + body)

        local = struct.pack(
            "<4sHHHHHIIIHH",
            b"PK\x03\x04", 20, flags, method, DOS_TIME, DOS_DATE,
            crc, len(body), len(member.data), len(name), 0,
        ) + name
        central = struct.pack(
            "<4sHHHHHHIIIHHHHHII",
            b"PK\x01\x02", 20, 20, flags, method, DOS_TIME, DOS_DATE,
            crc, len(body), len(member.data), len(name), 0, 0, 0, 0, 0, offset,
        ) + name

        local_parts.append(local + body)
        central_parts.append(central)
        offset += len(local) + len(body)

    central_dir = b"".join(central_parts)
    eocd = struct.pack(
        "<4sHHHHIIH",
        b"PK\x05\x06", 0, 0, len(members), len(members), len(central_dir), offset, 0,
    )
    return b"".join(local_parts) + central_dir + eocd
