"""
RIFF/WAVE parsing and serialization.

Only integer PCM (format code 1) at 8, 16 or 24 bits is handled.
Chunks are walked with the RIFF pad-byte rule, unknown chunks are kept
in the index verbatim, and nothing is ever read past the input length.
"""

from __future__ import annotations

import logging
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, NamedTuple

import numpy as np

from stegsift.container.base import PcmAudio, Span, SUPPORTED_BIT_DEPTHS
from stegsift.exceptions import MalformedContainerError, UnsupportedFormatError


logger = logging.getLogger(__name__)

WAV_HEADER_SIZE = 44
PCM_FORMAT_CODE = 1


class ChunkEntry(NamedTuple):
    """One top-level chunk: fourcc, body offset, body length."""

    fourcc: str
    offset: int
    length: int


class FormatInfo(NamedTuple):
    audio_format: int
    channels: int
    sample_rate: int
    bit_depth: int

    @property
    def block_align(self) -> int:
        return self.channels * ((self.bit_depth + 7) // 8)


@dataclass
class WavFile:
    """
    Structural index of a RIFF/WAVE file.

    Attributes:
        chunk_index: Top-level chunks in file order
        format_info: Decoded `fmt ` chunk
        data_span: Location of the `data` chunk body
        raw_bytes: Full file image
        trailing_span: Bytes past the declared RIFF extent, if any
    """

    chunk_index: list[ChunkEntry]
    format_info: FormatInfo
    data_span: Span
    raw_bytes: bytes = field(repr=False)
    trailing_span: Span | None = None

    @property
    def data_bytes(self) -> bytes:
        return self.raw_bytes[self.data_span.offset:self.data_span.end]

    @property
    def duration_seconds(self) -> float:
        fmt = self.format_info
        return self.data_span.length / (fmt.block_align * fmt.sample_rate)

    def to_dict(self) -> dict[str, Any]:
        return {
            "chunks": [list(c) for c in self.chunk_index],
            "format": self.format_info._asdict(),
            "data_span": self.data_span.to_list(),
            "trailing_span": self.trailing_span.to_list() if self.trailing_span else None,
        }


def parse_wav(data: bytes) -> WavFile:
    """
    Index a RIFF/WAVE byte image.

    Raises:
        MalformedContainerError: Bad magic, truncated chunk, missing fmt/data
        UnsupportedFormatError: Any audio format code other than integer PCM
    """
    size = len(data)
    if size < WAV_HEADER_SIZE:
        raise MalformedContainerError("wav", f"only {size} bytes, need at least {WAV_HEADER_SIZE}")
    if data[0:4] != b"RIFF":
        raise MalformedContainerError("wav", f"missing RIFF magic (found {data[0:4]!r})", 0)
    if data[8:12] != b"WAVE":
        raise MalformedContainerError("wav", f"missing WAVE form type (found {data[8:12]!r})", 8)

    (riff_size,) = struct.unpack_from("<I", data, 4)
    declared_end = 8 + riff_size
    trailing_span: Span | None = None

    if declared_end > size + 1:
        raise MalformedContainerError(
            "wav", f"RIFF size {riff_size} runs past end of file ({size} bytes)", 4
        )
    if declared_end == size + 1:
        logger.warning("RIFF size counts a pad byte missing at end of file")
        end = size
    elif declared_end < size:
        logger.warning(
            "RIFF size %d leaves %d trailing bytes after the form", riff_size, size - declared_end
        )
        trailing_span = Span(declared_end, size - declared_end)
        end = declared_end
    else:
        end = declared_end

    chunks: list[ChunkEntry] = []
    pos = 12
    while pos < end:
        if pos + 8 > end:
            raise MalformedContainerError("wav", "truncated chunk header", pos)
        fourcc_raw, chunk_size = struct.unpack_from("<4sI", data, pos)
        body = pos + 8
        if body + chunk_size > end:
            raise MalformedContainerError(
                "wav", f"chunk {fourcc_raw!r} of {chunk_size} bytes exceeds file", pos
            )
        chunks.append(ChunkEntry(fourcc_raw.decode("latin-1"), body, chunk_size))
        pos = body + chunk_size + (chunk_size & 1)

    fmt_chunk = next((c for c in chunks if c.fourcc == "fmt "), None)
    data_chunk = next((c for c in chunks if c.fourcc == "data"), None)
    if fmt_chunk is None:
        raise MalformedContainerError("wav", "no 'fmt ' chunk")
    if data_chunk is None:
        raise MalformedContainerError("wav", "no 'data' chunk")
    if fmt_chunk.length < 16:
        raise MalformedContainerError("wav", "'fmt ' chunk shorter than 16 bytes", fmt_chunk.offset)

    audio_format, channels, sample_rate, _byte_rate, _align, bit_depth = struct.unpack_from(
        "<HHIIHH", data, fmt_chunk.offset
    )
    if audio_format != PCM_FORMAT_CODE:
        raise UnsupportedFormatError(
            "wav", f"audio format code 0x{audio_format:04x} is not integer PCM"
        )
    if channels == 0 or sample_rate == 0 or bit_depth == 0:
        raise MalformedContainerError("wav", "zero channels, rate or bit depth", fmt_chunk.offset)

    info = FormatInfo(audio_format, channels, sample_rate, bit_depth)
    if data_chunk.length % info.block_align != 0:
        raise MalformedContainerError(
            "wav",
            f"data length {data_chunk.length} not a multiple of block align {info.block_align}",
            data_chunk.offset,
        )

    return WavFile(
        chunk_index=chunks,
        format_info=info,
        data_span=Span(data_chunk.offset, data_chunk.length),
        raw_bytes=bytes(data),
        trailing_span=trailing_span,
    )


def decode_pcm(wav: WavFile) -> PcmAudio:
    """Decode the data chunk to signed samples."""
    info = wav.format_info
    if info.bit_depth not in SUPPORTED_BIT_DEPTHS:
        raise UnsupportedFormatError("wav", f"bit depth {info.bit_depth}")

    raw = wav.data_bytes
    if info.bit_depth == 8:
        samples = np.frombuffer(raw, dtype=np.uint8).astype(np.int32) - 128
    elif info.bit_depth == 16:
        samples = np.frombuffer(raw, dtype="<i2").astype(np.int32)
    else:
        triples = np.frombuffer(raw, dtype=np.uint8).reshape(-1, 3).astype(np.int32)
        unsigned = triples[:, 0] | (triples[:, 1] << 8) | (triples[:, 2] << 16)
        samples = (unsigned ^ 0x800000) - 0x800000

    return PcmAudio(
        sample_rate=info.sample_rate,
        channels=info.channels,
        bit_depth=info.bit_depth,
        samples=samples,
    )


def pcm_to_bytes(audio: PcmAudio) -> bytes:
    """Little-endian sample bytes as stored in a data chunk."""
    samples = audio.samples
    if audio.bit_depth == 8:
        return (samples + 128).astype(np.uint8).tobytes()
    if audio.bit_depth == 16:
        return samples.astype("<i2").tobytes()
    packed = samples.astype("<i4").view(np.uint8).reshape(-1, 4)[:, :3]
    return np.ascontiguousarray(packed).tobytes()


def encode_wav(audio: PcmAudio) -> bytes:
    """Serialize to a canonical `fmt ` + `data` RIFF/WAVE image."""
    body = pcm_to_bytes(audio)
    pad = b"\x00" if len(body) & 1 else b""
    block_align = audio.channels * (audio.bit_depth // 8)
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF",
        36 + len(body) + len(pad),
        b"WAVE",
        b"fmt ",
        16,
        PCM_FORMAT_CODE,
        audio.channels,
        audio.sample_rate,
        audio.sample_rate * block_align,
        block_align,
        audio.bit_depth,
        b"data",
        len(body),
    )
    return header + body + pad


def read_wav(path: Path | str) -> tuple[WavFile, PcmAudio]:
    """Parse and decode a WAV file from disk."""
    wav = parse_wav(Path(path).read_bytes())
    return wav, decode_pcm(wav)


def write_wav(path: Path | str, audio: PcmAudio) -> None:
    Path(path).write_bytes(encode_wav(audio))
