"""
Structural indexing of MPEG-1 Layer III streams.

Audio is never decoded. We locate the ID3v2 tag (and its padding run),
walk MPEG frames by header arithmetic, record whatever trails the last
frame and note an ID3v1 tag when one closes the file.
"""

from __future__ import annotations

import logging
import re
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, NamedTuple

from stegsift.container.base import Span
from stegsift.exceptions import MalformedContainerError, UnsupportedFormatError


logger = logging.getLogger(__name__)

ID3V2_HEADER_SIZE = 10
ID3V1_SIZE = 128
SAMPLES_PER_FRAME = 1152

# MPEG-1 Layer III tables
BITRATES_KBPS = (0, 32, 40, 48, 56, 64, 80, 96, 112, 128, 160, 192, 224, 256, 320, 0)
SAMPLE_RATES = (44100, 48000, 32000, 0)

_FRAME_ID = re.compile(rb"[A-Z0-9]{4}")


class MpegFrame(NamedTuple):
    offset: int
    length: int
    bitrate_kbps: int
    sample_rate: int
    padding: int


@dataclass
class Id3v2Tag:
    """
    ID3v2 tag located at offset 0.

    Attributes:
        version: (major, revision), major is 3 or 4
        flags: Header flag byte
        tag_size: Synchsafe size from the header (excludes header and footer)
        padding_span: From the end of the last well-formed frame to the end of the tag body
        frame_ids: IDs of the well-formed frames, in order
    """

    version: tuple[int, int]
    flags: int
    tag_size: int
    padding_span: Span
    frame_ids: list[str] = field(default_factory=list)
    has_footer: bool = False

    @property
    def total_size(self) -> int:
        return ID3V2_HEADER_SIZE + self.tag_size + (ID3V2_HEADER_SIZE if self.has_footer else 0)

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": list(self.version),
            "flags": self.flags,
            "tag_size": self.tag_size,
            "padding_span": self.padding_span.to_list(),
            "frame_ids": list(self.frame_ids),
            "has_footer": self.has_footer,
        }


@dataclass
class Mp3Stream:
    """Structural index of an MP3 file image."""

    id3v2: Id3v2Tag | None
    frames: list[MpegFrame]
    trailing_span: Span
    id3v1: Span | None
    raw_bytes: bytes = field(repr=False)
    resync_skips: list[Span] = field(default_factory=list)
    anomalies: list[str] = field(default_factory=list)

    @property
    def audio_start(self) -> int:
        return self.id3v2.total_size if self.id3v2 else 0

    @property
    def frames_end(self) -> int:
        return self.frames[-1].offset + self.frames[-1].length if self.frames else self.audio_start

    @property
    def duration_seconds(self) -> float:
        return sum(SAMPLES_PER_FRAME / f.sample_rate for f in self.frames)

    def padding_bytes(self) -> bytes:
        if self.id3v2 is None:
            return b""
        span = self.id3v2.padding_span
        return self.raw_bytes[span.offset:span.end]

    def trailing_bytes(self) -> bytes:
        span = self.trailing_span
        return self.raw_bytes[span.offset:span.end]

    def to_dict(self) -> dict[str, Any]:
        return {
            "id3v2": self.id3v2.to_dict() if self.id3v2 else None,
            "frame_count": len(self.frames),
            "trailing_span": self.trailing_span.to_list(),
            "id3v1": self.id3v1.to_list() if self.id3v1 else None,
            "resync_skips": [s.to_list() for s in self.resync_skips],
            "anomalies": list(self.anomalies),
        }


def synchsafe(raw: bytes) -> int:
    """Decode a 4-byte synchsafe integer (7 significant bits per byte)."""
    value = 0
    for byte in raw:
        value = (value << 7) | (byte & 0x7F)
    return value


def to_synchsafe(value: int) -> bytes:
    if not 0 <= value < (1 << 28):
        raise ValueError(f"{value} does not fit a 28-bit synchsafe integer")
    return bytes(((value >> shift) & 0x7F) for shift in (21, 14, 7, 0))


def parse_frame_header(data: bytes, pos: int) -> MpegFrame | None:
    """Decode an MPEG-1 Layer III header at pos, or None if it is not one."""
    if pos + 4 > len(data):
        return None
    b0, b1, b2 = data[pos], data[pos + 1], data[pos + 2]
    if b0 != 0xFF or (b1 & 0xE0) != 0xE0:
        return None
    if (b1 >> 3) & 0x3 != 0x3 or (b1 >> 1) & 0x3 != 0x1:
        return None
    bitrate = BITRATES_KBPS[b2 >> 4]
    sample_rate = SAMPLE_RATES[(b2 >> 2) & 0x3]
    if bitrate == 0 or sample_rate == 0:
        return None
    padding = (b2 >> 1) & 0x1
    length = 144000 * bitrate // sample_rate + padding
    return MpegFrame(pos, length, bitrate, sample_rate, padding)


def _parse_id3v2(data: bytes) -> Id3v2Tag:
    if len(data) < ID3V2_HEADER_SIZE:
        raise MalformedContainerError("mp3", "truncated ID3v2 header", 0)
    major, revision, flags = data[3], data[4], data[5]
    if major == 2:
        raise UnsupportedFormatError("mp3", "ID3v2.2 tags are not supported")
    if major not in (3, 4):
        raise UnsupportedFormatError("mp3", f"ID3v2.{major} tags are not supported")
    size_raw = data[6:10]
    if any(b & 0x80 for b in size_raw):
        raise MalformedContainerError("mp3", "ID3v2 size is not synchsafe", 6)

    tag_size = synchsafe(size_raw)
    has_footer = major == 4 and bool(flags & 0x10)
    body_end = ID3V2_HEADER_SIZE + tag_size
    if body_end + (ID3V2_HEADER_SIZE if has_footer else 0) > len(data):
        raise MalformedContainerError("mp3", f"ID3v2 tag of {tag_size} bytes exceeds file", 0)

    pos = ID3V2_HEADER_SIZE
    if flags & 0x40 and pos + 4 <= body_end:
        if major == 3:
            pos += 4 + struct.unpack_from(">I", data, pos)[0]
        else:
            pos += synchsafe(data[pos:pos + 4])
        pos = min(pos, body_end)

    frame_ids: list[str] = []
    while pos + 10 <= body_end:
        frame_id = data[pos:pos + 4]
        if not _FRAME_ID.fullmatch(frame_id):
            break
        if major == 3:
            (frame_size,) = struct.unpack_from(">I", data, pos + 4)
        else:
            frame_size = synchsafe(data[pos + 4:pos + 8])
        if pos + 10 + frame_size > body_end:
            break
        frame_ids.append(frame_id.decode("ascii"))
        pos += 10 + frame_size

    return Id3v2Tag(
        version=(major, revision),
        flags=flags,
        tag_size=tag_size,
        padding_span=Span(pos, body_end - pos),
        frame_ids=frame_ids,
        has_footer=has_footer,
    )


def _confirmed(data: bytes, frame: MpegFrame, audio_end: int) -> bool:
    """A resync candidate counts only if the next header also checks out."""
    nxt = frame.offset + frame.length
    if nxt == audio_end:
        return True
    follower = parse_frame_header(data, nxt)
    return follower is not None and nxt + follower.length <= audio_end


def _resync(data: bytes, start: int, audio_end: int) -> MpegFrame | None:
    pos = data.find(b"\xff", start, audio_end)
    while pos != -1:
        frame = parse_frame_header(data, pos)
        if (
            frame is not None
            and pos + frame.length <= audio_end
            and _confirmed(data, frame, audio_end)
        ):
            return frame
        pos = data.find(b"\xff", pos + 1, audio_end)
    return None


def parse_mp3(data: bytes) -> Mp3Stream:
    """
    Index an MP3 byte image.

    Frames found at the expected continuation position are accepted
    directly. Anything else is resynchronised: the skipped range is
    recorded, and a candidate frame must be followed by another valid
    header (or the end of audio). Whatever cannot be resynchronised
    becomes the trailing span.

    Raises:
        MalformedContainerError: No frame and no ID3v2 tag, or a broken tag header
        UnsupportedFormatError: ID3v2.2 or unknown tag versions
    """
    if not data:
        raise MalformedContainerError("mp3", "empty input")

    id3v2 = _parse_id3v2(data) if data[:3] == b"ID3" else None
    audio_start = id3v2.total_size if id3v2 else 0

    id3v1: Span | None = None
    audio_end = len(data)
    if len(data) - audio_start >= ID3V1_SIZE and data[-ID3V1_SIZE:-ID3V1_SIZE + 3] == b"TAG":
        id3v1 = Span(len(data) - ID3V1_SIZE, ID3V1_SIZE)
        audio_end = id3v1.offset

    frames: list[MpegFrame] = []
    skips: list[Span] = []
    anomalies: list[str] = []
    pos = audio_start
    while pos < audio_end:
        frame = parse_frame_header(data, pos)
        if frame is not None and pos + frame.length <= audio_end:
            frames.append(frame)
            pos += frame.length
            continue

        found = _resync(data, pos, audio_end)
        if found is None:
            break
        skip = Span(pos, found.offset - pos)
        skips.append(skip)
        anomalies.append(f"resync skipped {skip.length} bytes at offset {skip.offset}")
        logger.debug("MP3 resync skipped %d bytes at offset %d", skip.length, skip.offset)
        pos = found.offset

    if not frames and id3v2 is None:
        raise MalformedContainerError("mp3", "no valid MPEG-1 Layer III frame found")
    if not frames:
        anomalies.append("ID3v2 tag present but no MPEG frames follow")

    return Mp3Stream(
        id3v2=id3v2,
        frames=frames,
        trailing_span=Span(pos, audio_end - pos),
        id3v1=id3v1,
        raw_bytes=bytes(data),
        resync_skips=skips,
        anomalies=anomalies,
    )


def read_mp3(path: Path | str) -> Mp3Stream:
    return parse_mp3(Path(path).read_bytes())
