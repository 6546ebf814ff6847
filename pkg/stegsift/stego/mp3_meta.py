"""
Payload injection into MP3 container regions.

Frame bytes are never touched: payloads go into the ID3v2 padding run
or are appended after the last frame (ahead of any ID3v1 tag).
"""

from __future__ import annotations

from enum import Enum

from stegsift.container.mp3 import Mp3Stream
from stegsift.exceptions import CapacityExceededError, NoId3TagError
from stegsift.stego.payload import PayloadSpec


class EmbedLocation(str, Enum):
    ID3_PADDING = "id3_padding"
    TRAILING_APPEND = "trailing_append"


def id3_padding_capacity(stream: Mp3Stream) -> int:
    """Bytes available in the ID3v2 padding run (0 without a tag)."""
    return stream.id3v2.padding_span.length if stream.id3v2 else 0


def embed_mp3_meta(stream: Mp3Stream, payload: PayloadSpec, location: EmbedLocation) -> bytes:
    """
    Write the serialized payload into an MP3 container region.

    Raises:
        NoId3TagError: id3_padding on a stream without an ID3v2 tag
        CapacityExceededError: payload longer than the padding run
    """
    data = payload.serialize()
    raw = stream.raw_bytes
    location = EmbedLocation(location)

    if location is EmbedLocation.ID3_PADDING:
        if stream.id3v2 is None:
            raise NoId3TagError()
        span = stream.id3v2.padding_span
        if len(data) > span.length:
            raise CapacityExceededError(8 * len(data), 8 * span.length)
        return raw[: span.offset] + data + raw[span.offset + len(data):]

    insert_at = stream.id3v1.offset if stream.id3v1 else len(raw)
    return raw[:insert_at] + data + raw[insert_at:]
