"""
Payload embedding and framing.

- payload: PayloadSpec and the SGH1 frame format
- lsb: sequential LSB substitution over WAV PCM samples
- mp3_meta: injection into ID3v2 padding or trailing bytes
"""

from stegsift.stego.lsb import (
    ChannelPolicy,
    EmbedPlan,
    capacity_bits,
    capacity_bytes,
    embed_wav_lsb,
    extract_wav_lsb,
    lsb_plane,
)
from stegsift.stego.mp3_meta import EmbedLocation, embed_mp3_meta, id3_padding_capacity
from stegsift.stego.payload import (
    FRAME_MAGIC,
    FRAME_OVERHEAD,
    EmbedMode,
    FramedPayload,
    PayloadSpec,
    PayloadType,
    deframe_payload,
    frame_payload,
)

__all__ = [
    "ChannelPolicy",
    "EmbedPlan",
    "capacity_bits",
    "capacity_bytes",
    "embed_wav_lsb",
    "extract_wav_lsb",
    "lsb_plane",
    "EmbedLocation",
    "embed_mp3_meta",
    "id3_padding_capacity",
    "FRAME_MAGIC",
    "FRAME_OVERHEAD",
    "EmbedMode",
    "FramedPayload",
    "PayloadSpec",
    "PayloadType",
    "deframe_payload",
    "frame_payload",
]
