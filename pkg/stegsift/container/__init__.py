"""
Audio container parsing for StegSift.

- wav: RIFF/WAVE chunk index, PCM decode and canonical encode
- mp3: MPEG-1 Layer III frame index with ID3v2/ID3v1 tag regions
"""

from stegsift.container.base import AudioFormat, PcmAudio, Span, sniff_format
from stegsift.container.mp3 import (
    Id3v2Tag,
    Mp3Stream,
    MpegFrame,
    parse_frame_header,
    parse_mp3,
    read_mp3,
    synchsafe,
    to_synchsafe,
)
from stegsift.container.wav import (
    ChunkEntry,
    FormatInfo,
    WavFile,
    decode_pcm,
    encode_wav,
    parse_wav,
    read_wav,
    write_wav,
)

__all__ = [
    "AudioFormat",
    "PcmAudio",
    "Span",
    "sniff_format",
    "Id3v2Tag",
    "Mp3Stream",
    "MpegFrame",
    "parse_frame_header",
    "parse_mp3",
    "read_mp3",
    "synchsafe",
    "to_synchsafe",
    "ChunkEntry",
    "FormatInfo",
    "WavFile",
    "decode_pcm",
    "encode_wav",
    "parse_wav",
    "read_wav",
    "write_wav",
]
