"""
Shared container types.

PcmAudio is the decoded carrier used by LSB embedding and all
signal-level detection stages. Span is a plain (offset, length) pair
used for every byte region we index inside a container.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, NamedTuple

import numpy as np

from stegsift.exceptions import UnsupportedFormatError


SUPPORTED_BIT_DEPTHS = (8, 16, 24)


class AudioFormat(str, Enum):
    """Container formats the toolkit understands."""

    WAV = "wav"
    MP3 = "mp3"


class Span(NamedTuple):
    """A byte region inside a file image."""

    offset: int
    length: int

    @property
    def end(self) -> int:
        return self.offset + self.length

    def to_list(self) -> list[int]:
        return [self.offset, self.length]


@dataclass(frozen=True, eq=False)
class PcmAudio:
    """
    Decoded integer PCM audio.

    Samples are signed, interleaved by channel and held in a read-only
    int32 array. 8-bit WAV data is re-centred to signed on decode.

    Attributes:
        sample_rate: Samples per second per channel (Hz)
        channels: Channel count
        bit_depth: Bits per sample (8, 16 or 24)
        samples: Interleaved signed sample values
    """

    sample_rate: int
    channels: int
    bit_depth: int
    samples: np.ndarray

    def __post_init__(self) -> None:
        if self.bit_depth not in SUPPORTED_BIT_DEPTHS:
            raise UnsupportedFormatError("wav", f"bit depth {self.bit_depth}")
        if self.channels < 1:
            raise ValueError(f"channels must be >= 1, got {self.channels}")
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")

        samples = np.array(self.samples, dtype=np.int32, copy=True).reshape(-1)
        if samples.size % self.channels != 0:
            raise ValueError(
                f"{samples.size} samples is not a multiple of {self.channels} channels"
            )
        if samples.size:
            lo, hi = self.value_range
            if int(samples.min()) < lo or int(samples.max()) > hi:
                raise ValueError(f"sample values exceed {self.bit_depth}-bit signed range")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def value_range(self) -> tuple[int, int]:
        half = 1 << (self.bit_depth - 1)
        return -half, half - 1

    @property
    def num_frames(self) -> int:
        return self.samples.size // self.channels

    @property
    def duration_seconds(self) -> float:
        return self.num_frames / self.sample_rate

    def frames(self) -> np.ndarray:
        """Per-channel view, shape (num_frames, channels)."""
        return self.samples.reshape(-1, self.channels)

    def to_mono(self) -> np.ndarray:
        """Channel average as float64."""
        if self.channels == 1:
            return self.samples.astype(np.float64)
        return self.frames().astype(np.float64).mean(axis=1)

    def with_samples(self, samples: np.ndarray) -> PcmAudio:
        """Return a copy carrying new sample values and the same format."""
        return PcmAudio(
            sample_rate=self.sample_rate,
            channels=self.channels,
            bit_depth=self.bit_depth,
            samples=samples,
        )

    def same_shape(self, other: PcmAudio) -> bool:
        return (
            self.sample_rate == other.sample_rate
            and self.channels == other.channels
            and self.samples.size == other.samples.size
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PcmAudio):
            return NotImplemented
        return (
            self.sample_rate == other.sample_rate
            and self.channels == other.channels
            and self.bit_depth == other.bit_depth
            and np.array_equal(self.samples, other.samples)
        )

    __hash__ = None  # type: ignore[assignment]

    def to_dict(self) -> dict[str, Any]:
        return {
            "sample_rate": self.sample_rate,
            "channels": self.channels,
            "bit_depth": self.bit_depth,
            "num_samples": int(self.samples.size),
            "duration_seconds": self.duration_seconds,
        }


def sniff_format(data: bytes) -> AudioFormat | None:
    """Guess the container from leading bytes."""
    if data[:4] == b"RIFF" and data[8:12] == b"WAVE":
        return AudioFormat.WAV
    if data[:3] == b"ID3":
        return AudioFormat.MP3
    if len(data) >= 2 and data[0] == 0xFF and (data[1] & 0xE0) == 0xE0:
        return AudioFormat.MP3
    return None
