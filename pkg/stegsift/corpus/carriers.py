"""
Synthetic carrier audio.

PCM carriers are rendered at 0.5 full scale and quantised to the
configured carrier resolution inside the container bit depth, so a clean
carrier's LSB plane is constant. MP3 carriers are structurally valid
MPEG-1 Layer III streams built from a repeated silent frame; nothing in
the toolkit decodes MP3 audio.
"""

from __future__ import annotations

import math
import struct
from enum import Enum

import numpy as np
from scipy import signal

from stegsift.container.base import PcmAudio
from stegsift.container.mp3 import to_synchsafe
from stegsift.corpus.config import CorpusConfig


class CarrierKind(str, Enum):
    SINE_TONE = "sine_tone"
    SWEPT_TONE = "swept_tone"
    SHAPED_NOISE = "shaped_noise"


AMPLITUDE = 0.5
SINE_FREQUENCY = 440.0
SWEEP_START = 100.0
SWEEP_END = 8000.0
NOISE_CUTOFF = 4000.0

# 128 kbps, 44100 Hz, MPEG-1 Layer III, no CRC, no padding bit
MP3_FRAME_HEADER = bytes.fromhex("FFFB9000")
MP3_FRAME_LENGTH = 417
MP3_SAMPLES_PER_FRAME = 1152
MP3_SAMPLE_RATE = 44100
MP3_FRAME_TEMPLATE = MP3_FRAME_HEADER + bytes(MP3_FRAME_LENGTH - len(MP3_FRAME_HEADER))
ID3_PADDING_SIZE = 4096
ENCODER_NAME = "stegsift corpus"


def _quantise(wave: np.ndarray, config: CorpusConfig) -> np.ndarray:
    full_scale = (1 << (config.bit_depth - 1)) - 1
    step = config.quantisation_step
    values = np.round(wave * AMPLITUDE * full_scale / step) * step
    return np.clip(values, -full_scale - 1, full_scale).astype(np.int32)


def synthesize_carrier(
    kind: CarrierKind | str,
    duration: float,
    config: CorpusConfig | None = None,
    *,
    seed: int | None = None,
) -> PcmAudio:
    """
    Render a mono carrier.

    Args:
        kind: sine_tone (440 Hz), swept_tone (100 Hz to 8 kHz) or shaped_noise
        duration: Length in seconds
        config: Sample rate, bit depth and carrier resolution
        seed: Noise seed; defaults to config.seed

    Raises:
        ValueError: Non-positive duration
    """
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration}")
    config = config or CorpusConfig()
    kind = CarrierKind(kind)
    n = int(round(duration * config.sample_rate))
    t = np.arange(n, dtype=np.float64) / config.sample_rate

    if kind is CarrierKind.SINE_TONE:
        wave = np.sin(2 * np.pi * SINE_FREQUENCY * t)
    elif kind is CarrierKind.SWEPT_TONE:
        end = min(SWEEP_END, config.sample_rate / 2 * 0.9)
        wave = signal.chirp(t, f0=SWEEP_START, t1=max(duration, 1e-9), f1=end, method="linear")
    else:
        rng = np.random.default_rng(config.seed if seed is None else seed)
        cutoff = min(NOISE_CUTOFF, config.sample_rate / 2 * 0.9)
        b, a = signal.butter(4, cutoff, btype="low", fs=config.sample_rate)
        filtered = signal.lfilter(b, a, rng.standard_normal(n))
        peak = np.max(np.abs(filtered)) if n else 0.0
        wave = filtered / peak if peak > 0 else filtered

    return PcmAudio(
        sample_rate=config.sample_rate,
        channels=1,
        bit_depth=config.bit_depth,
        samples=_quantise(wave, config),
    )


def _text_frame(frame_id: bytes, text: str) -> bytes:
    body = b"\x00" + text.encode("latin-1")
    return frame_id + struct.pack(">I", len(body)) + b"\x00\x00" + body


def _id3v2_tag(title: str) -> bytes:
    frames = _text_frame(b"TIT2", title) + _text_frame(b"TSSE", ENCODER_NAME)
    body = frames + bytes(ID3_PADDING_SIZE)
    return b"ID3" + bytes([3, 0, 0]) + to_synchsafe(len(body)) + body


def _id3v1_tag(title: str) -> bytes:
    def field(text: str, size: int) -> bytes:
        return text.encode("latin-1")[:size].ljust(size, b"\x00")

    return (
        b"TAG"
        + field(title, 30)
        + field("stegsift", 30)
        + field("synthetic corpus", 30)
        + field("2024", 4)
        + field("", 30)
        + bytes([255])
    )


def mp3_frame_count(duration: float) -> int:
    return math.ceil(duration * MP3_SAMPLE_RATE / MP3_SAMPLES_PER_FRAME)


def synthesize_mp3_carrier(
    duration: float,
    config: CorpusConfig | None = None,
    *,
    seed: int | None = None,
) -> bytes:
    """
    Assemble an MP3 image: ID3v2.3 tag with 4096 bytes of padding,
    ceil(duration * 44100 / 1152) copies of a 417-byte frame, ID3v1 tag.
    """
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration}")
    config = config or CorpusConfig()
    seed = config.seed if seed is None else seed
    title = f"carrier {duration:g}s #{seed % 100000}"
    return (
        _id3v2_tag(title)
        + MP3_FRAME_TEMPLATE * mp3_frame_count(duration)
        + _id3v1_tag(title)
    )
