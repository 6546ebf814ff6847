"""
Sequential LSB substitution over PCM samples.

Payload bits are taken LSB-first from each byte and written into the
eligible samples in storage order starting at start_sample. At two bits
per sample the first bit of each pair lands in bit 0, the second in bit 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from stegsift.container.base import PcmAudio
from stegsift.exceptions import CapacityExceededError
from stegsift.stego.payload import FRAME_OVERHEAD, EmbedMode, PayloadSpec


class ChannelPolicy(str, Enum):
    ALL_CHANNELS = "all_channels"
    CHANNEL_0_ONLY = "channel_0_only"


@dataclass(frozen=True)
class EmbedPlan:
    """
    Where and how densely payload bits go.

    start_sample indexes the eligible-sample sequence: storage order for
    all_channels, frame index for channel_0_only.
    """

    bits_per_sample: int = 1
    start_sample: int = 0
    channel_policy: ChannelPolicy = ChannelPolicy.ALL_CHANNELS

    def __post_init__(self) -> None:
        if self.bits_per_sample not in (1, 2):
            raise ValueError(f"bits_per_sample must be 1 or 2, got {self.bits_per_sample}")
        if self.start_sample < 0:
            raise ValueError(f"start_sample must be >= 0, got {self.start_sample}")
        object.__setattr__(self, "channel_policy", ChannelPolicy(self.channel_policy))

    @property
    def mask(self) -> int:
        return (1 << self.bits_per_sample) - 1

    def eligible(self, carrier: PcmAudio) -> slice:
        """Slice of carrier.samples that may carry payload bits."""
        if self.channel_policy is ChannelPolicy.CHANNEL_0_ONLY:
            return slice(self.start_sample * carrier.channels, None, carrier.channels)
        return slice(self.start_sample, None)


def capacity_bits(carrier: PcmAudio, plan: EmbedPlan) -> int:
    eligible = len(range(*plan.eligible(carrier).indices(carrier.samples.size)))
    return eligible * plan.bits_per_sample


def capacity_bytes(carrier: PcmAudio, plan: EmbedPlan, mode: EmbedMode = EmbedMode.RAW) -> int:
    """Largest payload body that fits, accounting for frame overhead."""
    available = capacity_bits(carrier, plan) // 8
    if mode is EmbedMode.FRAMED:
        available -= FRAME_OVERHEAD
    return max(available, 0)


def _bits_to_values(bits: np.ndarray, bits_per_sample: int) -> np.ndarray:
    if bits_per_sample == 1:
        return bits.astype(np.int32)
    pairs = bits.reshape(-1, 2).astype(np.int32)
    return pairs[:, 0] | (pairs[:, 1] << 1)


def embed_wav_lsb(carrier: PcmAudio, payload: PayloadSpec, plan: EmbedPlan) -> PcmAudio:
    """
    Replace the low bits of consecutive eligible samples with payload bits.

    Raises:
        CapacityExceededError: The serialized payload does not fit
    """
    serialized = payload.serialize()
    needed = 8 * len(serialized)
    available = capacity_bits(carrier, plan)
    if needed > available:
        raise CapacityExceededError(needed, available)

    bits = np.unpackbits(np.frombuffer(serialized, dtype=np.uint8), bitorder="little")
    values = _bits_to_values(bits, plan.bits_per_sample)

    samples = np.array(carrier.samples, dtype=np.int32)
    region = samples[plan.eligible(carrier)]  # view, basic slicing
    region[: values.size] = (region[: values.size] & ~plan.mask) | values
    return carrier.with_samples(samples)


def extract_wav_lsb(carrier: PcmAudio, plan: EmbedPlan) -> bytes:
    """
    Reassemble the whole LSB plane of the eligible samples.

    Returns floor(capacity_bits / 8) bytes. Payload boundaries are not
    detected here.
    """
    region = carrier.samples[plan.eligible(carrier)]
    if plan.bits_per_sample == 1:
        bits = (region & 1).astype(np.uint8)
    else:
        bits = np.stack([region & 1, (region >> 1) & 1], axis=1).reshape(-1).astype(np.uint8)
    usable = (bits.size // 8) * 8
    return np.packbits(bits[:usable], bitorder="little").tobytes()


def lsb_plane(carrier: PcmAudio, bits_per_sample: int = 1) -> bytes:
    """LSB plane of every sample from the start, all channels."""
    return extract_wav_lsb(carrier, EmbedPlan(bits_per_sample=bits_per_sample))
