"""Tests for payload framing, WAV LSB embedding and MP3 region injection."""

import struct

import numpy as np
import pytest

from stegsift.container import PcmAudio, parse_mp3
from stegsift.corpus.carriers import MP3_FRAME_TEMPLATE
from stegsift.exceptions import (
    BadMagicError,
    CapacityExceededError,
    CrcMismatchError,
    NoId3TagError,
    PayloadTypeMismatchError,
    TruncatedFrameError,
)
from stegsift.stego import (
    FRAME_MAGIC,
    FRAME_OVERHEAD,
    ChannelPolicy,
    EmbedLocation,
    EmbedMode,
    EmbedPlan,
    FramedPayload,
    PayloadSpec,
    PayloadType,
    capacity_bits,
    capacity_bytes,
    deframe_payload,
    embed_mp3_meta,
    embed_wav_lsb,
    extract_wav_lsb,
    frame_payload,
    id3_padding_capacity,
    lsb_plane,
)


def _zeros(n: int, channels: int = 1) -> PcmAudio:
    return PcmAudio(sample_rate=8000, channels=channels, bit_depth=16, samples=np.zeros(n))


class TestPayloadSpec:
    """Test payload validation."""

    def test_empty_rejected(self):
        """Empty payloads are invalid."""
        with pytest.raises(ValueError):
            PayloadSpec(b"")

    def test_declared_zip_needs_magic(self):
        """A payload declared as ZIP must start with PK\\x03\\x04."""
        with pytest.raises(PayloadTypeMismatchError):
            PayloadSpec(b"plain text", PayloadType.ZIP)

    def test_declared_png_needs_magic(self):
        with pytest.raises(PayloadTypeMismatchError):
            PayloadSpec(b"GIF89a....", PayloadType.PNG)

    def test_zip_accepted(self, plain_zip):
        payload = PayloadSpec(plain_zip, PayloadType.ZIP)
        assert payload.declared_type is PayloadType.ZIP

    def test_serialized_length(self, text_payload):
        """Framing adds a fixed 17 bytes."""
        assert text_payload.serialized_length == len(text_payload.data) + FRAME_OVERHEAD
        assert len(text_payload.serialize()) == text_payload.serialized_length

    def test_raw_serializes_verbatim(self):
        payload = PayloadSpec(b"abc")
        assert payload.serialize() == b"abc"


class TestFraming:
    """Test the SGH1 frame format."""

    def test_layout(self):
        """Magic, type code, u64 length, body, CRC-32, all little-endian."""
        encoded = FramedPayload(PayloadType.PNG, b"xyz").encode()
        assert encoded[:4] == FRAME_MAGIC
        assert encoded[4] == 2
        assert struct.unpack_from("<Q", encoded, 5)[0] == 3
        assert encoded[13:16] == b"xyz"
        assert len(encoded) == 3 + FRAME_OVERHEAD

    def test_deframe_inverts_frame(self, text_payload):
        assert deframe_payload(frame_payload(text_payload)) == text_payload

    def test_trailing_bytes_ignored(self, text_payload):
        """Bytes after the CRC do not affect decoding."""
        data = frame_payload(text_payload) + b"\x00" * 50
        assert deframe_payload(data).data == text_payload.data

    def test_empty_body_frame(self):
        """A frame may carry an empty body."""
        encoded = FramedPayload(PayloadType.TXT, b"").encode()
        assert FramedPayload.decode(encoded).body == b""

    def test_unknown_type_code(self):
        """Unassigned type codes decode as unknown."""
        encoded = bytearray(FramedPayload(PayloadType.TXT, b"abc").encode())
        encoded[4] = 77
        assert FramedPayload.decode(bytes(encoded)).declared_type is PayloadType.UNKNOWN

    def test_bad_magic(self):
        with pytest.raises(BadMagicError):
            FramedPayload.decode(b"SGH2" + bytes(20))

    def test_truncated(self, text_payload):
        """Cutting the frame short is reported as truncation."""
        data = frame_payload(text_payload)
        with pytest.raises(TruncatedFrameError):
            FramedPayload.decode(data[:-10])

    def test_crc_mismatch(self, text_payload):
        """A flipped body bit fails the CRC check."""
        data = bytearray(frame_payload(text_payload))
        data[20] ^= 0x01
        with pytest.raises(CrcMismatchError):
            FramedPayload.decode(bytes(data))


class TestEmbedPlan:
    """Test plan validation and capacity."""

    def test_bits_per_sample_range(self):
        with pytest.raises(ValueError):
            EmbedPlan(bits_per_sample=3)

    def test_negative_start(self):
        with pytest.raises(ValueError):
            EmbedPlan(start_sample=-1)

    def test_capacity(self, sine_audio):
        """Two seconds at 44.1 kHz mono hold 88200 bits at 1 bit/sample."""
        assert capacity_bits(sine_audio, EmbedPlan()) == 88200
        assert capacity_bits(sine_audio, EmbedPlan(bits_per_sample=2)) == 176400
        assert capacity_bytes(sine_audio, EmbedPlan()) == 11025
        assert capacity_bytes(sine_audio, EmbedPlan(), EmbedMode.FRAMED) == 11025 - FRAME_OVERHEAD

    def test_channel_0_capacity(self, stereo_audio):
        """Only the first channel of each frame is eligible."""
        plan = EmbedPlan(channel_policy=ChannelPolicy.CHANNEL_0_ONLY)
        assert capacity_bits(stereo_audio, plan) == 1000
        assert capacity_bits(stereo_audio, EmbedPlan()) == 2000

    def test_start_sample_reduces_capacity(self, sine_audio):
        assert capacity_bits(sine_audio, EmbedPlan(start_sample=200)) == 88000


class TestLsbEmbedding:
    """Test LSB substitution and extraction."""

    def test_bit_order_one_bit(self):
        """Bits are taken LSB-first from each byte."""
        stego = embed_wav_lsb(_zeros(16), PayloadSpec(b"\x01\x80"), EmbedPlan())
        assert stego.samples.tolist() == [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]

    def test_bit_order_two_bits(self):
        """At two bits per sample the first bit of each pair lands in bit 0."""
        stego = embed_wav_lsb(_zeros(4), PayloadSpec(b"\xe4"), EmbedPlan(bits_per_sample=2))
        assert stego.samples.tolist() == [0, 1, 2, 3]

    @pytest.mark.parametrize("bits_per_sample", [1, 2])
    def test_extract_recovers_payload(self, sine_audio, text_payload, bits_per_sample):
        """The embedded bytes lead the extracted plane."""
        plan = EmbedPlan(bits_per_sample=bits_per_sample)
        stego = embed_wav_lsb(sine_audio, text_payload, plan)
        serialized = text_payload.serialize()

        plane = extract_wav_lsb(stego, plan)
        assert plane[: len(serialized)] == serialized
        assert deframe_payload(plane) == text_payload

    def test_only_low_bits_change(self, noise_audio, text_payload):
        """Embedding never touches bits above the plan mask."""
        plan = EmbedPlan(bits_per_sample=2)
        stego = embed_wav_lsb(noise_audio, text_payload, plan)
        diff = stego.samples ^ noise_audio.samples
        assert np.all(diff & ~plan.mask == 0)
        assert stego.same_shape(noise_audio)
        assert stego.bit_depth == noise_audio.bit_depth

    def test_negative_samples_stay_in_range(self):
        """LSB writes on the most negative sample do not overflow."""
        carrier = PcmAudio(sample_rate=8000, channels=1, bit_depth=16, samples=[-32768] * 8)
        stego = embed_wav_lsb(carrier, PayloadSpec(b"\xff"), EmbedPlan())
        assert stego.samples.tolist() == [-32767] * 8

    def test_start_sample_offset(self, sine_audio, text_payload):
        """Samples before start_sample are untouched."""
        plan = EmbedPlan(start_sample=1000)
        stego = embed_wav_lsb(sine_audio, text_payload, plan)
        assert np.array_equal(stego.samples[:1000], sine_audio.samples[:1000])
        assert deframe_payload(extract_wav_lsb(stego, plan)) == text_payload

    def test_channel_0_only(self, stereo_audio):
        """Second channel samples are untouched."""
        plan = EmbedPlan(channel_policy=ChannelPolicy.CHANNEL_0_ONLY)
        payload = PayloadSpec(b"\xff" * 100)
        stego = embed_wav_lsb(stereo_audio, payload, plan)
        assert np.array_equal(stego.frames()[:, 1], stereo_audio.frames()[:, 1])
        assert extract_wav_lsb(stego, plan)[:100] == payload.data

    def test_capacity_exceeded(self):
        """One byte more than capacity is refused."""
        with pytest.raises(CapacityExceededError):
            embed_wav_lsb(_zeros(16), PayloadSpec(b"abc"), EmbedPlan())

    def test_exact_capacity_fits(self):
        stego = embed_wav_lsb(_zeros(16), PayloadSpec(b"ab"), EmbedPlan())
        assert extract_wav_lsb(stego, EmbedPlan()) == b"ab"

    def test_carrier_not_modified(self, sine_audio, text_payload):
        before = sine_audio.samples.copy()
        embed_wav_lsb(sine_audio, text_payload, EmbedPlan())
        assert np.array_equal(sine_audio.samples, before)

    def test_clean_plane_is_zero(self, sine_audio):
        """Quantised synthetic carriers have an all-zero LSB plane."""
        assert lsb_plane(sine_audio) == bytes(len(lsb_plane(sine_audio)))


class TestMp3Injection:
    """Test ID3 padding and trailing-append embedding."""

    def test_id3_padding(self, mp3_stream):
        """Padding embedding keeps the file length and the frame index."""
        payload = PayloadSpec(b"hidden message " * 10)
        data = embed_mp3_meta(mp3_stream, payload, EmbedLocation.ID3_PADDING)
        stream = parse_mp3(data)

        assert len(data) == len(mp3_stream.raw_bytes)
        assert stream.frames == mp3_stream.frames
        assert stream.padding_bytes().startswith(payload.data)

    def test_id3_padding_framed(self, mp3_stream, text_payload):
        data = embed_mp3_meta(mp3_stream, text_payload, EmbedLocation.ID3_PADDING)
        offset = mp3_stream.id3v2.padding_span.offset
        assert deframe_payload(data[offset:]) == text_payload

    def test_id3_capacity(self, mp3_stream):
        assert id3_padding_capacity(mp3_stream) == 4096
        with pytest.raises(CapacityExceededError):
            embed_mp3_meta(mp3_stream, PayloadSpec(b"x" * 4097), EmbedLocation.ID3_PADDING)

    def test_trailing_append(self, mp3_stream):
        """Appended bytes sit between the last frame and the ID3v1 tag."""
        payload = PayloadSpec(b"appended secret words")
        data = embed_mp3_meta(mp3_stream, payload, EmbedLocation.TRAILING_APPEND)
        stream = parse_mp3(data)

        assert stream.trailing_bytes() == payload.data
        assert stream.id3v1 is not None
        assert len(stream.frames) == len(mp3_stream.frames)

    def test_no_tag(self):
        """Streams without ID3v2 accept trailing data but not padding data."""
        stream = parse_mp3(MP3_FRAME_TEMPLATE * 5)
        payload = PayloadSpec(b"abc")

        assert id3_padding_capacity(stream) == 0
        with pytest.raises(NoId3TagError):
            embed_mp3_meta(stream, payload, EmbedLocation.ID3_PADDING)
        data = embed_mp3_meta(stream, payload, EmbedLocation.TRAILING_APPEND)
        assert data.endswith(b"abc")
