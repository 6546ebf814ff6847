"""
Pytest configuration and shared fixtures for StegSift tests.

All audio, archives and images are synthesized in tmp_path.
"""

from pathlib import Path

import numpy as np
import pytest

from stegsift.container import PcmAudio, encode_wav, parse_mp3
from stegsift.corpus import CarrierKind, CorpusConfig, synthesize_carrier, synthesize_mp3_carrier
from stegsift.recovery import ZipMember, write_zip
from stegsift.stego import EmbedMode, EmbedPlan, PayloadSpec, PayloadType, embed_wav_lsb


# ============================================================================
# Audio Fixtures
# ============================================================================

@pytest.fixture
def sine_audio() -> PcmAudio:
    """Two seconds of quantised 440 Hz sine, 16-bit mono."""
    return synthesize_carrier(CarrierKind.SINE_TONE, 2.0)


@pytest.fixture
def noise_audio() -> PcmAudio:
    """One second of shaped noise, 16-bit mono."""
    return synthesize_carrier(CarrierKind.SHAPED_NOISE, 1.0, seed=7)


@pytest.fixture
def stereo_audio() -> PcmAudio:
    """A short 16-bit stereo signal with distinct channels."""
    left = np.arange(0, 4000, 4, dtype=np.int32)
    right = -left
    samples = np.stack([left, right], axis=1).reshape(-1)
    return PcmAudio(sample_rate=8000, channels=2, bit_depth=16, samples=samples)


@pytest.fixture
def mp3_bytes() -> bytes:
    """A ten-second synthetic MP3 image with ID3v2 padding and an ID3v1 tag."""
    return synthesize_mp3_carrier(10.0)


@pytest.fixture
def mp3_stream(mp3_bytes: bytes):
    return parse_mp3(mp3_bytes)


# ============================================================================
# Payload Fixtures
# ============================================================================

@pytest.fixture
def plain_zip() -> bytes:
    """A stored, unencrypted two-member archive."""
    return write_zip(
        [ZipMember("hello.txt", b"hello world\n"), ZipMember("data.bin", bytes(range(64)))],
        method=0,
    )


@pytest.fixture
def encrypted_zip() -> bytes:
    """A ZipCrypto archive protected with the password 'secret'."""
    rng = np.random.default_rng(1)
    return write_zip(
        [ZipMember("notes.txt", b"meet at the usual place\n" * 4)],
        password=b"secret",
        random_bytes=rng.bytes,
    )


@pytest.fixture
def text_payload() -> PayloadSpec:
    return PayloadSpec(b"the quick brown fox " * 20, PayloadType.TXT, EmbedMode.FRAMED)


@pytest.fixture
def stego_wav_bytes(encrypted_zip: bytes) -> bytes:
    """A WAV carrying a framed encrypted ZIP in its 1-bit LSB plane."""
    carrier = synthesize_carrier(CarrierKind.SINE_TONE, 1.0)
    payload = PayloadSpec(encrypted_zip, PayloadType.ZIP, EmbedMode.FRAMED)
    return encode_wav(embed_wav_lsb(carrier, payload, EmbedPlan()))


@pytest.fixture
def clean_wav_bytes() -> bytes:
    return encode_wav(synthesize_carrier(CarrierKind.SWEPT_TONE, 1.0))


# ============================================================================
# Corpus Fixtures
# ============================================================================

@pytest.fixture
def small_corpus_config() -> CorpusConfig:
    """An 8-file corpus with short carriers, fast enough for unit tests."""
    return CorpusConfig(
        total_files=8,
        min_duration=1.0,
        max_duration=4.0,
        payload_rate=400.0,
        clean_fraction=0.25,
        seed=1234,
    )


# ============================================================================
# CLI Fixtures (for integration tests)
# ============================================================================

@pytest.fixture
def cli_runner():
    """Create a Typer CLI test runner."""
    from typer.testing import CliRunner
    return CliRunner()


@pytest.fixture
def evidence_dir(tmp_path: Path, stego_wav_bytes: bytes, clean_wav_bytes: bytes) -> Path:
    """An evidence folder with one stego and one clean WAV."""
    original = tmp_path / "evidence" / "original"
    original.mkdir(parents=True)
    (original / "stego.wav").write_bytes(stego_wav_bytes)
    (original / "clean.wav").write_bytes(clean_wav_bytes)
    return original
