"""
Deterministic evaluation corpus generation.

Layout written under out_dir:

    original/<fmt>_<index>.<fmt>   carriers, stego and clean (folders.original)
    reference/<same names>         pre-embedding carriers (optional)
    manifest.csv                   ground truth
    wordlist.txt                   the build wordlist used for zip_encrypted
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from stegsift.container.base import AudioFormat
from stegsift.container.mp3 import parse_mp3
from stegsift.container.wav import write_wav
from stegsift.core.manifest import CorpusManifest, ManifestEntry
from stegsift.corpus.carriers import CarrierKind, synthesize_carrier, synthesize_mp3_carrier
from stegsift.corpus.config import CorpusConfig, DurationSchedule, PayloadKind
from stegsift.corpus.payloads import (
    MIN_ENCRYPTED_TXT,
    generate_payload,
    pick_password,
)
from stegsift.exceptions import IOFailureError
from stegsift.recovery.zipcrack import Wordlist
from stegsift.stego.lsb import EmbedPlan, embed_wav_lsb
from stegsift.stego.mp3_meta import EmbedLocation, embed_mp3_meta, id3_padding_capacity
from stegsift.stego.payload import PayloadSpec


logger = logging.getLogger(__name__)

FORMAT_CODES = {AudioFormat.WAV: 0, AudioFormat.MP3: 1}

# Seed stream purposes, mixed into each entry's SeedSequence
_CARRIER, _PAYLOAD, _KIND, _CLEAN = 0, 1, 2, 3

# Smallest payload each kind is generated at; stored archives and PNG
# containers have a fixed structural cost.
MINIMUM_PAYLOAD_SIZES = {
    PayloadKind.TXT: 1,
    PayloadKind.TXT_ENCRYPTED: MIN_ENCRYPTED_TXT,
    PayloadKind.PNG: 256,
    PayloadKind.ZIP: 512,
    PayloadKind.ZIP_ENCRYPTED: 512,
    PayloadKind.DOCX: 1536,
}


@dataclass(frozen=True)
class CorpusLayout:
    root: Path
    original_folder: str = "original"

    @property
    def original(self) -> Path:
        return self.root / self.original_folder

    @property
    def reference(self) -> Path:
        return self.root / "reference"

    @property
    def manifest(self) -> Path:
        return self.root / "manifest.csv"

    @property
    def wordlist(self) -> Path:
        return self.root / "wordlist.txt"


def entry_seed(seed: int, fmt: AudioFormat, index: int, purpose: int) -> int:
    sequence = np.random.SeedSequence([seed, FORMAT_CODES[fmt], index, purpose])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def duration_schedule(config: CorpusConfig) -> list[float]:
    """Per-format carrier durations in seconds, rounded to milliseconds."""
    count = config.files_per_format
    if config.duration_schedule is DurationSchedule.GEOMETRIC:
        values = np.geomspace(config.min_duration, config.max_duration, count)
    else:
        values = np.linspace(config.min_duration, config.max_duration, count)
    return [round(float(v), 3) for v in values]


def clean_indices(config: CorpusConfig, fmt: AudioFormat) -> set[int]:
    """Indices left unembedded as false-positive controls."""
    rng = np.random.default_rng(entry_seed(config.seed, fmt, 0, _CLEAN))
    chosen = rng.choice(config.files_per_format, size=config.clean_per_format, replace=False)
    return {int(i) for i in chosen}


def _pick_kind(config: CorpusConfig, fmt: AudioFormat, index: int) -> PayloadKind:
    kinds = list(config.payload_mix)
    weights = np.array([config.payload_mix[k] for k in kinds], dtype=np.float64)
    rng = np.random.default_rng(entry_seed(config.seed, fmt, index, _KIND))
    return PayloadKind(kinds[int(rng.choice(len(kinds), p=weights / weights.sum()))])


def payload_size(config: CorpusConfig, kind: PayloadKind, duration: float) -> int:
    """The proportionate payload size, raised to the kind's minimum."""
    return max(int(round(config.payload_rate * duration)), MINIMUM_PAYLOAD_SIZES[kind])


def _write(path: Path, data: bytes) -> None:
    try:
        path.write_bytes(data)
    except OSError as e:
        raise IOFailureError(str(path), e.strerror or str(e)) from e


def _build_wav(
    config: CorpusConfig,
    layout: CorpusLayout,
    name: str,
    index: int,
    duration: float,
    payload: PayloadSpec | None,
) -> None:
    kinds = list(CarrierKind)
    carrier = synthesize_carrier(
        kinds[index % len(kinds)],
        duration,
        config,
        seed=entry_seed(config.seed, AudioFormat.WAV, index, _CARRIER),
    )
    if config.write_references:
        write_wav(layout.reference / name, carrier)
    audio = carrier
    if payload is not None:
        audio = embed_wav_lsb(carrier, payload, EmbedPlan(bits_per_sample=config.bits_per_sample))
    write_wav(layout.original / name, audio)


def _build_mp3(
    config: CorpusConfig,
    layout: CorpusLayout,
    name: str,
    index: int,
    duration: float,
    payload: PayloadSpec | None,
    prefer_padding: bool,
) -> EmbedLocation | None:
    carrier = synthesize_mp3_carrier(
        duration, config, seed=entry_seed(config.seed, AudioFormat.MP3, index, _CARRIER)
    )
    if config.write_references:
        _write(layout.reference / name, carrier)
    if payload is None:
        _write(layout.original / name, carrier)
        return None

    stream = parse_mp3(carrier)
    location = EmbedLocation.ID3_PADDING if prefer_padding else EmbedLocation.TRAILING_APPEND
    fits = payload.serialized_length <= id3_padding_capacity(stream)
    if location is EmbedLocation.ID3_PADDING and not fits:
        logger.debug("%s: payload exceeds ID3 padding, appending instead", name)
        location = EmbedLocation.TRAILING_APPEND
    _write(layout.original / name, embed_mp3_meta(stream, payload, location))
    return location


def generate_corpus(
    config: CorpusConfig,
    out_dir: Path | str,
    *,
    original_folder: str = "original",
    on_entry: Callable[[str], None] | None = None,
) -> CorpusManifest:
    """
    Generate every corpus file and write the manifest.

    Args:
        config: Validated corpus configuration
        out_dir: Output directory, created if needed
        original_folder: Folder under out_dir that receives the evidence files
        on_entry: Called with each file name once it is written

    Raises:
        IOFailureError: out_dir or a corpus file cannot be written
    """
    layout = CorpusLayout(Path(out_dir), original_folder)
    try:
        layout.original.mkdir(parents=True, exist_ok=True)
        if config.write_references:
            layout.reference.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise IOFailureError(str(layout.root), e.strerror or str(e)) from e

    wordlist = Wordlist.bundled()
    _write(layout.wordlist, ("\n".join(wordlist.entries) + "\n").encode("utf-8"))

    durations = duration_schedule(config)
    entries: list[ManifestEntry] = []

    for fmt in (AudioFormat.WAV, AudioFormat.MP3):
        clean = clean_indices(config, fmt)
        stego_ordinal = 0
        for index, duration in enumerate(durations):
            name = f"{fmt.value}_{index:03d}.{fmt.value}"
            if index in clean:
                if fmt is AudioFormat.WAV:
                    _build_wav(config, layout, name, index, duration, None)
                else:
                    _build_mp3(config, layout, name, index, duration, None, True)
                entries.append(ManifestEntry(name, fmt.value, duration, is_stego=False))
            else:
                kind = _pick_kind(config, fmt, index)
                payload_seed = entry_seed(config.seed, fmt, index, _PAYLOAD)
                password = None
                if kind is PayloadKind.ZIP_ENCRYPTED:
                    password = pick_password(payload_seed, wordlist)
                payload = generate_payload(
                    kind,
                    payload_size(config, kind, duration),
                    payload_seed,
                    mode=config.embed_mode,
                    password=password,
                )
                if fmt is AudioFormat.WAV:
                    _build_wav(config, layout, name, index, duration, payload)
                    location = "lsb"
                    bits = config.bits_per_sample
                else:
                    placed = _build_mp3(
                        config, layout, name, index, duration, payload, stego_ordinal % 2 == 0
                    )
                    location = placed.value if placed else ""
                    bits = None
                stego_ordinal += 1
                entries.append(ManifestEntry(
                    filename=name,
                    format=fmt.value,
                    duration_s=duration,
                    is_stego=True,
                    payload_type=kind.value,
                    payload_bytes=len(payload.data),
                    embed_mode=payload.mode.value,
                    embed_location=location,
                    bits_per_sample=bits,
                    zip_password=password,
                    payload_sha256=payload.sha256,
                ))
            if on_entry is not None:
                on_entry(name)

    manifest = CorpusManifest(entries, config.to_flat())
    manifest.save(layout.manifest)
    logger.info(
        "Generated %d files (%d stego) under %s",
        len(entries), sum(e.is_stego for e in entries), layout.original,
    )
    return manifest
