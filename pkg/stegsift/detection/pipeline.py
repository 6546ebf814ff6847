"""
Staged detection pipeline.

Orchestrates: HASH → SAF → SPECTRO → FSA → FCA → MAC

SPECTRO only runs when SAF comes back clean. FSA always runs because
extraction depends on its hits. Stages whose inputs are missing are
recorded as not_run, never raised.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from stegsift.container.base import AudioFormat, PcmAudio, sniff_format
from stegsift.container.mp3 import Mp3Stream, parse_mp3
from stegsift.container.wav import decode_pcm, parse_wav
from stegsift.core.config import DetectionConfig, Stage
from stegsift.detection.quality import fca_quality
from stegsift.detection.report import DetectionReport, StageResult, Verdict
from stegsift.detection.signatures import (
    ScanStream,
    SignatureHit,
    SignatureTable,
    SourcePlane,
    fsa_scan,
)
from stegsift.detection.spectrogram import compute_spectrogram, spectro_anomaly
from stegsift.detection.statistics import saf_statistics
from stegsift.detection.timestamps import FileTimes, mac_anomaly_check
from stegsift.exceptions import (
    IOFailureError,
    MalformedContainerError,
    ShapeMismatchError,
    StegSiftError,
)
from stegsift.integrity.hashdb import FindingStatus, HashDb, check_file
from stegsift.stego.lsb import lsb_plane


logger = logging.getLogger(__name__)

SIGNATURELESS_NOTE = (
    "embedding-like LSB statistics without any file signature: "
    "possibly an encrypted or headerless payload (entropy-based lead)"
)
UNIFORM_LSB_NOTE = (
    "every SAF window looks embedded, including the end of the file: "
    "unquantised recordings with noisy low bits look the same, "
    "so confirm against a hash database or reference before relying on SAF"
)


@dataclass
class ParsedCarrier:
    """A parsed input file plus the byte streams FSA scans."""

    format: AudioFormat
    raw: bytes
    audio: PcmAudio | None = None
    mp3: Mp3Stream | None = None
    streams: list[ScanStream] = field(default_factory=list)

    def stream_for(
        self, plane: SourcePlane, bits_per_sample: int | None = None
    ) -> ScanStream | None:
        for stream in self.streams:
            if stream.plane is plane and stream.bits_per_sample == bits_per_sample:
                return stream
        return None

    def plane_spans(self) -> dict[str, list[int]]:
        """Absolute file spans of the contiguous planes."""
        return {
            s.plane.value: [s.base_offset, len(s.data)]
            for s in self.streams
            if s.plane in (SourcePlane.ID3_PADDING, SourcePlane.TRAILING)
        }


def load_carrier(data: bytes, lsb_depths: list[int] | tuple[int, ...] = (1, 2)) -> ParsedCarrier:
    """
    Parse a WAV or MP3 image and build its scan streams.

    WAV: raw bytes plus one reassembled LSB plane per depth.
    MP3: raw bytes, ID3v2 padding and trailing bytes.

    Raises:
        MalformedContainerError: not a recognised or well-formed container
    """
    fmt = sniff_format(data)
    if fmt is None:
        raise MalformedContainerError("audio", "neither a RIFF/WAVE nor an MP3 stream")

    carrier = ParsedCarrier(format=fmt, raw=data)
    carrier.streams.append(ScanStream(SourcePlane.RAW_BYTES, data))

    if fmt is AudioFormat.WAV:
        carrier.audio = decode_pcm(parse_wav(data))
        for depth in sorted(set(lsb_depths)):
            carrier.streams.append(
                ScanStream(
                    SourcePlane.LSB_PLANE, lsb_plane(carrier.audio, depth), bits_per_sample=depth
                )
            )
        return carrier

    stream = parse_mp3(data)
    carrier.mp3 = stream
    if stream.id3v2 is not None:
        padding = stream.id3v2.padding_span
        carrier.streams.append(
            ScanStream(SourcePlane.ID3_PADDING, stream.padding_bytes(), base_offset=padding.offset)
        )
    carrier.streams.append(
        ScanStream(
            SourcePlane.TRAILING, stream.trailing_bytes(), base_offset=stream.trailing_span.offset
        )
    )
    return carrier


def _is_self_signature(hit: SignatureHit, fmt: AudioFormat) -> bool:
    return (
        fmt is AudioFormat.WAV
        and hit.source_plane is SourcePlane.RAW_BYTES
        and hit.offset == 0
        and hit.type_id == "riff_wav"
    )


def _hash_stage(path: Path, db: HashDb, config: DetectionConfig) -> tuple[StageResult, bool]:
    finding = check_file(db, path)
    if finding.status is FindingStatus.UNKNOWN:
        return StageResult.not_run(Stage.HASH, "file not present in hash database"), False
    mismatch = finding.status is FindingStatus.MISMATCH
    detail = {
        "status": finding.status.value,
        "expected": finding.expected,
        "actual": finding.actual,
    }
    score = 1.0 if mismatch else 0.0
    return StageResult.scored(Stage.HASH, score, config.threshold(Stage.HASH), detail), mismatch


def _saf_stage(carrier: ParsedCarrier, config: DetectionConfig) -> StageResult:
    if carrier.audio is None:
        return StageResult.not_run(Stage.SAF, "PCM statistics are undefined for MP3")
    n = carrier.audio.samples.size
    if n < config.saf_min_samples:
        return StageResult.not_run(Stage.SAF, f"only {n} samples")
    return saf_statistics(carrier.audio, min(config.saf_window, n), config)


def _plane_uniform_throughout(saf: StageResult) -> bool:
    """Sequential embedding leaves the tail untouched unless the plane is full."""
    if saf.verdict is not Verdict.POSITIVE:
        return False
    return saf.detail.get("windows", 0) >= 2 and saf.detail.get("embedded_fraction") == 1.0


def _load_reference_audio(path: Path) -> PcmAudio:
    return decode_pcm(parse_wav(path.read_bytes()))


def _spectro_stage(
    carrier: ParsedCarrier,
    saf: StageResult,
    reference: PcmAudio | None,
    config: DetectionConfig,
    notes: list[str],
) -> StageResult:
    if carrier.audio is None:
        return StageResult.not_run(Stage.SPECTRO, "no PCM audio")
    if saf.verdict is not Verdict.CLEAN:
        return StageResult.not_run(Stage.SPECTRO, f"SAF verdict {saf.verdict.value}")
    if carrier.audio.num_frames < config.spectro_window:
        return StageResult.not_run(Stage.SPECTRO, "signal shorter than one STFT window")

    sgram = compute_spectrogram(
        carrier.audio, config.spectro_window, config.spectro_hop, dtype=np.float32
    )
    baseline = None
    if reference is not None:
        if reference.same_shape(carrier.audio):
            baseline = compute_spectrogram(
                reference, config.spectro_window, config.spectro_hop, dtype=np.float32
            )
        else:
            notes.append("reference audio shape differs; spectrogram scored without baseline")
    try:
        return spectro_anomaly(sgram, baseline, config)
    except ShapeMismatchError as e:
        notes.append(f"spectrogram baseline ignored: {e.message}")
        return spectro_anomaly(sgram, None, config)


def _fca_stage(
    carrier: ParsedCarrier, reference: PcmAudio | None, config: DetectionConfig
) -> StageResult:
    if reference is None:
        return StageResult.not_run(Stage.FCA, "no reference audio")
    if carrier.audio is None:
        return StageResult.not_run(Stage.FCA, "no PCM audio")
    try:
        return fca_quality(carrier.audio, reference, config)
    except ShapeMismatchError as e:
        return StageResult.not_run(Stage.FCA, e.message)


def run_pipeline(
    file: Path | str,
    reference_db: HashDb | None = None,
    reference_audio: Path | str | None = None,
    *,
    config: DetectionConfig | None = None,
    signatures: SignatureTable | None = None,
    times: FileTimes | None = None,
    now: float | None = None,
) -> DetectionReport:
    """
    Run every applicable stage on one file and build its report.

    Args:
        file: WAV or MP3 file to examine
        reference_db: Hash database holding the original digests
        reference_audio: Clean WAV to compare against (FCA and spectrogram baseline)
        config: Calibration constants and thresholds
        signatures: Signature table (built-ins plus config.signature_file by default)
        times: MAC timestamps to check instead of the file's own
        now: Scan time for the future-timestamp rule

    Raises:
        MalformedContainerError: the file is not a parseable WAV or MP3
        IOFailureError: the file cannot be read
    """
    config = config or DetectionConfig()
    signatures = signatures or SignatureTable.with_file(config.signature_file)
    path = Path(file)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise IOFailureError(str(path), e.strerror or str(e)) from e

    carrier = load_carrier(data, config.lsb_depths)
    report = DetectionReport(
        file=path.name,
        format=carrier.format.value,
        plane_spans=carrier.plane_spans(),
        thresholds=config.thresholds_dict(),
    )
    if carrier.mp3 is not None:
        report.notes.extend(carrier.mp3.anomalies)

    if reference_db is not None:
        hash_result, report.hash_mismatch = _hash_stage(path, reference_db, config)
        report.stages.append(hash_result)

    reference: PcmAudio | None = None
    if reference_audio is not None and carrier.audio is not None:
        try:
            reference = _load_reference_audio(Path(reference_audio))
        except (OSError, StegSiftError) as e:
            report.notes.append(f"reference audio unusable: {e}")

    saf = _saf_stage(carrier, config)
    report.stages.append(saf)
    report.stages.append(_spectro_stage(carrier, saf, reference, config, report.notes))

    hits = [
        h for h in fsa_scan(carrier.streams, signatures)
        if not _is_self_signature(h, carrier.format)
    ]
    report.signature_hits = hits
    report.stages.append(StageResult.scored(
        Stage.FSA,
        1.0 if hits else 0.0,
        config.threshold(Stage.FSA),
        {
            "hit_count": len(hits),
            "types": sorted({h.type_id for h in hits}),
            "planes": sorted({h.source_plane.value for h in hits}),
            "result": "match" if hits else "no match",
        },
    ))

    report.stages.append(_fca_stage(carrier, reference, config))

    if times is None:
        try:
            times = FileTimes.from_path(path)
        except OSError:
            times = FileTimes(None, None, None)
    mac = mac_anomaly_check(times, now=time.time() if now is None else now, config=config)
    report.mac_anomaly = mac.verdict in (Verdict.SUSPICIOUS, Verdict.POSITIVE)
    report.stages.append(mac)

    if saf.verdict in (Verdict.SUSPICIOUS, Verdict.POSITIVE) and not hits:
        report.notes.append(SIGNATURELESS_NOTE)
    if _plane_uniform_throughout(saf):
        report.notes.append(UNIFORM_LSB_NOTE)

    report.finalize()
    logger.debug(
        "%s: %s (confidence %.3f, %d hits)",
        report.file, report.final_verdict.value, report.confidence, len(hits),
    )
    return report
