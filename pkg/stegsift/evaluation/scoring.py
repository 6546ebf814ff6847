"""
Scoring of detection reports against corpus ground truth.

Evaluation is a pure fold over (manifest, reports, extraction log): the
summary does not depend on report order.
"""

from __future__ import annotations

import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Iterable, Mapping, Sequence

from stegsift.core.manifest import CorpusManifest, ManifestEntry
from stegsift.detection.report import DetectionReport
from stegsift.exceptions import ManifestReportMismatchError


logger = logging.getLogger(__name__)

FORMATS = ("wav", "mp3")
TREND_SPLIT_SECONDS = 200.0
DEFAULT_BUCKET_WIDTH = 50.0


@dataclass
class FormatCounts:
    """Confusion counts for one container format."""

    true_positives: int = 0
    false_positives: int = 0
    false_negatives: int = 0
    true_negatives: int = 0
    detected_count: int = 0
    extracted_exact_count: int = 0

    @property
    def stego_count(self) -> int:
        return self.true_positives + self.false_negatives

    @property
    def clean_count(self) -> int:
        return self.false_positives + self.true_negatives

    @property
    def total(self) -> int:
        return self.stego_count + self.clean_count

    @property
    def detection_rate(self) -> float | None:
        return self.true_positives / self.stego_count if self.stego_count else None

    @property
    def false_positive_rate(self) -> float | None:
        return self.false_positives / self.clean_count if self.clean_count else None

    def to_dict(self) -> dict[str, Any]:
        return {
            "true_positives": self.true_positives,
            "false_positives": self.false_positives,
            "false_negatives": self.false_negatives,
            "true_negatives": self.true_negatives,
            "detected_count": self.detected_count,
            "extracted_exact_count": self.extracted_exact_count,
        }


@dataclass(frozen=True)
class DurationRow:
    """Stego detections at one carrier duration."""

    format: str
    duration_s: float
    detected: int
    total: int
    extracted_exact: int


@dataclass(frozen=True)
class BucketRow:
    """False negatives within one duration bucket."""

    format: str
    bucket_start: float
    bucket_end: float
    detected_count: int
    fn_count: int

    @property
    def stego_count(self) -> int:
        return self.detected_count + self.fn_count

    @property
    def fn_rate(self) -> float | None:
        """FN / (TP + FN), or None when the bucket holds no stego files."""
        return self.fn_count / self.stego_count if self.stego_count else None

    def to_dict(self) -> dict[str, Any]:
        return {
            "format": self.format,
            "bucket_start": self.bucket_start,
            "bucket_end": self.bucket_end,
            "detected_count": self.detected_count,
            "fn_count": self.fn_count,
            "fn_rate": self.fn_rate,
        }


@dataclass(frozen=True)
class TrendCheck:
    """
    Detection rate on short versus long carriers for one format.

    The check holds when short carriers are detected at least as often as
    long ones. It passes vacuously when one side has no stego files or
    both sides are fully detected.
    """

    format: str
    split_s: float
    short_detected: int
    short_total: int
    long_detected: int
    long_total: int

    @property
    def short_rate(self) -> float | None:
        return self.short_detected / self.short_total if self.short_total else None

    @property
    def long_rate(self) -> float | None:
        return self.long_detected / self.long_total if self.long_total else None

    @property
    def vacuous(self) -> bool:
        if self.short_rate is None or self.long_rate is None:
            return True
        return self.short_rate == 1.0 and self.long_rate == 1.0

    @property
    def holds(self) -> bool:
        if self.short_rate is None or self.long_rate is None:
            return True
        return self.short_rate >= self.long_rate

    @property
    def note(self) -> str:
        split = f"{self.split_s:g} s"
        if self.short_rate is None or self.long_rate is None:
            side = "below" if self.short_rate is None else "at or above"
            return f"{self.format}: no stego files {side} {split}; trend passes vacuously"
        if self.vacuous:
            return (
                f"{self.format}: every stego file detected on both sides of {split}; "
                "trend passes vacuously"
            )
        relation = ">=" if self.holds else "<"
        return (
            f"{self.format}: detection below {split} {self.short_rate:.1%} {relation} "
            f"{self.long_rate:.1%} at or above"
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "format": self.format,
            "split_s": self.split_s,
            "short_detected": self.short_detected,
            "short_total": self.short_total,
            "short_rate": self.short_rate,
            "long_detected": self.long_detected,
            "long_total": self.long_total,
            "long_rate": self.long_rate,
            "holds": self.holds,
            "vacuous": self.vacuous,
            "note": self.note,
        }


@dataclass
class EvalSummary:
    per_format: dict[str, FormatCounts] = field(
        default_factory=lambda: {fmt: FormatCounts() for fmt in FORMATS}
    )
    per_duration: list[DurationRow] = field(default_factory=list)
    per_duration_bucket: list[BucketRow] = field(default_factory=list)
    run_metadata: dict[str, Any] = field(default_factory=dict)

    def durations(self, fmt: str) -> list[DurationRow]:
        return [r for r in self.per_duration if r.format == fmt]

    def buckets(self, fmt: str) -> list[BucketRow]:
        return [b for b in self.per_duration_bucket if b.format == fmt]

    def trend(self, fmt: str = "mp3", split_s: float = TREND_SPLIT_SECONDS) -> TrendCheck:
        """Compare detection below and at or above `split_s` seconds."""
        short = [r for r in self.durations(fmt) if r.duration_s < split_s]
        long = [r for r in self.durations(fmt) if r.duration_s >= split_s]
        return TrendCheck(
            fmt,
            split_s,
            sum(r.detected for r in short),
            sum(r.total for r in short),
            sum(r.detected for r in long),
            sum(r.total for r in long),
        )

    @property
    def run_name(self) -> str:
        return f"eval-{self.run_metadata.get('config_hash', 'adhoc')}"

    def to_dict(self) -> dict[str, Any]:
        return {
            "run_metadata": dict(self.run_metadata),
            "per_format": {fmt: c.to_dict() for fmt, c in self.per_format.items()},
            "per_duration": [
                {
                    "format": r.format,
                    "duration_s": r.duration_s,
                    "detected": r.detected,
                    "total": r.total,
                    "extracted_exact": r.extracted_exact,
                }
                for r in self.per_duration
            ],
            "per_duration_bucket": [b.to_dict() for b in self.per_duration_bucket],
            "trend": {fmt: self.trend(fmt).to_dict() for fmt in FORMATS},
        }


def _artifact_digests(artifacts: Iterable[Mapping[str, str] | Any]) -> dict[str, set[str]]:
    """source file name -> sha256 digests of its extracted artifacts."""
    digests: dict[str, set[str]] = defaultdict(set)
    for artifact in artifacts:
        if isinstance(artifact, Mapping):
            source, sha = artifact.get("source", ""), artifact.get("sha256", "")
        else:
            source, sha = artifact.source_file, artifact.sha256
        if source and sha:
            digests[source].add(sha)
    return digests


def _match_reports(
    manifest: CorpusManifest, reports: Sequence[DetectionReport]
) -> dict[str, DetectionReport]:
    counts = Counter(r.file for r in reports)
    names = {e.filename for e in manifest}
    missing = sorted(n for n in names if counts[n] == 0)
    duplicate = sorted(n for n in names if counts[n] > 1)
    if missing or duplicate:
        raise ManifestReportMismatchError(missing, duplicate)
    extra = sorted(set(counts) - names)
    if extra:
        logger.debug("Ignoring %d reports for files outside the manifest", len(extra))
    return {r.file: r for r in reports if r.file in names}


def _bucket_start(duration: float, width: float) -> float:
    return math.floor(duration / width) * width


def evaluate(
    manifest: CorpusManifest,
    reports: Sequence[DetectionReport],
    artifacts: Iterable[Mapping[str, str] | Any] = (),
    *,
    bucket_width: float = DEFAULT_BUCKET_WIDTH,
    thresholds: dict[str, Any] | None = None,
    timestamp: str | None = None,
) -> EvalSummary:
    """
    Score reports against the manifest.

    Args:
        manifest: Corpus ground truth
        reports: Exactly one report per manifest entry, matched by file name
        artifacts: Extraction log rows (or ExtractedArtifact objects)
        bucket_width: Width of the false-negative duration buckets in seconds
        thresholds: Threshold set recorded in the run metadata
        timestamp: Run time recorded in the metadata (defaults to now, UTC)

    Raises:
        ManifestReportMismatchError: A manifest entry has no report or several
    """
    if bucket_width <= 0:
        raise ValueError("bucket_width must be positive")
    by_name = _match_reports(manifest, reports)
    digests = _artifact_digests(artifacts)

    summary = EvalSummary()
    duration_rows: dict[tuple[str, float], list[int]] = defaultdict(lambda: [0, 0, 0])
    bucket_rows: dict[tuple[str, float], list[int]] = defaultdict(lambda: [0, 0])

    entry: ManifestEntry
    for entry in sorted(manifest, key=lambda e: e.filename):
        counts = summary.per_format.setdefault(entry.format, FormatCounts())
        flagged = by_name[entry.filename].is_positive
        if flagged:
            counts.detected_count += 1

        row = duration_rows[(entry.format, entry.duration_s)]
        bucket = bucket_rows[(entry.format, _bucket_start(entry.duration_s, bucket_width))]
        if not entry.is_stego:
            if flagged:
                counts.false_positives += 1
            else:
                counts.true_negatives += 1
            continue

        row[1] += 1
        if flagged:
            counts.true_positives += 1
            row[0] += 1
            bucket[0] += 1
            if entry.payload_sha256 in digests.get(entry.filename, set()):
                counts.extracted_exact_count += 1
                row[2] += 1
        else:
            counts.false_negatives += 1
            bucket[1] += 1

    summary.per_duration = [
        DurationRow(fmt, duration, values[0], values[1], values[2])
        for (fmt, duration), values in sorted(duration_rows.items())
    ]
    summary.per_duration_bucket = [
        BucketRow(fmt, start, start + bucket_width, values[0], values[1])
        for (fmt, start), values in sorted(bucket_rows.items())
    ]
    summary.run_metadata = {
        "config_hash": CorpusManifest.hash_config(manifest.config),
        "manifest_sha256": manifest.manifest_sha256,
        "thresholds": thresholds or {},
        "bucket_width": bucket_width,
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    return summary
