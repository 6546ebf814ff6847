"""
Artifact extraction from scanned files.

Works from a DetectionReport and the working copy it was produced from.
Every signature hit that is not nested inside something already carved
becomes one artifact under `<out_dir>/extracted/`; SGH1 frames are
deframed and CRC-checked, and encrypted ZIPs are optionally brute-forced.
"""

from __future__ import annotations

import csv
import hashlib
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from stegsift.core.config import DetectionConfig
from stegsift.detection.pipeline import ParsedCarrier, load_carrier
from stegsift.detection.report import DetectionReport
from stegsift.detection.signatures import SignatureHit, SourcePlane
from stegsift.exceptions import (
    CrcMismatchError,
    IOFailureError,
    RecoveryError,
    TruncatedFrameError,
)
from stegsift.recovery.carving import MIN_SIZES, carve, extension_for, identify_type
from stegsift.recovery.zipcrack import Wordlist, is_encrypted_zip, zip_brute_force
from stegsift.stego.payload import FramedPayload


logger = logging.getLogger(__name__)

EXTRACTION_LOG_COLUMNS = [
    "source",
    "plane",
    "offset",
    "type",
    "length",
    "sha256",
    "decrypted",
    "password_present",
    "note",
]


@dataclass
class ExtractedArtifact:
    """One carved artifact and its provenance."""

    source_file: str
    plane: SourcePlane
    carve_offset: int
    type_id: str
    length: int
    output_path: Path
    sha256: str
    decrypted: bool = False
    password: str | None = None
    bits_per_sample: int | None = None
    truncated: bool = False
    notes: list[str] = field(default_factory=list)
    decrypted_paths: list[Path] = field(default_factory=list)

    def log_row(self) -> dict[str, str]:
        return {
            "source": self.source_file,
            "plane": self.plane.value,
            "offset": str(self.carve_offset),
            "type": self.type_id,
            "length": str(self.length),
            "sha256": self.sha256,
            "decrypted": str(self.decrypted).lower(),
            "password_present": str(self.password is not None).lower(),
            "note": "; ".join(self.notes),
        }

    def to_dict(self) -> dict[str, Any]:
        data = self.log_row()
        data["output_path"] = str(self.output_path)
        data["bits_per_sample"] = self.bits_per_sample
        return data


def _plane_key(hit: SignatureHit) -> tuple[SourcePlane, int | None]:
    return hit.source_plane, hit.bits_per_sample


def _inside_structured_plane(hit: SignatureHit, spans: dict[str, list[int]]) -> bool:
    if hit.source_plane is not SourcePlane.RAW_BYTES:
        return False
    return any(start <= hit.offset < start + length for start, length in spans.values())


def _artifact_name(stem: str, hit: SignatureHit, type_id: str) -> str:
    suffix = "_b2" if hit.bits_per_sample == 2 else ""
    return f"{stem}_{hit.source_plane.value}_{hit.offset}{suffix}.{extension_for(type_id)}"


def safe_member_name(name: str) -> str:
    parts = [p for p in Path(name).parts if p not in ("", ".", "..", "/", "\\")]
    return "_".join(parts) or "member"


def _write(path: Path, data: bytes) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
    except OSError as e:
        raise IOFailureError(str(path), e.strerror or str(e)) from e


def _carve_hit(
    hit: SignatureHit, stream: bytes, notes: list[str]
) -> tuple[bytes, int, str, bool]:
    """Return (artifact bytes, covered end offset, type id, truncated)."""
    if hit.type_id != "framed":
        carving = carve(hit, stream)
        if carving.truncated:
            notes.append("no end boundary found; carved to end of stream")
        return carving.data, carving.end, hit.type_id, carving.truncated

    try:
        frame = FramedPayload.decode(stream[hit.offset:])
        notes.append("framed payload, CRC-32 verified")
        return frame.body, hit.offset + frame.total_length, frame.declared_type.value, False
    except CrcMismatchError as e:
        notes.append(f"framed payload CRC mismatch ({e.message})")
        carving = carve(hit, stream)
        body = carving.data[13:-4] if carving.length >= 17 else carving.data
        type_id = identify_type(body)
        return body, carving.end, type_id, carving.truncated
    except TruncatedFrameError as e:
        notes.append(f"truncated frame ({e.message})")
        carving = carve(hit, stream)
        return carving.data[13:], carving.end, identify_type(carving.data[13:]), True


def _decrypt_artifact(
    artifact: ExtractedArtifact,
    data: bytes,
    wordlist: Wordlist | None,
    budget: int | None,
) -> None:
    if not is_encrypted_zip(data):
        return
    if wordlist is None:
        artifact.notes.append("encrypted archive not decrypted (no wordlist supplied)")
        return
    try:
        result = zip_brute_force(data, wordlist, budget)
    except RecoveryError as e:
        artifact.notes.append(f"decryption failed: {e.message}")
        return

    target_dir = artifact.output_path.with_name(artifact.output_path.stem + "_decrypted")
    for name, content in sorted(result.members.items()):
        member_path = target_dir / safe_member_name(name)
        _write(member_path, content)
        artifact.decrypted_paths.append(member_path)
    artifact.decrypted = True
    artifact.password = result.password
    artifact.notes.append(f"password recovered after {result.attempts} attempts")


def extract_all(
    report: DetectionReport,
    carrier_file: Path | str,
    out_dir: Path | str,
    *,
    wordlist: Wordlist | None = None,
    budget: int | None = None,
    config: DetectionConfig | None = None,
    extracted_folder: str = "extracted",
) -> list[ExtractedArtifact]:
    """
    Carve every distinct hit in a report into `<out_dir>/<extracted_folder>/`.

    The carrier is only read. Hits nested inside a span already carved on
    the same plane, and raw-byte hits lying inside the ID3 padding or
    trailing planes, are skipped. Brute force runs only when a wordlist
    is supplied.

    Raises:
        IOFailureError: carrier unreadable or artifact not writable
    """
    config = config or DetectionConfig()
    carrier_path = Path(carrier_file)
    try:
        data = carrier_path.read_bytes()
    except OSError as e:
        raise IOFailureError(str(carrier_path), e.strerror or str(e)) from e

    depths = set(config.lsb_depths)
    depths.update(h.bits_per_sample for h in report.signature_hits if h.bits_per_sample)
    carrier: ParsedCarrier = load_carrier(data, sorted(depths))
    extracted_dir = Path(out_dir) / extracted_folder
    stem = carrier_path.stem

    covered: dict[tuple[SourcePlane, int | None], list[tuple[int, int]]] = {}
    artifacts: list[ExtractedArtifact] = []

    for hit in sorted(report.signature_hits, key=lambda h: h.sort_key):
        if _inside_structured_plane(hit, report.plane_spans):
            continue
        spans = covered.setdefault(_plane_key(hit), [])
        if any(start <= hit.offset < end for start, end in spans):
            continue
        scan_stream = carrier.stream_for(hit.source_plane, hit.bits_per_sample)
        if scan_stream is None:
            logger.warning(
                "%s: no %s stream for hit at %d", stem, hit.source_plane.value, hit.offset
            )
            continue

        notes: list[str] = []
        content, end, type_id, truncated = _carve_hit(hit, scan_stream.data, notes)
        spans.append((hit.offset, end))
        if type_id in ("zip", "unknown", "txt"):
            detected = identify_type(content)
            if detected == "docx":
                type_id = detected
        minimum = MIN_SIZES.get(type_id, 1)
        if len(content) < minimum:
            logger.debug("%s: %s at %d below minimum size, skipped", stem, type_id, hit.offset)
            continue

        output_path = extracted_dir / _artifact_name(stem, hit, type_id)
        _write(output_path, content)
        artifact = ExtractedArtifact(
            source_file=carrier_path.name,
            plane=hit.source_plane,
            carve_offset=hit.offset,
            type_id=type_id,
            length=len(content),
            output_path=output_path,
            sha256=hashlib.sha256(content).hexdigest(),
            bits_per_sample=hit.bits_per_sample,
            truncated=truncated,
            notes=notes,
        )
        if type_id == "zip":
            _decrypt_artifact(artifact, content, wordlist, budget)
        artifacts.append(artifact)

    if artifacts:
        logger.info("%s: extracted %d artifact(s)", carrier_path.name, len(artifacts))
    return artifacts


def write_extraction_log(artifacts: list[ExtractedArtifact], path: Path | str) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=EXTRACTION_LOG_COLUMNS, lineterminator="\n")
            writer.writeheader()
            for artifact in artifacts:
                writer.writerow(artifact.log_row())
    except OSError as e:
        raise IOFailureError(str(path), e.strerror or str(e)) from e


def read_extraction_log(path: Path | str) -> list[dict[str, str]]:
    path = Path(path)
    if not path.exists():
        return []
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))

