"""
Custom exception hierarchy for StegSift.

Provides user-friendly error messages and structured error handling
across parsing, embedding, detection, recovery and evaluation.
"""

from __future__ import annotations

from typing import Any


class StegSiftError(Exception):
    """
    Base exception for all StegSift errors.

    All custom exceptions inherit from this class, allowing
    for catch-all error handling at the CLI level.
    """

    def __init__(
        self,
        message: str,
        *,
        suggestion: str | None = None,
        details: dict[str, Any] | None = None,
    ) -> None:
        """
        Initialize the exception.

        Args:
            message: Human-readable error message
            suggestion: Optional suggestion for how to fix the error
            details: Optional dict with additional error context
        """
        super().__init__(message)
        self.message = message
        self.suggestion = suggestion
        self.details = details or {}

    def __str__(self) -> str:
        parts = [self.message]
        if self.suggestion:
            parts.append(f"\nSuggestion: {self.suggestion}")
        return "".join(parts)


class ContainerError(StegSiftError):
    """
    Errors raised while parsing or writing audio containers.

    Raised during:
    - RIFF/WAVE chunk walking
    - PCM decoding
    - MPEG frame indexing and ID3 tag parsing
    """
    pass


class MalformedContainerError(ContainerError):
    """Bytes do not form a well-formed WAV or MP3 container."""

    def __init__(self, kind: str, reason: str, offset: int | None = None) -> None:
        where = f" at offset {offset}" if offset is not None else ""
        super().__init__(
            f"Malformed {kind} container{where}: {reason}",
            suggestion="Check that the file is complete and really is the format its "
            "extension claims.",
            details={"kind": kind, "reason": reason, "offset": offset},
        )


class UnsupportedFormatError(ContainerError):
    """Container is well-formed but uses a variant we do not handle."""

    def __init__(self, kind: str, reason: str) -> None:
        super().__init__(
            f"Unsupported {kind} variant: {reason}",
            suggestion="Only integer PCM WAV (8/16/24-bit) and MPEG-1 Layer III "
            "with ID3v2.3/2.4 are supported.",
            details={"kind": kind, "reason": reason},
        )


class CodecError(StegSiftError):
    """
    Errors related to payload embedding and framing.

    Raised during:
    - LSB embedding (capacity checks)
    - MP3 container-region injection
    - Framed payload encoding/decoding
    """
    pass


class CapacityExceededError(CodecError):
    """Payload does not fit in the carrier region."""

    def __init__(self, needed_bits: int, available_bits: int) -> None:
        super().__init__(
            f"Payload needs {needed_bits} bits but only {available_bits} are available",
            suggestion="Use a longer carrier, 2 bits per sample, or a smaller payload.",
            details={"needed_bits": needed_bits, "available_bits": available_bits},
        )


class NoId3TagError(CodecError):
    """ID3 padding embedding requested on a stream without an ID3v2 tag."""

    def __init__(self) -> None:
        super().__init__(
            "Stream has no ID3v2 tag to hold the payload",
            suggestion="Use the trailing_append location instead.",
        )


class PayloadTypeMismatchError(CodecError):
    """Declared payload type disagrees with the payload's magic number."""

    def __init__(self, declared: str, reason: str) -> None:
        super().__init__(
            f"Payload declared as '{declared}' but {reason}",
            suggestion="Declare the type as 'unknown' or fix the payload bytes.",
            details={"declared": declared, "reason": reason},
        )


class BadMagicError(CodecError):
    """Framed payload does not start with the SGH1 magic."""

    def __init__(self, found: bytes) -> None:
        super().__init__(
            f"Bad frame magic: {found!r}",
            details={"found": found.hex()},
        )


class CrcMismatchError(CodecError):
    """Framed payload body does not match its CRC-32."""

    def __init__(self, expected: int, actual: int) -> None:
        super().__init__(
            f"CRC-32 mismatch: stored {expected:08x}, computed {actual:08x}",
            details={"expected": expected, "actual": actual},
        )


class TruncatedFrameError(CodecError):
    """Framed payload is shorter than its header declares."""

    def __init__(self, declared: int, available: int) -> None:
        super().__init__(
            f"Truncated frame: {declared} bytes declared, {available} available",
            details={"declared": declared, "available": available},
        )


class IntegrityError(StegSiftError):
    """
    Errors related to the hash database.

    Raised during:
    - Database build (I/O, duplicate names, concurrent writers)
    - Verification of working copies
    """
    pass


class IOFailureError(IntegrityError):
    """A file or directory could not be read or written."""

    def __init__(self, path: str, reason: str) -> None:
        super().__init__(
            f"I/O failure on {path}: {reason}",
            suggestion="Check that the path exists and you have the required permissions.",
            details={"path": path, "reason": reason},
        )


class DuplicateNameError(IntegrityError):
    """Two source files map to the same record name."""

    def __init__(self, name: str) -> None:
        super().__init__(
            f"Duplicate file name in source directory: {name}",
            suggestion="Rename one of the files; names must be unique regardless of case.",
            details={"name": name},
        )


class DatabaseBusyError(IntegrityError):
    """Another writer holds the hash database lock."""

    def __init__(self, path: str) -> None:
        super().__init__(
            f"Hash database is locked by another writer: {path}",
            suggestion="Wait for the other build to finish, or remove a stale .lock file.",
            details={"path": path},
        )


class DetectionError(StegSiftError):
    """
    Errors raised by detection stages.

    Raised during:
    - Statistical analysis (signal too short)
    - Spectrogram and quality comparisons (shape mismatch)
    """
    pass


class TooShortError(DetectionError):
    """Signal is shorter than one analysis window."""

    def __init__(self, samples: int, window: int) -> None:
        super().__init__(
            f"Signal has {samples} samples, fewer than one window of {window}",
            details={"samples": samples, "window": window},
        )


class ShapeMismatchError(DetectionError):
    """Suspect and reference inputs do not have comparable shapes."""

    def __init__(self, what: str, left: Any, right: Any) -> None:
        super().__init__(
            f"{what} mismatch: {left} vs {right}",
            suggestion="Use a reference with the same rate, channels, length and analysis window.",
            details={"what": what, "left": str(left), "right": str(right)},
        )


class RecoveryError(StegSiftError):
    """
    Errors raised while carving, extracting or decrypting payloads.
    """
    pass


class BoundaryNotFoundError(RecoveryError):
    """Carve could not locate the end of the embedded file."""

    def __init__(self, type_id: str, reason: str) -> None:
        super().__init__(
            f"No {type_id} end boundary found: {reason}",
            details={"type_id": type_id, "reason": reason},
        )


class UnsupportedEncryptionError(RecoveryError):
    """Archive uses an encryption scheme we cannot attack."""

    def __init__(self, scheme: str) -> None:
        super().__init__(
            f"Unsupported ZIP encryption: {scheme}",
            suggestion="Only traditional PKZIP (ZipCrypto) entries can be brute-forced.",
            details={"scheme": scheme},
        )


class NotEncryptedError(RecoveryError):
    """Archive has no encrypted entries."""

    def __init__(self) -> None:
        super().__init__("Archive contains no encrypted entries")


class ExhaustedError(RecoveryError):
    """No candidate password was confirmed within the budget."""

    def __init__(self, attempts: int) -> None:
        super().__init__(
            f"No password confirmed after {attempts} attempts",
            suggestion="Try a larger or more targeted wordlist.",
            details={"attempts": attempts},
        )


class CorpusError(StegSiftError):
    """Errors raised while synthesizing the evaluation corpus."""
    pass


class SizeTooSmallError(CorpusError):
    """Requested payload size is below the type's structural minimum."""

    def __init__(self, payload_type: str, requested: int, minimum: int) -> None:
        super().__init__(
            f"Cannot build a {payload_type} payload of {requested} bytes (minimum {minimum})",
            suggestion="Increase payload_rate or the minimum carrier duration.",
            details={"payload_type": payload_type, "requested": requested, "minimum": minimum},
        )


class EvaluationError(StegSiftError):
    """Errors raised while scoring detection runs."""
    pass


class ManifestReportMismatchError(EvaluationError):
    """Reports do not line up one-to-one with manifest entries."""

    def __init__(self, missing: list[str], duplicate: list[str]) -> None:
        parts = []
        if missing:
            parts.append(f"{len(missing)} manifest entries without a report")
        if duplicate:
            parts.append(f"{len(duplicate)} entries with more than one report")
        super().__init__(
            "Manifest and reports do not match: " + ", ".join(parts),
            suggestion="Scan the corpus directory the manifest was generated for.",
            details={"missing": missing, "duplicate": duplicate},
        )


class ConfigurationError(StegSiftError):
    """
    Errors related to configuration.

    Raised during:
    - Config file parsing
    - Threshold override parsing
    - Invalid settings
    """
    pass
