"""
Configuration management for StegSift.

Handles detection thresholds, analysis windows, folder conventions and
default paths for the hash database and wordlist.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

import yaml

from stegsift.exceptions import ConfigurationError

# Load .env file if present
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass


class Stage(str, Enum):
    """Detection pipeline stages."""

    HASH = "HASH"
    SAF = "SAF"
    SPECTRO = "SPECTRO"
    FSA = "FSA"
    FCA = "FCA"
    MAC = "MAC"

    @classmethod
    def parse(cls, text: str) -> Stage:
        try:
            return cls(text.strip().upper())
        except ValueError:
            valid = ", ".join(s.value.lower() for s in cls)
            raise ConfigurationError(
                f"Unknown stage: {text}",
                suggestion=f"Valid stages: {valid}",
            ) from None


@dataclass
class StageThresholds:
    """Score cut-offs for one stage."""

    positive: float = 0.5
    suspicious: float = 0.2

    def __post_init__(self) -> None:
        if not 0.0 <= self.suspicious <= self.positive:
            raise ConfigurationError(
                f"Thresholds must satisfy 0 <= suspicious ({self.suspicious}) "
                f"<= positive ({self.positive})"
            )


def _default_thresholds() -> dict[Stage, StageThresholds]:
    return {stage: StageThresholds() for stage in Stage}


@dataclass
class DetectionConfig:
    """
    Calibration constants for the detection pipeline.

    Attributes:
        saf_window: Samples per non-overlapping SAF window
        saf_min_samples: Shortest signal SAF will analyse as a single window
        saf_p_value: Chi-square p-value above which a window looks embedded
        saf_chi_weight: Weight of the chi-square window fraction in the SAF score
        entropy_floor: LSB entropy (bits) where the deviation score starts
        entropy_span: Entropy distance mapped to a full deviation score
        spectro_window: STFT window length (power of two)
        spectro_hop: STFT hop length
        lsb_depths: LSB plane depths reassembled for signature scanning
        snr_low_db: SNR at or below which FCA scores 1.0
        snr_high_db: SNR at or above which FCA scores 0.0
        mac_skew_seconds: Clock skew tolerated before a timestamp counts as future
        signature_file: Optional TSV extending the signature table
        thresholds: Per-stage positive/suspicious cut-offs
    """

    saf_window: int = 16384
    saf_min_samples: int = 256
    saf_p_value: float = 0.95
    saf_chi_weight: float = 0.7
    entropy_floor: float = 0.5
    entropy_span: float = 0.45
    spectro_window: int = 1024
    spectro_hop: int = 512
    lsb_depths: list[int] = field(default_factory=lambda: [1, 2])
    snr_low_db: float = 40.0
    snr_high_db: float = 90.0
    mac_skew_seconds: float = 2.0
    signature_file: Path | None = None
    thresholds: dict[Stage, StageThresholds] = field(default_factory=_default_thresholds)

    def __post_init__(self) -> None:
        if self.saf_window < self.saf_min_samples:
            raise ConfigurationError(f"saf_window must be >= {self.saf_min_samples}")
        if self.spectro_window & (self.spectro_window - 1):
            raise ConfigurationError("spectro_window must be a power of two")
        if self.spectro_hop <= 0:
            raise ConfigurationError("spectro_hop must be positive")
        if any(d not in (1, 2) for d in self.lsb_depths):
            raise ConfigurationError("lsb_depths may only contain 1 and 2")
        if self.snr_low_db >= self.snr_high_db:
            raise ConfigurationError("snr_low_db must be below snr_high_db")

    def threshold(self, stage: Stage) -> StageThresholds:
        return self.thresholds.get(stage, StageThresholds())

    def apply_override(self, text: str) -> None:
        """
        Apply a `<stage>=<value>` or `<stage>.suspicious=<value>` override.

        Raises:
            ConfigurationError: Malformed override or out-of-range value
        """
        if "=" not in text:
            raise ConfigurationError(
                f"Invalid threshold override: {text}",
                suggestion="Use <stage>=<value>, e.g. saf=0.6 or saf.suspicious=0.1",
            )
        key, _, raw_value = text.partition("=")
        stage_name, _, which = key.partition(".")
        stage = Stage.parse(stage_name)
        try:
            value = float(raw_value)
        except ValueError:
            raise ConfigurationError(f"Threshold value is not a number: {raw_value}") from None

        current = self.threshold(stage)
        if which in ("", "positive"):
            self.thresholds[stage] = StageThresholds(value, min(current.suspicious, value))
        elif which == "suspicious":
            self.thresholds[stage] = StageThresholds(current.positive, value)
        else:
            raise ConfigurationError(f"Unknown threshold kind: {which}")

    def thresholds_dict(self) -> dict[str, dict[str, float]]:
        return {
            stage.value: {"positive": t.positive, "suspicious": t.suspicious}
            for stage, t in sorted(self.thresholds.items(), key=lambda kv: kv[0].value)
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "saf_window": self.saf_window,
            "saf_min_samples": self.saf_min_samples,
            "saf_p_value": self.saf_p_value,
            "saf_chi_weight": self.saf_chi_weight,
            "entropy_floor": self.entropy_floor,
            "entropy_span": self.entropy_span,
            "spectro_window": self.spectro_window,
            "spectro_hop": self.spectro_hop,
            "lsb_depths": list(self.lsb_depths),
            "snr_low_db": self.snr_low_db,
            "snr_high_db": self.snr_high_db,
            "mac_skew_seconds": self.mac_skew_seconds,
            "signature_file": str(self.signature_file) if self.signature_file else None,
            "thresholds": self.thresholds_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> DetectionConfig:
        defaults = cls()
        thresholds = _default_thresholds()
        for name, values in (data.get("thresholds") or {}).items():
            thresholds[Stage.parse(name)] = StageThresholds(
                positive=float(values.get("positive", 0.5)),
                suspicious=float(values.get("suspicious", 0.2)),
            )
        signature_file = data.get("signature_file")
        return cls(
            saf_window=int(data.get("saf_window", defaults.saf_window)),
            saf_min_samples=int(data.get("saf_min_samples", defaults.saf_min_samples)),
            saf_p_value=float(data.get("saf_p_value", defaults.saf_p_value)),
            saf_chi_weight=float(data.get("saf_chi_weight", defaults.saf_chi_weight)),
            entropy_floor=float(data.get("entropy_floor", defaults.entropy_floor)),
            entropy_span=float(data.get("entropy_span", defaults.entropy_span)),
            spectro_window=int(data.get("spectro_window", defaults.spectro_window)),
            spectro_hop=int(data.get("spectro_hop", defaults.spectro_hop)),
            lsb_depths=[int(d) for d in data.get("lsb_depths", defaults.lsb_depths)],
            snr_low_db=float(data.get("snr_low_db", defaults.snr_low_db)),
            snr_high_db=float(data.get("snr_high_db", defaults.snr_high_db)),
            mac_skew_seconds=float(data.get("mac_skew_seconds", defaults.mac_skew_seconds)),
            signature_file=Path(signature_file) if signature_file else None,
            thresholds=thresholds,
        )


@dataclass
class FolderConfig:
    """Evidence folder names used under an output directory."""

    original: str = "original"
    working_copy: str = "original_copy"
    extracted: str = "extracted"
    reports: str = "reports"


@dataclass
class StegSiftConfig:
    """
    Main configuration for StegSift.

    Attributes:
        detection: Pipeline calibration constants and thresholds
        folders: Folder-name conventions
        db_path: Default hash database (env STEGSIFT_DB)
        wordlist_path: Default brute-force wordlist (env STEGSIFT_WORDLIST)
        jobs: Worker threads for scanning
    """

    detection: DetectionConfig = field(default_factory=DetectionConfig)
    folders: FolderConfig = field(default_factory=FolderConfig)
    db_path: Path | None = None
    wordlist_path: Path | None = None
    jobs: int = 1

    def __post_init__(self) -> None:
        """Fill default paths from the environment when not provided."""
        if self.db_path is None and os.environ.get("STEGSIFT_DB"):
            self.db_path = Path(os.environ["STEGSIFT_DB"])
        if self.wordlist_path is None and os.environ.get("STEGSIFT_WORDLIST"):
            self.wordlist_path = Path(os.environ["STEGSIFT_WORDLIST"])

    @classmethod
    def from_yaml(cls, path: Path | str) -> StegSiftConfig:
        """Load configuration from a YAML file."""
        path = Path(path)
        if not path.exists():
            return cls()

        try:
            with open(path) as f:
                data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Invalid YAML in {path}: {e}") from e

        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> StegSiftConfig:
        """Create configuration from a dictionary."""
        folders_data = data.get("folders", {})
        folders = FolderConfig(**{k: str(v) for k, v in folders_data.items()})

        db_path = data.get("db_path")
        wordlist_path = data.get("wordlist_path")

        return cls(
            detection=DetectionConfig.from_dict(data.get("detection", {})),
            folders=folders,
            db_path=Path(db_path) if db_path else None,
            wordlist_path=Path(wordlist_path) if wordlist_path else None,
            jobs=int(data.get("jobs", 1)),
        )

    def to_dict(self) -> dict[str, Any]:
        """Convert configuration to dictionary."""
        return {
            "detection": self.detection.to_dict(),
            "folders": {
                "original": self.folders.original,
                "working_copy": self.folders.working_copy,
                "extracted": self.folders.extracted,
                "reports": self.folders.reports,
            },
            "db_path": str(self.db_path) if self.db_path else None,
            "wordlist_path": str(self.wordlist_path) if self.wordlist_path else None,
            "jobs": self.jobs,
        }

    def to_yaml(self) -> str:
        """Export configuration to YAML string."""
        return yaml.dump(self.to_dict(), default_flow_style=False, sort_keys=False)

    @classmethod
    def default_config_path(cls) -> Path:
        """Get the default configuration file path."""
        # Check for config in current directory first
        local_config = Path.cwd() / "stegsift.yaml"
        if local_config.exists():
            return local_config

        # Then check home directory
        return Path.home() / ".stegsift" / "config.yaml"

    @classmethod
    def load_default(cls) -> StegSiftConfig:
        """Load configuration from default location."""
        return cls.from_yaml(cls.default_config_path())
