"""
Corpus generator configuration.

Loaded from CLI flags or a flat `key=value` text file:

    total_files=32
    min_duration=10
    max_duration=160
    payload_mix=txt:0.2,txt_encrypted:0.1,docx:0.2,png:0.2,zip:0.15,zip_encrypted:0.15
"""

from __future__ import annotations

from enum import Enum
from pathlib import Path
from typing import Any

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from stegsift.exceptions import ConfigurationError
from stegsift.stego.payload import EmbedMode


class DurationSchedule(str, Enum):
    LINEAR = "linear"
    GEOMETRIC = "geometric"


class CorpusPreset(str, Enum):
    DESK = "desk"
    TREND = "trend"
    PAPER = "paper"


class PayloadKind(str, Enum):
    """Payload families the generator can produce."""

    TXT = "txt"
    TXT_ENCRYPTED = "txt_encrypted"
    DOCX = "docx"
    PNG = "png"
    ZIP = "zip"
    ZIP_ENCRYPTED = "zip_encrypted"


DEFAULT_PAYLOAD_MIX: dict[str, float] = {
    PayloadKind.TXT.value: 0.2,
    PayloadKind.TXT_ENCRYPTED.value: 0.1,
    PayloadKind.DOCX.value: 0.2,
    PayloadKind.PNG.value: 0.2,
    PayloadKind.ZIP.value: 0.15,
    PayloadKind.ZIP_ENCRYPTED.value: 0.15,
}

DEFAULT_SEED = 20240601


class CorpusConfig(BaseModel):
    """
    Everything that determines a generated corpus.

    Two corpora built from equal configurations are byte-identical.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    total_files: int = Field(32, ge=2)
    min_duration: float = Field(10.0, gt=0)
    max_duration: float = Field(160.0, gt=0)
    duration_schedule: DurationSchedule = DurationSchedule.LINEAR
    payload_rate: float = Field(100.0, gt=0)
    payload_mix: dict[str, float] = Field(default_factory=lambda: dict(DEFAULT_PAYLOAD_MIX))
    clean_fraction: float = Field(0.25, ge=0.0, lt=1.0)
    seed: int = Field(DEFAULT_SEED, ge=0, lt=2**64)
    sample_rate: int = Field(44100, gt=0)
    bit_depth: int = 16
    carrier_resolution_bits: int = Field(12, ge=4, le=24)
    embed_mode: EmbedMode = EmbedMode.FRAMED
    bits_per_sample: int = 1
    write_references: bool = False

    @field_validator("total_files")
    @classmethod
    def _even_split(cls, value: int) -> int:
        if value % 2:
            raise ValueError("total_files must be even (equal WAV/MP3 split)")
        return value

    @field_validator("bit_depth")
    @classmethod
    def _supported_depth(cls, value: int) -> int:
        if value not in (8, 16, 24):
            raise ValueError("bit_depth must be 8, 16 or 24")
        return value

    @field_validator("bits_per_sample")
    @classmethod
    def _supported_density(cls, value: int) -> int:
        if value not in (1, 2):
            raise ValueError("bits_per_sample must be 1 or 2")
        return value

    @field_validator("payload_mix")
    @classmethod
    def _valid_mix(cls, value: dict[str, float]) -> dict[str, float]:
        kinds = {k.value for k in PayloadKind}
        unknown = sorted(set(value) - kinds)
        if unknown:
            raise ValueError(f"unknown payload kinds: {', '.join(unknown)}")
        if any(w < 0 for w in value.values()):
            raise ValueError("payload weights must be non-negative")
        if abs(sum(value.values()) - 1.0) > 1e-6:
            raise ValueError(f"payload weights must sum to 1, got {sum(value.values()):.6f}")
        return {k: float(value[k]) for k in sorted(value)}

    @model_validator(mode="after")
    def _ordered_durations(self) -> CorpusConfig:
        if self.min_duration >= self.max_duration:
            raise ValueError("min_duration must be below max_duration")
        return self

    @property
    def files_per_format(self) -> int:
        return self.total_files // 2

    @property
    def clean_per_format(self) -> int:
        return round(self.files_per_format * self.clean_fraction)

    @property
    def quantisation_step(self) -> int:
        """Carrier sample values are multiples of this step."""
        return 1 << max(self.bit_depth - self.carrier_resolution_bits, 0)

    def to_flat(self) -> dict[str, str]:
        """Flat key=value form, as echoed into the manifest."""
        flat: dict[str, str] = {}
        for key, value in self.model_dump(mode="json").items():
            if key == "payload_mix":
                flat[key] = ",".join(f"{k}:{v:g}" for k, v in value.items())
            elif isinstance(value, bool):
                flat[key] = str(value).lower()
            elif isinstance(value, float):
                flat[key] = f"{value:g}"
            else:
                flat[key] = str(value)
        return flat

    def to_text(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in self.to_flat().items())

    @classmethod
    def from_flat(cls, values: dict[str, str]) -> CorpusConfig:
        """
        Build from string values.

        Raises:
            ConfigurationError: Unknown key or invariant violated
        """
        data: dict[str, Any] = dict(values)
        mix = data.get("payload_mix")
        if isinstance(mix, str):
            data["payload_mix"] = _parse_mix(mix)
        if isinstance(data.get("write_references"), str):
            data["write_references"] = data["write_references"].strip().lower() in (
                "1", "true", "yes",
            )
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            problems = "; ".join(
                f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}"
                for err in e.errors()
            )
            raise ConfigurationError(
                f"Invalid corpus configuration: {problems}",
                suggestion="Run 'stegsift gen-corpus --help' for the accepted keys.",
            ) from None

    @classmethod
    def from_file(cls, path: Path | str) -> CorpusConfig:
        """Load a flat key=value file; `#` starts a comment line."""
        path = Path(path)
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except OSError as e:
            raise ConfigurationError(f"Cannot read corpus config {path}: {e}") from e

        values: dict[str, str] = {}
        for lineno, line in enumerate(lines, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
        return cls.from_flat(values)

    @classmethod
    def desk(cls) -> CorpusConfig:
        """Small corpus for a quick check of every stage (the default)."""
        return cls()

    @classmethod
    def trend(cls) -> CorpusConfig:
        """64 files over 10-400 s, enough to compare short and long carriers."""
        return cls(total_files=64, min_duration=10.0, max_duration=400.0)

    @classmethod
    def paper_scale(cls) -> CorpusConfig:
        """320 files over 10-1600 s; writes several gigabytes of WAV."""
        return cls(total_files=320, min_duration=10.0, max_duration=1600.0)

    @classmethod
    def preset(cls, name: CorpusPreset | str) -> CorpusConfig:
        """
        Raises:
            ConfigurationError: Unknown preset name
        """
        try:
            preset = CorpusPreset(name)
        except ValueError:
            choices = ", ".join(p.value for p in CorpusPreset)
            raise ConfigurationError(
                f"Unknown corpus preset '{name}'",
                suggestion=f"Choose one of: {choices}",
            ) from None
        return {
            CorpusPreset.DESK: cls.desk,
            CorpusPreset.TREND: cls.trend,
            CorpusPreset.PAPER: cls.paper_scale,
        }[preset]()

    def with_overrides(self, **overrides: Any) -> CorpusConfig:
        """Copy with the non-None overrides applied and re-validated."""
        data = self.model_dump()
        data.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return CorpusConfig.model_validate(data)
        except ValidationError as e:
            raise ConfigurationError(f"Invalid corpus configuration: {e}") from None


def _parse_mix(text: str) -> dict[str, float]:
    mix: dict[str, float] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        kind, sep, weight = item.partition(":")
        if not sep:
            raise ConfigurationError(f"Invalid payload_mix item '{item}'; expected kind:weight")
        try:
            mix[kind.strip()] = float(weight)
        except ValueError:
            raise ConfigurationError(f"Invalid payload weight '{weight}'") from None
    return mix
