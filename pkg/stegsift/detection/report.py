"""
Stage results and per-file detection reports.

Reports serialize to one YAML document per scanned file and to a single
CSV row for the scan index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from stegsift.core.config import Stage, StageThresholds
from stegsift.detection.signatures import SignatureHit


class Verdict(str, Enum):
    CLEAN = "clean"
    SUSPICIOUS = "suspicious"
    POSITIVE = "positive"
    NOT_RUN = "not_run"


class FinalVerdict(str, Enum):
    CLEAN = "clean"
    STEGO_DETECTED = "stego_detected"


SCAN_INDEX_COLUMNS = [
    "file",
    "format",
    "final_verdict",
    "confidence",
    "hash_mismatch",
    "mac_anomaly",
    "hit_count",
    "hit_types",
    "HASH",
    "SAF",
    "SPECTRO",
    "FSA",
    "FCA",
    "MAC",
]


def classify(score: float, thresholds: StageThresholds) -> Verdict:
    """Map a score to a verdict with a stage's cut-offs."""
    if score >= thresholds.positive:
        return Verdict.POSITIVE
    if score >= thresholds.suspicious:
        return Verdict.SUSPICIOUS
    return Verdict.CLEAN


def plain(value: Any) -> Any:
    """Convert numpy scalars and containers to YAML-safe builtins."""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [plain(v) for v in value.tolist()]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, Enum):
        return value.value
    return value


@dataclass
class StageResult:
    """
    Outcome of one pipeline stage.

    score is None exactly when the stage did not run.
    """

    stage: Stage
    score: float | None
    verdict: Verdict
    detail: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def not_run(cls, stage: Stage, reason: str) -> StageResult:
        return cls(stage, None, Verdict.NOT_RUN, {"reason": reason})

    @classmethod
    def scored(
        cls,
        stage: Stage,
        score: float,
        thresholds: StageThresholds,
        detail: dict[str, Any] | None = None,
    ) -> StageResult:
        score = float(min(max(score, 0.0), 1.0))
        return cls(stage, score, classify(score, thresholds), detail or {})

    @property
    def ran(self) -> bool:
        return self.verdict is not Verdict.NOT_RUN

    def to_dict(self) -> dict[str, Any]:
        return {
            "stage": self.stage.value,
            "score": self.score,
            "verdict": self.verdict.value,
            "detail": plain(self.detail),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> StageResult:
        score = data.get("score")
        return cls(
            stage=Stage(data["stage"]),
            score=None if score is None else float(score),
            verdict=Verdict(data["verdict"]),
            detail=dict(data.get("detail") or {}),
        )


@dataclass
class DetectionReport:
    """Everything the pipeline concluded about one file."""

    file: str
    format: str
    stages: list[StageResult] = field(default_factory=list)
    signature_hits: list[SignatureHit] = field(default_factory=list)
    final_verdict: FinalVerdict = FinalVerdict.CLEAN
    confidence: float = 0.0
    hash_mismatch: bool = False
    mac_anomaly: bool = False
    plane_spans: dict[str, list[int]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    thresholds: dict[str, dict[str, float]] = field(default_factory=dict)

    def stage(self, stage: Stage) -> StageResult | None:
        return next((s for s in self.stages if s.stage is stage), None)

    def verdict_of(self, stage: Stage) -> Verdict:
        result = self.stage(stage)
        return result.verdict if result else Verdict.NOT_RUN

    def finalize(self) -> DetectionReport:
        """Derive final_verdict and confidence from the stage results."""
        fsa = self.verdict_of(Stage.FSA) is Verdict.POSITIVE
        saf = self.verdict_of(Stage.SAF) is Verdict.POSITIVE
        spectro_not_clean = self.verdict_of(Stage.SPECTRO) is not Verdict.CLEAN
        stego = fsa or (saf and spectro_not_clean) or (self.hash_mismatch and saf)
        self.final_verdict = FinalVerdict.STEGO_DETECTED if stego else FinalVerdict.CLEAN
        scores = [s.score for s in self.stages if s.ran and s.score is not None]
        self.confidence = max(scores) if scores else 0.0
        return self

    @property
    def is_positive(self) -> bool:
        return self.final_verdict is FinalVerdict.STEGO_DETECTED

    def to_dict(self) -> dict[str, Any]:
        return {
            "file": self.file,
            "format": self.format,
            "final_verdict": self.final_verdict.value,
            "confidence": self.confidence,
            "hash_mismatch": self.hash_mismatch,
            "mac_anomaly": self.mac_anomaly,
            "stages": [s.to_dict() for s in self.stages],
            "signature_hits": [h.to_dict() for h in self.signature_hits],
            "plane_spans": plain(self.plane_spans),
            "notes": list(self.notes),
            "thresholds": plain(self.thresholds),
        }

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), default_flow_style=False, sort_keys=False)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> DetectionReport:
        return cls(
            file=data["file"],
            format=data["format"],
            stages=[StageResult.from_dict(s) for s in data.get("stages", [])],
            signature_hits=[SignatureHit.from_dict(h) for h in data.get("signature_hits", [])],
            final_verdict=FinalVerdict(data.get("final_verdict", "clean")),
            confidence=float(data.get("confidence", 0.0)),
            hash_mismatch=bool(data.get("hash_mismatch", False)),
            mac_anomaly=bool(data.get("mac_anomaly", False)),
            plane_spans={k: list(v) for k, v in (data.get("plane_spans") or {}).items()},
            notes=list(data.get("notes") or []),
            thresholds=dict(data.get("thresholds") or {}),
        )

    @classmethod
    def from_yaml(cls, text: str) -> DetectionReport:
        return cls.from_dict(yaml.safe_load(text))

    def save(self, path: Path) -> None:
        path.write_text(self.to_yaml(), encoding="utf-8")

    @classmethod
    def load(cls, path: Path) -> DetectionReport:
        return cls.from_yaml(path.read_text(encoding="utf-8"))

    def index_row(self) -> dict[str, str]:
        """One scan_index.csv row."""
        row = {
            "file": self.file,
            "format": self.format,
            "final_verdict": self.final_verdict.value,
            "confidence": f"{self.confidence:.6f}",
            "hash_mismatch": str(self.hash_mismatch).lower(),
            "mac_anomaly": str(self.mac_anomaly).lower(),
            "hit_count": str(len(self.signature_hits)),
            "hit_types": ";".join(sorted({h.type_id for h in self.signature_hits})),
        }
        for stage in Stage:
            row[stage.value] = self.verdict_of(stage).value
        return row


def format_score(score: float | None) -> str:
    if score is None:
        return "-"
    if math.isinf(score):
        return "inf"
    return f"{score:.3f}"
