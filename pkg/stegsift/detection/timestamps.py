"""
MAC timestamp consistency checks.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from pathlib import Path

from stegsift.core.config import DetectionConfig, Stage
from stegsift.detection.report import StageResult


@dataclass(frozen=True)
class FileTimes:
    """Creation, modification and access times in epoch seconds."""

    created: float | None
    modified: float | None
    accessed: float | None

    @classmethod
    def from_path(cls, path: Path | str) -> FileTimes:
        st = os.stat(path)
        created = getattr(st, "st_birthtime", None)
        if created is None and os.name == "nt":
            created = st.st_ctime
        return cls(created=created, modified=st.st_mtime, accessed=st.st_atime)

    @property
    def complete(self) -> bool:
        return None not in (self.created, self.modified, self.accessed)


def mac_anomaly_check(
    times: FileTimes,
    *,
    now: float | None = None,
    config: DetectionConfig | None = None,
) -> StageResult:
    """
    Flag out-of-order or future timestamps.

    modified or accessed before created, or any time more than
    mac_skew_seconds after the scan time. Age alone is never an anomaly.
    """
    config = config or DetectionConfig()
    if not times.complete:
        return StageResult.not_run(Stage.MAC, "timestamps unavailable")

    now = time.time() if now is None else now
    skew = config.mac_skew_seconds
    reasons = []
    if times.modified < times.created:  # type: ignore[operator]
        reasons.append("modified before created")
    if times.accessed < times.created:  # type: ignore[operator]
        reasons.append("accessed before created")
    stamps = (
        ("created", times.created),
        ("modified", times.modified),
        ("accessed", times.accessed),
    )
    for label, value in stamps:
        if value > now + skew:  # type: ignore[operator]
            reasons.append(f"{label} in the future")

    score = 1.0 if reasons else 0.0
    return StageResult.scored(Stage.MAC, score, config.threshold(Stage.MAC), {"reasons": reasons})
