"""Core module - configuration and corpus manifest."""

from stegsift.core.config import (
    DetectionConfig,
    FolderConfig,
    Stage,
    StageThresholds,
    StegSiftConfig,
)
from stegsift.core.manifest import MANIFEST_COLUMNS, CorpusManifest, ManifestEntry

__all__ = [
    "DetectionConfig",
    "FolderConfig",
    "Stage",
    "StageThresholds",
    "StegSiftConfig",
    "MANIFEST_COLUMNS",
    "CorpusManifest",
    "ManifestEntry",
]
