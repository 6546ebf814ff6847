"""
StegSift - Forensic Steganalysis for Audio Evidence

Detect, carve and score data hidden in WAV and MP3 files.
"""

__version__ = "0.1.0"
__author__ = "StegSift Contributors"

from stegsift.core.config import DetectionConfig, StegSiftConfig
from stegsift.detection.pipeline import run_pipeline
from stegsift.detection.report import DetectionReport

__all__ = [
    "DetectionConfig",
    "StegSiftConfig",
    "run_pipeline",
    "DetectionReport",
    "__version__",
]
