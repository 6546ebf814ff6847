"""
Multi-stage steganalysis for WAV and MP3 files.

- statistics: windowed pair-of-values chi-square and LSB entropy (SAF)
- spectrogram: STFT magnitudes and spectral anomaly scoring
- signatures: magic-number scanning of raw and reassembled planes (FSA)
- quality: reference SNR comparison (FCA)
- timestamps: MAC ordering checks
- pipeline: stage orchestration into a DetectionReport
"""

from stegsift.detection.pipeline import ParsedCarrier, load_carrier, run_pipeline
from stegsift.detection.quality import fca_quality, snr_db
from stegsift.detection.report import (
    DetectionReport,
    FinalVerdict,
    StageResult,
    Verdict,
    classify,
)
from stegsift.detection.signatures import (
    BUILTIN_SIGNATURES,
    ScanStream,
    Signature,
    SignatureHit,
    SignatureTable,
    SourcePlane,
    fsa_scan,
    load_signature_file,
)
from stegsift.detection.spectrogram import Spectrogram, compute_spectrogram, spectro_anomaly
from stegsift.detection.statistics import (
    WindowStatistic,
    lsb_entropy,
    pair_chi_square,
    saf_statistics,
    window_statistics,
)
from stegsift.detection.timestamps import FileTimes, mac_anomaly_check

__all__ = [
    "ParsedCarrier",
    "load_carrier",
    "run_pipeline",
    "fca_quality",
    "snr_db",
    "DetectionReport",
    "FinalVerdict",
    "StageResult",
    "Verdict",
    "classify",
    "BUILTIN_SIGNATURES",
    "ScanStream",
    "Signature",
    "SignatureHit",
    "SignatureTable",
    "SourcePlane",
    "fsa_scan",
    "load_signature_file",
    "Spectrogram",
    "compute_spectrogram",
    "spectro_anomaly",
    "WindowStatistic",
    "lsb_entropy",
    "pair_chi_square",
    "saf_statistics",
    "window_statistics",
    "FileTimes",
    "mac_anomaly_check",
]
