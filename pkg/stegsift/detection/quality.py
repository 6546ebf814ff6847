"""
Forensic content analysis (FCA): reference-vs-suspect SNR.
"""

from __future__ import annotations

import math

import numpy as np

from stegsift.container.base import PcmAudio
from stegsift.core.config import DetectionConfig, Stage
from stegsift.detection.report import StageResult, Verdict
from stegsift.exceptions import ShapeMismatchError


def snr_db(suspect: PcmAudio, reference: PcmAudio) -> float:
    """
    10 log10(sum ref^2 / sum (ref - sus)^2). +inf for identical signals.

    Raises:
        ShapeMismatchError: rate, channel count or length differ
    """
    if not suspect.same_shape(reference):
        raise ShapeMismatchError(
            "audio shape",
            (suspect.sample_rate, suspect.channels, suspect.samples.size),
            (reference.sample_rate, reference.channels, reference.samples.size),
        )
    ref = reference.samples.astype(np.float64)
    noise = float(np.sum((ref - suspect.samples.astype(np.float64)) ** 2))
    if noise == 0.0:
        return math.inf
    signal_power = float(np.sum(ref ** 2))
    if signal_power == 0.0:
        return -math.inf
    return 10.0 * math.log10(signal_power / noise)


def fca_quality(
    suspect: PcmAudio,
    reference: PcmAudio,
    config: DetectionConfig | None = None,
) -> StageResult:
    """SNR mapped linearly from snr_low_db (1.0) to snr_high_db (0.0)."""
    config = config or DetectionConfig()
    snr = snr_db(suspect, reference)
    if math.isinf(snr):
        score = 0.0 if snr > 0 else 1.0
    else:
        score = (config.snr_high_db - snr) / (config.snr_high_db - config.snr_low_db)

    result = StageResult.scored(Stage.FCA, score, config.threshold(Stage.FCA), {"snr_db": snr})
    # perceptual change alone never confirms hidden content
    if result.verdict is Verdict.POSITIVE:
        result.verdict = Verdict.SUSPICIOUS
    return result
