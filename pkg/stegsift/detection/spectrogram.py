"""
Short-time Fourier analysis and spectral anomaly scoring.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import signal

from stegsift.container.base import PcmAudio
from stegsift.core.config import DetectionConfig, Stage
from stegsift.detection.report import StageResult
from stegsift.exceptions import ShapeMismatchError, TooShortError


WINDOW_KINDS = ("hann", "rectangular")
_BLOCK_FRAMES = 2048
_FLATNESS_FLOOR = 0.75
_FLATNESS_SPAN = 0.25
_LOG_DECADES = 2.0


@dataclass
class Spectrogram:
    """
    Magnitude STFT of a mono signal.

    magnitudes has shape (frames, window_size // 2 + 1).
    """

    window_size: int
    hop: int
    magnitudes: np.ndarray = field(repr=False)
    window: str = "hann"
    sample_rate: int | None = None

    @property
    def frames(self) -> int:
        return self.magnitudes.shape[0]

    @property
    def bins(self) -> int:
        return self.magnitudes.shape[1]

    def bin_frequency(self, index: int) -> float:
        if self.sample_rate is None:
            raise ValueError("Spectrogram has no sample rate")
        return index * self.sample_rate / self.window_size

    def top_quartile(self) -> np.ndarray:
        """Magnitudes of the highest-frequency quarter of bins."""
        return self.magnitudes[:, (3 * self.bins) // 4:]

    def energy(self) -> float:
        """
        Time-domain energy of the windowed frames recovered via Parseval.

        Uses the one-sided spectrum: DC and Nyquist once, other bins twice.
        """
        power = np.asarray(self.magnitudes, dtype=np.float64) ** 2
        weights = np.full(self.bins, 2.0)
        weights[0] = 1.0
        if self.window_size % 2 == 0:
            weights[-1] = 1.0
        return float((power * weights).sum() / self.window_size)


def analysis_window(kind: str, size: int) -> np.ndarray:
    if kind == "hann":
        return signal.get_window("hann", size)
    if kind == "rectangular":
        return np.ones(size)
    raise ValueError(f"Unknown window '{kind}', expected one of {WINDOW_KINDS}")


def compute_spectrogram(
    audio: PcmAudio | np.ndarray,
    window_size: int = 1024,
    hop: int = 512,
    *,
    window: str = "hann",
    dtype: type = np.float64,
) -> Spectrogram:
    """
    Magnitude spectrogram of a signal; multi-channel audio is averaged to mono.

    Raises:
        TooShortError: fewer samples than one window
    """
    if window_size <= 0 or window_size & (window_size - 1):
        raise ValueError(f"window_size must be a power of two, got {window_size}")
    if hop <= 0:
        raise ValueError(f"hop must be positive, got {hop}")

    if isinstance(audio, PcmAudio):
        mono, rate = audio.to_mono(), audio.sample_rate
    else:
        mono, rate = np.asarray(audio, dtype=np.float64), None
    if mono.size < window_size:
        raise TooShortError(int(mono.size), window_size)

    taper = analysis_window(window, window_size)
    framed = np.lib.stride_tricks.sliding_window_view(mono, window_size)[::hop]
    magnitudes = np.empty((framed.shape[0], window_size // 2 + 1), dtype=dtype)
    for start in range(0, framed.shape[0], _BLOCK_FRAMES):
        block = framed[start:start + _BLOCK_FRAMES] * taper
        magnitudes[start:start + _BLOCK_FRAMES] = np.abs(np.fft.rfft(block, axis=1))

    return Spectrogram(window_size, hop, magnitudes, window, rate)


def spectral_flatness(power: np.ndarray) -> np.ndarray:
    """Per-row geometric/arithmetic mean ratio; all-zero rows score 0."""
    power = np.asarray(power, dtype=np.float64)
    mean = power.mean(axis=1)
    with np.errstate(divide="ignore"):
        log_mean = np.log(power).mean(axis=1)
    geometric = np.exp(log_mean)
    return np.divide(geometric, mean, out=np.zeros_like(mean), where=mean > 0)


def spectro_anomaly(
    sgram: Spectrogram,
    baseline: Spectrogram | None = None,
    config: DetectionConfig | None = None,
) -> StageResult:
    """
    Score high-frequency spectral anomalies.

    With a baseline: mean absolute log10 magnitude difference over the top
    quartile of bins, scaled so two decades scores 1. Without: mean
    per-frame spectral flatness of the top quartile, scored from 0.75
    (tonal or quantisation-noise spectra stay below) to 1.0.

    Raises:
        ShapeMismatchError: baseline dimensions differ
    """
    config = config or DetectionConfig()
    thresholds = config.threshold(Stage.SPECTRO)
    top = sgram.top_quartile().astype(np.float64)

    if baseline is not None:
        if (baseline.window_size, baseline.hop) != (sgram.window_size, sgram.hop):
            raise ShapeMismatchError(
                "window/hop", (sgram.window_size, sgram.hop), (baseline.window_size, baseline.hop)
            )
        if baseline.magnitudes.shape != sgram.magnitudes.shape:
            raise ShapeMismatchError(
                "spectrogram shape", sgram.magnitudes.shape, baseline.magnitudes.shape
            )
        ref = baseline.top_quartile().astype(np.float64)
        diff = np.abs(np.log10(top + 1.0) - np.log10(ref + 1.0))
        mean_diff = float(diff.mean()) if diff.size else 0.0
        return StageResult.scored(
            Stage.SPECTRO,
            mean_diff / _LOG_DECADES,
            thresholds,
            {"mode": "baseline", "mean_log10_difference": mean_diff, "frames": sgram.frames},
        )

    flatness = float(spectral_flatness(top ** 2).mean()) if top.size else 0.0
    score = (flatness - _FLATNESS_FLOOR) / _FLATNESS_SPAN
    return StageResult.scored(
        Stage.SPECTRO,
        score,
        thresholds,
        {"mode": "flatness", "top_quartile_flatness": flatness, "frames": sgram.frames},
    )
