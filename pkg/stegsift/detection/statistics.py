"""
Statistical analysis of PCM samples (SAF).

Each non-overlapping window is tested with the pair-of-values
chi-square statistic: for every occupied value pair (2k, 2k+1) the
count of the even member is compared with the pair mean. Sequential
LSB replacement equalises the two members, which drives the statistic
down and its p-value towards 1. The binary entropy of the LSB plane is
tracked alongside.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy import stats

from stegsift.container.base import PcmAudio
from stegsift.core.config import DetectionConfig, Stage
from stegsift.detection.report import StageResult
from stegsift.exceptions import TooShortError


MIN_WINDOW = 256


@dataclass(frozen=True)
class WindowStatistic:
    start: int
    chi_square: float
    dof: int
    p_value: float
    lsb_entropy: float

    def to_dict(self) -> dict[str, float]:
        return asdict(self)


def pair_chi_square(samples: np.ndarray) -> tuple[float, int, float]:
    """
    Pair-of-values chi-square over one block of samples.

    Returns (statistic, degrees of freedom, p-value). Fewer than two
    occupied pairs yields p = 0.
    """
    values = np.asarray(samples, dtype=np.int64)
    if values.size == 0:
        return 0.0, 0, 0.0
    pairs = values >> 1
    index = pairs - pairs.min()
    totals = np.bincount(index)
    evens = np.bincount(index[(values & 1) == 0], minlength=totals.size)

    occupied = totals > 0
    expected = totals[occupied] / 2.0
    observed = evens[occupied].astype(np.float64)
    statistic = float(np.sum((observed - expected) ** 2 / expected))

    k = int(occupied.sum())
    if k < 2:
        return statistic, 0, 0.0
    dof = k - 1
    return statistic, dof, float(stats.chi2.sf(statistic, dof))


def lsb_entropy(samples: np.ndarray) -> float:
    """Binary entropy (bits) of the least significant bit plane."""
    if samples.size == 0:
        return 0.0
    p = float(np.mean(np.asarray(samples) & 1))
    if p in (0.0, 1.0):
        return 0.0
    return float(-(p * np.log2(p) + (1 - p) * np.log2(1 - p)))


def window_statistics(audio: PcmAudio, window: int) -> list[WindowStatistic]:
    """
    Per-window chi-square and LSB entropy over interleaved samples.

    Raises:
        TooShortError: fewer samples than one window
    """
    if window < MIN_WINDOW:
        raise ValueError(f"window must be >= {MIN_WINDOW}, got {window}")
    samples = audio.samples
    if samples.size < window:
        raise TooShortError(int(samples.size), window)

    results = []
    for start in range(0, samples.size - window + 1, window):
        block = samples[start:start + window]
        chi, dof, p = pair_chi_square(block)
        results.append(WindowStatistic(start, chi, dof, p, lsb_entropy(block)))
    return results


def saf_statistics(
    audio: PcmAudio,
    window: int,
    config: DetectionConfig | None = None,
) -> StageResult:
    """
    Score a PCM signal for embedding-like LSB statistics.

    score = w * (fraction of windows with p > saf_p_value)
          + (1 - w) * mean(clip((H - entropy_floor) / entropy_span, 0, 1))
    """
    config = config or DetectionConfig()
    windows = window_statistics(audio, window)

    p_values = np.array([w.p_value for w in windows])
    entropies = np.array([w.lsb_entropy for w in windows])
    embedded = p_values > config.saf_p_value
    deviation = np.clip((entropies - config.entropy_floor) / config.entropy_span, 0.0, 1.0)

    weight = config.saf_chi_weight
    score = weight * float(embedded.mean()) + (1.0 - weight) * float(deviation.mean())

    detail = {
        "window": window,
        "windows": len(windows),
        "embedded_windows": int(embedded.sum()),
        "embedded_fraction": float(embedded.mean()),
        "mean_p_value": float(p_values.mean()),
        "mean_lsb_entropy": float(entropies.mean()),
        "entropy_deviation": float(deviation.mean()),
    }
    return StageResult.scored(Stage.SAF, score, config.threshold(Stage.SAF), detail)
