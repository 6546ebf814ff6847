"""Tests for STFT magnitudes and spectral anomaly scoring."""

import numpy as np
import pytest

from stegsift.core.config import Stage
from stegsift.detection import Verdict, compute_spectrogram, spectro_anomaly
from stegsift.exceptions import ShapeMismatchError, TooShortError


class TestComputeSpectrogram:
    """Test spectrogram shape and content."""

    def test_shape(self, sine_audio):
        """frames = (n - window) // hop + 1, bins = window / 2 + 1."""
        sgram = compute_spectrogram(sine_audio, 1024, 512)
        assert sgram.frames == (88200 - 1024) // 512 + 1
        assert sgram.bins == 513

    def test_sine_peak_bin(self, sine_audio):
        """A 440 Hz tone peaks in bin 10 at 44.1 kHz with 1024-point frames."""
        sgram = compute_spectrogram(sine_audio, 1024, 512)
        peak = int(np.argmax(sgram.magnitudes.mean(axis=0)))
        assert peak == 10
        assert sgram.bin_frequency(peak) == pytest.approx(430.66, abs=0.01)

    @pytest.mark.parametrize("window_size", [256, 1024])
    def test_parseval_rectangular(self, window_size):
        """With a rectangular window and no overlap, spectral energy equals signal energy."""
        rng = np.random.default_rng(3)
        x = rng.standard_normal(window_size * 4)
        sgram = compute_spectrogram(x, window_size, window_size, window="rectangular")
        assert sgram.energy() == pytest.approx(float(np.sum(x ** 2)), rel=1e-9)

    def test_array_input_has_no_rate(self):
        sgram = compute_spectrogram(np.zeros(512), 256, 128)
        assert sgram.sample_rate is None
        with pytest.raises(ValueError):
            sgram.bin_frequency(1)

    def test_stereo_is_averaged(self, stereo_audio):
        """Opposite channels cancel to silence."""
        sgram = compute_spectrogram(stereo_audio, 256, 128)
        assert np.all(sgram.magnitudes == 0)

    def test_window_not_power_of_two(self, sine_audio):
        with pytest.raises(ValueError):
            compute_spectrogram(sine_audio, 1000, 500)

    def test_unknown_window(self, sine_audio):
        with pytest.raises(ValueError):
            compute_spectrogram(sine_audio, 1024, 512, window="blackman-nuttall")

    def test_too_short(self):
        with pytest.raises(TooShortError):
            compute_spectrogram(np.zeros(100), 256, 128)


class TestSpectroAnomaly:
    """Test spectral anomaly scoring."""

    def test_identical_baseline_scores_zero(self, sine_audio):
        sgram = compute_spectrogram(sine_audio, 1024, 512)
        result = spectro_anomaly(sgram, compute_spectrogram(sine_audio, 1024, 512))
        assert result.stage is Stage.SPECTRO
        assert result.score == 0.0
        assert result.verdict is Verdict.CLEAN
        assert result.detail["mode"] == "baseline"

    def test_baseline_difference_scores(self, sine_audio, noise_audio):
        """A very different high band scores above zero."""
        short_sine = sine_audio.with_samples(sine_audio.samples[:44100])
        result = spectro_anomaly(
            compute_spectrogram(noise_audio, 1024, 512),
            compute_spectrogram(short_sine, 1024, 512),
        )
        assert result.score > 0.0

    def test_baseline_shape_mismatch(self, sine_audio, noise_audio):
        with pytest.raises(ShapeMismatchError):
            spectro_anomaly(
                compute_spectrogram(sine_audio, 1024, 512),
                compute_spectrogram(noise_audio, 1024, 512),
            )

    def test_baseline_window_mismatch(self, sine_audio):
        with pytest.raises(ShapeMismatchError):
            spectro_anomaly(
                compute_spectrogram(sine_audio, 1024, 512),
                compute_spectrogram(sine_audio, 512, 256),
            )

    def test_tonal_signal_without_baseline(self, sine_audio):
        """A quantised tone has no flat high band."""
        result = spectro_anomaly(compute_spectrogram(sine_audio, 1024, 512))
        assert result.detail["mode"] == "flatness"
        assert result.verdict is Verdict.CLEAN

    def test_flat_spectrum_without_baseline(self):
        """One impulse per frame has a perfectly flat spectrum."""
        x = np.zeros(1024 * 8)
        x[512::1024] = 1000.0
        result = spectro_anomaly(compute_spectrogram(x, 1024, 1024))
        assert result.score == pytest.approx(1.0)
        assert result.verdict is Verdict.POSITIVE
