"""Tests for detection stages, report logic and the pipeline."""

import math

import numpy as np
import pytest
from scipy import stats

from stegsift.container import PcmAudio, encode_wav
from stegsift.core.config import DetectionConfig, Stage, StageThresholds
from stegsift.detection import (
    DetectionReport,
    FileTimes,
    FinalVerdict,
    ScanStream,
    Signature,
    SignatureHit,
    SignatureTable,
    SourcePlane,
    StageResult,
    Verdict,
    classify,
    fca_quality,
    fsa_scan,
    load_signature_file,
    lsb_entropy,
    mac_anomaly_check,
    pair_chi_square,
    run_pipeline,
    saf_statistics,
    snr_db,
    window_statistics,
)
from stegsift.detection.pipeline import SIGNATURELESS_NOTE, UNIFORM_LSB_NOTE, load_carrier
from stegsift.detection.report import SCAN_INDEX_COLUMNS
from stegsift.exceptions import (
    ConfigurationError,
    MalformedContainerError,
    ShapeMismatchError,
    TooShortError,
)
from stegsift.integrity import build_db
from stegsift.stego import (
    EmbedLocation,
    EmbedMode,
    EmbedPlan,
    PayloadSpec,
    PayloadType,
    embed_mp3_meta,
    embed_wav_lsb,
)


FIXED_TIMES = FileTimes(created=1000.0, modified=2000.0, accessed=3000.0)


def _fully_embedded(carrier: PcmAudio, seed: int = 5) -> PcmAudio:
    """Fill the whole 1-bit plane with random bytes."""
    rng = np.random.default_rng(seed)
    payload = PayloadSpec(rng.bytes(carrier.samples.size // 8))
    return embed_wav_lsb(carrier, payload, EmbedPlan())


# ============================================================================
# SAF
# ============================================================================

class TestPairChiSquare:
    """Test the pair-of-values statistic."""

    def test_all_even_values(self):
        """An untouched quantised plane is far from pair-equalised."""
        samples = np.repeat(np.arange(0, 2000, 16), 50)
        _, dof, p = pair_chi_square(samples)
        assert dof == 124
        assert p < 1e-6

    def test_random_lsbs(self):
        """Random low bits equalise pairs and push p towards 1."""
        rng = np.random.default_rng(0)
        samples = np.repeat(np.arange(0, 2000, 16), 50) | rng.integers(0, 2, 6250)
        _, _, p = pair_chi_square(samples)
        assert p > 0.95

    def test_single_pair(self):
        """Fewer than two occupied pairs gives p = 0."""
        assert pair_chi_square(np.array([4, 5, 4, 5])) == (0.0, 0, 0.0)

    def test_empty(self):
        assert pair_chi_square(np.array([], dtype=np.int32)) == (0.0, 0, 0.0)

    def test_negative_values_pair_by_floor(self):
        """-3 and -4 share a pair; -1 pairs with -2, not with 0."""
        samples = np.array([-4, -4, -3, -2, -1, -1, 0, 0])
        statistic, dof, _ = pair_chi_square(samples)
        assert dof == 2
        # pairs: (-4,-3) evens 2/3, (-2,-1) evens 1/3, (0,1) evens 2/2
        assert statistic == pytest.approx(
            (2 - 1.5) ** 2 / 1.5 + (1 - 1.5) ** 2 / 1.5 + (2 - 1.0) ** 2 / 1.0
        )

    def test_matches_histogram_oracle(self):
        """Agrees with a plain dict-histogram computation on random blocks."""
        rng = np.random.default_rng(1234)

        for trial in range(100):
            size = int(rng.integers(2, 4097))
            low = int(rng.integers(-2000, 0))
            high = int(rng.integers(1, 2000))
            samples = rng.integers(low, high, size)
            if trial % 3 == 0:
                # skewed towards even values so the statistic is far from 0
                samples = samples & ~1 | (rng.random(size) < 0.2)

            totals: dict[int, int] = {}
            evens: dict[int, int] = {}
            for value in samples.tolist():
                pair = value // 2
                totals[pair] = totals.get(pair, 0) + 1
                if value % 2 == 0:
                    evens[pair] = evens.get(pair, 0) + 1
            expected_stat = 0.0
            for pair, total in totals.items():
                mean = total / 2.0
                expected_stat += (evens.get(pair, 0) - mean) ** 2 / mean

            statistic, dof, p = pair_chi_square(samples)
            assert statistic == pytest.approx(expected_stat, rel=1e-9, abs=1e-12), trial
            if len(totals) >= 2:
                assert dof == len(totals) - 1
                assert p == pytest.approx(stats.chi2.sf(expected_stat, dof), rel=1e-9, abs=1e-12)


class TestLsbEntropy:
    def test_constant_plane(self):
        assert lsb_entropy(np.zeros(100, dtype=np.int32)) == 0.0

    def test_balanced_plane(self):
        assert lsb_entropy(np.arange(100)) == pytest.approx(1.0)


class TestSafStatistics:
    """Test the windowed SAF stage."""

    def test_window_count(self, sine_audio):
        windows = window_statistics(sine_audio, 16384)
        assert len(windows) == 88200 // 16384
        assert [w.start for w in windows[:2]] == [0, 16384]

    def test_window_too_small(self, sine_audio):
        with pytest.raises(ValueError):
            window_statistics(sine_audio, 128)

    def test_signal_too_short(self):
        audio = PcmAudio(sample_rate=8000, channels=1, bit_depth=16, samples=np.zeros(300))
        with pytest.raises(TooShortError):
            window_statistics(audio, 512)

    def test_clean_carrier(self, sine_audio):
        result = saf_statistics(sine_audio, 16384)
        assert result.stage is Stage.SAF
        assert result.score == 0.0
        assert result.verdict is Verdict.CLEAN

    def test_full_embedding(self, sine_audio):
        """A completely replaced LSB plane is positive."""
        result = saf_statistics(_fully_embedded(sine_audio), 16384)
        assert result.verdict is Verdict.POSITIVE
        assert result.detail["embedded_fraction"] == 1.0
        assert result.detail["mean_lsb_entropy"] > 0.99


# ============================================================================
# FCA and MAC
# ============================================================================

class TestQuality:
    """Test reference SNR comparison."""

    def test_identical(self, sine_audio):
        assert math.isinf(snr_db(sine_audio, sine_audio))
        result = fca_quality(sine_audio, sine_audio)
        assert result.score == 0.0
        assert result.verdict is Verdict.CLEAN

    def test_known_snr(self):
        """A 10% offset is 20 dB."""
        reference = PcmAudio(sample_rate=8000, channels=1, bit_depth=16, samples=[100] * 64)
        suspect = reference.with_samples(np.full(64, 110))
        assert snr_db(suspect, reference) == pytest.approx(20.0)

    def test_low_snr_capped_to_suspicious(self):
        """FCA alone never reports positive."""
        reference = PcmAudio(sample_rate=8000, channels=1, bit_depth=16, samples=[100] * 64)
        result = fca_quality(reference.with_samples(np.full(64, 110)), reference)
        assert result.score == 1.0
        assert result.verdict is Verdict.SUSPICIOUS

    def test_shape_mismatch(self, sine_audio, noise_audio):
        with pytest.raises(ShapeMismatchError):
            snr_db(sine_audio, noise_audio)


class TestMacCheck:
    """Test timestamp ordering rules."""

    def test_consistent(self):
        result = mac_anomaly_check(FIXED_TIMES, now=5000.0)
        assert result.verdict is Verdict.CLEAN

    def test_old_file_is_not_anomalous(self):
        result = mac_anomaly_check(FileTimes(0.0, 1.0, 2.0), now=2e9)
        assert result.verdict is Verdict.CLEAN

    def test_modified_before_created(self):
        result = mac_anomaly_check(FileTimes(1000.0, 500.0, 1500.0), now=5000.0)
        assert result.verdict is Verdict.POSITIVE
        assert "modified before created" in result.detail["reasons"]

    def test_ordering_is_strict(self):
        """Clock skew only applies to the future rule, not to ordering."""
        result = mac_anomaly_check(FileTimes(1000.0, 999.0, 1000.0), now=5000.0)
        assert result.verdict is Verdict.POSITIVE
        assert result.detail["reasons"] == ["modified before created"]

    def test_equal_times_consistent(self):
        result = mac_anomaly_check(FileTimes(1000.0, 1000.0, 1000.0), now=1000.0)
        assert result.verdict is Verdict.CLEAN

    def test_future_within_skew(self):
        """A timestamp up to mac_skew_seconds past the scan time is tolerated."""
        result = mac_anomaly_check(FileTimes(1000.0, 5001.5, 5001.5), now=5000.0)
        assert result.verdict is Verdict.CLEAN
        result = mac_anomaly_check(FileTimes(1000.0, 5002.5, 5001.5), now=5000.0)
        assert result.detail["reasons"] == ["modified in the future"]

    def test_future_timestamp(self):
        result = mac_anomaly_check(FileTimes(1000.0, 9000.0, 9000.0), now=5000.0)
        assert "modified in the future" in result.detail["reasons"]

    def test_incomplete_times(self):
        result = mac_anomaly_check(FileTimes(None, 1.0, 2.0), now=5000.0)
        assert result.verdict is Verdict.NOT_RUN
        assert result.score is None


# ============================================================================
# FSA
# ============================================================================

class TestSignatures:
    """Test signature tables and scanning."""

    def test_scan_offsets(self):
        data = b"xx" + b"PK\x03\x04" + b"yy" + b"%PDF-1.4"
        hits = fsa_scan([(SourcePlane.RAW_BYTES, data)])
        assert [(h.offset, h.type_id) for h in hits] == [(2, "zip"), (8, "pdf")]

    def test_every_occurrence(self):
        data = b"SGH1" * 3
        hits = fsa_scan([ScanStream(SourcePlane.TRAILING, data)])
        assert [h.offset for h in hits] == [0, 4, 8]

    def test_ordering(self):
        """Hits are ordered by plane, then LSB depth, then offset."""
        streams = [
            ScanStream(SourcePlane.LSB_PLANE, b"..PK\x03\x04", bits_per_sample=2),
            ScanStream(SourcePlane.LSB_PLANE, b"PK\x03\x04", bits_per_sample=1),
            ScanStream(SourcePlane.RAW_BYTES, b"....SGH1"),
        ]
        hits = fsa_scan(streams)
        assert [(h.source_plane, h.bits_per_sample, h.offset) for h in hits] == [
            (SourcePlane.RAW_BYTES, None, 4),
            (SourcePlane.LSB_PLANE, 1, 0),
            (SourcePlane.LSB_PLANE, 2, 2),
        ]

    def test_no_hits(self):
        assert fsa_scan([(SourcePlane.RAW_BYTES, bytes(1000))]) == []

    def test_signature_file(self, tmp_path):
        """Custom signatures extend the built-in table."""
        path = tmp_path / "sigs.tsv"
        path.write_text("# custom\n\nogg\t4F 67 67 53\n")
        table = SignatureTable.with_file(path)
        assert Signature("ogg", b"OggS") in table.signatures
        assert "zip" in table.type_ids()
        hits = fsa_scan([(SourcePlane.RAW_BYTES, b"..OggS")], table)
        assert hits[0].type_id == "ogg"

    def test_signature_file_malformed(self, tmp_path):
        path = tmp_path / "sigs.tsv"
        path.write_text("ogg 4F676753\n")
        with pytest.raises(ConfigurationError):
            load_signature_file(path)

    def test_signature_file_bad_hex(self, tmp_path):
        path = tmp_path / "sigs.tsv"
        path.write_text("ogg\tZZZZ\n")
        with pytest.raises(ConfigurationError):
            load_signature_file(path)

    def test_longest_prefix(self):
        table = SignatureTable([Signature("short", b"AB"), Signature("long", b"ABCD")])
        assert table.longest_prefix(b"ABCDEF").type_id == "long"
        assert table.longest_prefix(b"XYZ") is None


# ============================================================================
# Reports
# ============================================================================

class TestClassify:
    @pytest.mark.parametrize(
        "score,expected",
        [(0.5, Verdict.POSITIVE), (0.2, Verdict.SUSPICIOUS), (0.19, Verdict.CLEAN)],
    )
    def test_boundaries(self, score, expected):
        """Scores equal to a cut-off take the higher verdict."""
        assert classify(score, StageThresholds(0.5, 0.2)) is expected

    def test_invalid_thresholds(self):
        with pytest.raises(ConfigurationError):
            StageThresholds(positive=0.2, suspicious=0.5)


def _report(**verdicts: float) -> DetectionReport:
    thresholds = StageThresholds()
    stages = [StageResult.scored(Stage(name), score, thresholds) for name, score in verdicts.items()]
    return DetectionReport(file="x.wav", format="wav", stages=stages)


class TestFinalVerdict:
    """Test the combination rule."""

    def test_fsa_alone(self):
        assert _report(FSA=1.0, SAF=0.0).finalize().is_positive

    def test_saf_needs_corroboration(self):
        """SAF positive with a clean spectrogram is not enough."""
        assert not _report(SAF=1.0, SPECTRO=0.0).finalize().is_positive

    def test_saf_with_spectro(self):
        assert _report(SAF=1.0, SPECTRO=0.3).finalize().is_positive

    def test_saf_with_skipped_spectro(self):
        report = _report(SAF=1.0)
        report.stages.append(StageResult.not_run(Stage.SPECTRO, "SAF verdict positive"))
        assert report.finalize().is_positive

    def test_saf_with_hash_mismatch(self):
        report = _report(SAF=1.0, SPECTRO=0.0)
        report.hash_mismatch = True
        assert report.finalize().is_positive

    def test_fca_alone_is_clean(self):
        assert not _report(FCA=1.0, SAF=0.0).finalize().is_positive

    def test_confidence_is_max_score(self):
        report = _report(SAF=0.3, FSA=0.0, FCA=0.7).finalize()
        assert report.confidence == pytest.approx(0.7)

    def test_yaml_round_trip(self, tmp_path):
        report = _report(FSA=1.0, SAF=0.25)
        report.signature_hits = [SignatureHit(13, "zip", SourcePlane.LSB_PLANE, 1)]
        report.notes.append("example note")
        report.finalize()
        path = tmp_path / "x.report.yaml"
        report.save(path)
        assert DetectionReport.load(path).to_dict() == report.to_dict()

    def test_index_row(self):
        report = _report(FSA=1.0)
        report.signature_hits = [
            SignatureHit(13, "zip", SourcePlane.LSB_PLANE, 1),
            SignatureHit(0, "framed", SourcePlane.LSB_PLANE, 1),
        ]
        row = report.finalize().index_row()
        assert list(row) == SCAN_INDEX_COLUMNS
        assert row["final_verdict"] == "stego_detected"
        assert row["hit_types"] == "framed;zip"
        assert row["MAC"] == "not_run"


# ============================================================================
# Pipeline
# ============================================================================

class TestLoadCarrier:
    def test_wav_streams(self, stego_wav_bytes):
        carrier = load_carrier(stego_wav_bytes)
        planes = [(s.plane, s.bits_per_sample) for s in carrier.streams]
        assert planes == [
            (SourcePlane.RAW_BYTES, None),
            (SourcePlane.LSB_PLANE, 1),
            (SourcePlane.LSB_PLANE, 2),
        ]

    def test_mp3_streams(self, mp3_bytes):
        carrier = load_carrier(mp3_bytes)
        assert carrier.audio is None
        assert set(carrier.plane_spans()) == {"id3_padding", "trailing"}

    def test_unknown_format(self):
        with pytest.raises(MalformedContainerError):
            load_carrier(b"%PDF-1.7 not audio")


class TestPipeline:
    """Test end-to-end detection on single files."""

    def test_stego_wav(self, tmp_path, stego_wav_bytes):
        """A framed ZIP in the LSB plane is found by FSA."""
        path = tmp_path / "stego.wav"
        path.write_bytes(stego_wav_bytes)
        report = run_pipeline(path, times=FIXED_TIMES, now=5000.0)

        assert report.final_verdict is FinalVerdict.STEGO_DETECTED
        lsb_hits = [
            (h.offset, h.type_id) for h in report.signature_hits
            if h.source_plane is SourcePlane.LSB_PLANE and h.bits_per_sample == 1
        ]
        assert (0, "framed") in lsb_hits
        assert (13, "zip") in lsb_hits
        assert report.verdict_of(Stage.HASH) is Verdict.NOT_RUN
        assert report.verdict_of(Stage.FCA) is Verdict.NOT_RUN
        assert report.verdict_of(Stage.MAC) is Verdict.CLEAN

    def test_clean_wav(self, tmp_path, clean_wav_bytes):
        """A clean carrier passes every stage."""
        path = tmp_path / "clean.wav"
        path.write_bytes(clean_wav_bytes)
        report = run_pipeline(path, times=FIXED_TIMES, now=5000.0)

        assert report.final_verdict is FinalVerdict.CLEAN
        assert report.signature_hits == []
        assert report.verdict_of(Stage.SAF) is Verdict.CLEAN
        assert report.verdict_of(Stage.SPECTRO) is Verdict.CLEAN

    def test_own_riff_header_ignored(self, tmp_path, clean_wav_bytes):
        path = tmp_path / "clean.wav"
        path.write_bytes(clean_wav_bytes)
        report = run_pipeline(path, times=FIXED_TIMES, now=5000.0)
        assert not any(h.type_id == "riff_wav" for h in report.signature_hits)

    def test_saf_positive_skips_spectro(self, tmp_path, sine_audio):
        path = tmp_path / "full.wav"
        path.write_bytes(encode_wav(_fully_embedded(sine_audio)))
        report = run_pipeline(path, times=FIXED_TIMES, now=5000.0)

        assert report.verdict_of(Stage.SAF) is Verdict.POSITIVE
        assert report.verdict_of(Stage.SPECTRO) is Verdict.NOT_RUN
        assert report.is_positive
        if not report.signature_hits:
            assert SIGNATURELESS_NOTE in report.notes

    def test_unquantised_recording_noted(self, tmp_path):
        """Noisy low bits across the whole file get a calibration note."""
        rng = np.random.default_rng(3)
        t = np.arange(2 * 44100) / 44100
        samples = np.round(8000 * np.sin(2 * np.pi * 440 * t)) + rng.integers(-200, 201, t.size)
        audio = PcmAudio(sample_rate=44100, channels=1, bit_depth=16, samples=samples)
        path = tmp_path / "field_recording.wav"
        path.write_bytes(encode_wav(audio))

        report = run_pipeline(path, times=FIXED_TIMES, now=5000.0)

        assert report.verdict_of(Stage.SAF) is Verdict.POSITIVE
        assert UNIFORM_LSB_NOTE in report.notes

    def test_partial_embedding_not_noted(self, tmp_path, stego_wav_bytes):
        path = tmp_path / "stego.wav"
        path.write_bytes(stego_wav_bytes)
        report = run_pipeline(path, times=FIXED_TIMES, now=5000.0)
        assert UNIFORM_LSB_NOTE not in report.notes

    def test_mp3_padding_payload(self, tmp_path, mp3_stream, encrypted_zip):
        payload = PayloadSpec(encrypted_zip, PayloadType.ZIP, EmbedMode.FRAMED)
        path = tmp_path / "stego.mp3"
        path.write_bytes(embed_mp3_meta(mp3_stream, payload, EmbedLocation.ID3_PADDING))
        report = run_pipeline(path, times=FIXED_TIMES, now=5000.0)

        assert report.format == "mp3"
        assert report.is_positive
        assert report.verdict_of(Stage.SAF) is Verdict.NOT_RUN
        padding_hits = [
            h for h in report.signature_hits if h.source_plane is SourcePlane.ID3_PADDING
        ]
        assert [(h.offset, h.type_id) for h in padding_hits][:2] == [(0, "framed"), (13, "zip")]

    def test_clean_mp3(self, tmp_path, mp3_bytes):
        path = tmp_path / "clean.mp3"
        path.write_bytes(mp3_bytes)
        report = run_pipeline(path, times=FIXED_TIMES, now=5000.0)
        assert not report.is_positive
        assert report.signature_hits == []

    def test_hash_stage(self, tmp_path, clean_wav_bytes):
        """A working copy that differs from the database is flagged."""
        original = tmp_path / "original"
        original.mkdir()
        (original / "clean.wav").write_bytes(clean_wav_bytes)
        db = build_db(original, tmp_path / "hashes.db")

        working = tmp_path / "clean.wav"
        working.write_bytes(clean_wav_bytes)
        report = run_pipeline(working, db, times=FIXED_TIMES, now=5000.0)
        assert report.verdict_of(Stage.HASH) is Verdict.CLEAN
        assert not report.hash_mismatch

        tampered = bytearray(clean_wav_bytes)
        tampered[-1] ^= 0x10
        working.write_bytes(bytes(tampered))
        report = run_pipeline(working, db, times=FIXED_TIMES, now=5000.0)
        assert report.verdict_of(Stage.HASH) is Verdict.POSITIVE
        assert report.hash_mismatch

    def test_reference_audio(self, tmp_path, stego_wav_bytes):
        """FCA runs when a reference of the same shape is supplied."""
        from stegsift.corpus import CarrierKind, synthesize_carrier

        reference = tmp_path / "reference.wav"
        reference.write_bytes(encode_wav(synthesize_carrier(CarrierKind.SINE_TONE, 1.0)))
        path = tmp_path / "stego.wav"
        path.write_bytes(stego_wav_bytes)
        report = run_pipeline(path, reference_audio=reference, times=FIXED_TIMES, now=5000.0)

        fca = report.stage(Stage.FCA)
        assert fca.ran
        assert fca.detail["snr_db"] > 60

    def test_custom_thresholds_recorded(self, tmp_path, clean_wav_bytes):
        path = tmp_path / "clean.wav"
        path.write_bytes(clean_wav_bytes)
        config = DetectionConfig()
        config.apply_override("saf=0.8")
        report = run_pipeline(path, config=config, times=FIXED_TIMES, now=5000.0)
        assert report.thresholds["SAF"]["positive"] == 0.8

    def test_malformed(self, tmp_path):
        path = tmp_path / "broken.wav"
        path.write_bytes(b"RIFF" + bytes(60))
        with pytest.raises(MalformedContainerError):
            run_pipeline(path)
