"""Tests for carving, the ZipCrypto writer/cracker and artifact extraction."""

import io
import struct
import time
import zipfile
import zlib

import numpy as np
import pytest

from stegsift.container import encode_wav
from stegsift.corpus import CarrierKind, PayloadKind, generate_payload, synthesize_carrier
from stegsift.detection import SignatureHit, SourcePlane, run_pipeline
from stegsift.detection.timestamps import FileTimes
from stegsift.exceptions import (
    BoundaryNotFoundError,
    ConfigurationError,
    ExhaustedError,
    IOFailureError,
    NotEncryptedError,
    UnsupportedEncryptionError,
)
from stegsift.recovery import (
    EXTRACTION_LOG_COLUMNS,
    Wordlist,
    ZipCryptoCipher,
    ZipMember,
    carve,
    encrypted_entries,
    extension_for,
    extract_all,
    find_end,
    identify_type,
    is_encrypted_zip,
    read_extraction_log,
    write_extraction_log,
    write_zip,
    zip_brute_force,
)
from stegsift.recovery.extractor import safe_member_name
from stegsift.stego import EmbedPlan, PayloadSpec, embed_wav_lsb, frame_payload


TIMES = FileTimes(1000.0, 2000.0, 3000.0)


def _hit(offset: int, type_id: str) -> SignatureHit:
    return SignatureHit(offset, type_id, SourcePlane.RAW_BYTES)


# ============================================================================
# ZipCrypto
# ============================================================================

class TestZipCrypto:
    """Test the archive writer against the standard-library reader."""

    def test_cipher_round_trip(self):
        data = b"attack at dawn" * 10
        encrypted = ZipCryptoCipher(b"pw").encrypt(data)
        assert encrypted != data
        assert ZipCryptoCipher(b"pw").decrypt(encrypted) == data

    def test_plain_archive_readable(self, plain_zip):
        with zipfile.ZipFile(io.BytesIO(plain_zip)) as archive:
            assert archive.namelist() == ["hello.txt", "data.bin"]
            assert archive.read("hello.txt") == b"hello world\n"
            assert archive.testzip() is None

    def test_encrypted_archive_readable(self, encrypted_zip):
        """zipfile decrypts our entries with the right password."""
        with zipfile.ZipFile(io.BytesIO(encrypted_zip)) as archive:
            assert archive.read("notes.txt", pwd=b"secret") == b"meet at the usual place\n" * 4
            with pytest.raises((RuntimeError, zipfile.BadZipFile, zlib.error)):
                archive.read("notes.txt", pwd=b"wrong-password")

    def test_deterministic(self):
        """Same random source, same bytes."""
        members = [ZipMember("a.txt", b"content")]
        first = write_zip(members, password=b"pw", random_bytes=np.random.default_rng(9).bytes)
        second = write_zip(members, password=b"pw", random_bytes=np.random.default_rng(9).bytes)
        assert first == second

    def test_password_requires_random_source(self):
        with pytest.raises(ValueError):
            write_zip([ZipMember("a.txt", b"x")], password=b"pw")

    def test_encrypted_entries(self, plain_zip, encrypted_zip):
        assert [i.filename for i in encrypted_entries(encrypted_zip)] == ["notes.txt"]
        assert encrypted_entries(plain_zip) == []
        assert is_encrypted_zip(encrypted_zip)
        assert not is_encrypted_zip(plain_zip)
        assert not is_encrypted_zip(b"not a zip")


class TestBruteForce:
    """Test the dictionary attack."""

    def test_found_on_third_attempt(self, encrypted_zip):
        result = zip_brute_force(encrypted_zip, Wordlist(["a", "b", "secret"]))
        assert result.password == "secret"
        assert result.attempts == 3
        assert result.members == {"notes.txt": b"meet at the usual place\n" * 4}

    def test_budget_exhausted(self, encrypted_zip):
        with pytest.raises(ExhaustedError) as exc_info:
            zip_brute_force(encrypted_zip, Wordlist(["a", "b", "secret"]), budget=2)
        assert exc_info.value.details["attempts"] == 2

    def test_not_in_wordlist(self, encrypted_zip):
        with pytest.raises(ExhaustedError):
            zip_brute_force(encrypted_zip, Wordlist(["alpha", "bravo", "charlie"]))

    def test_bundled_wordlist(self, encrypted_zip):
        words = Wordlist.bundled()
        assert "secret" in words.entries
        assert zip_brute_force(encrypted_zip, words).password == "secret"

    def test_thousand_word_list(self, encrypted_zip):
        """The password at a random position in 1000 words is found quickly."""
        rng = np.random.default_rng(811)
        words = [f"word{i:04d}" for i in range(999)]
        position = int(rng.integers(0, 1000))
        words.insert(position, "secret")

        started = time.perf_counter()
        result = zip_brute_force(encrypted_zip, Wordlist(words))
        assert time.perf_counter() - started < 10.0
        assert result.password == "secret"
        assert result.attempts == position + 1

    def test_check_byte_collisions_rejected(self, encrypted_zip):
        """Candidates that pass the one-byte header check still fail on CRC."""
        words = [f"cand{i:05d}" for i in range(10_000)]
        with pytest.raises(ExhaustedError) as exc_info:
            zip_brute_force(encrypted_zip, Wordlist(words))
        assert exc_info.value.details["attempts"] == 10_000

    def test_not_encrypted(self, plain_zip):
        with pytest.raises(NotEncryptedError):
            zip_brute_force(plain_zip, Wordlist(["secret"]))

    def test_empty_wordlist(self, encrypted_zip):
        with pytest.raises(ConfigurationError):
            zip_brute_force(encrypted_zip, Wordlist([]))

    def test_multiple_entries(self):
        """Every encrypted entry must decrypt for a candidate to count."""
        rng = np.random.default_rng(4)
        data = write_zip(
            [ZipMember("one.txt", b"first member"), ZipMember("two.txt", b"second member" * 3)],
            password=b"letmein",
            random_bytes=rng.bytes,
        )
        result = zip_brute_force(data, Wordlist(["password", "letmein"]))
        assert result.attempts == 2
        assert set(result.members) == {"one.txt", "two.txt"}

    def test_aes_unsupported(self, encrypted_zip):
        """Entries using the AES method code are refused."""
        data = bytearray(encrypted_zip)
        struct.pack_into("<H", data, 8, 99)
        central = data.find(b"PK\x01\x02")
        struct.pack_into("<H", data, central + 10, 99)
        with pytest.raises(UnsupportedEncryptionError):
            zip_brute_force(bytes(data), Wordlist(["secret"]))

    def test_wordlist_file(self, tmp_path):
        """Lines keep their order; CRLF endings and blank lines are dropped."""
        path = tmp_path / "words.txt"
        path.write_bytes(b"alpha\r\n\r\nbravo\ncharlie\n")
        words = Wordlist.from_file(path)
        assert words.entries == ["alpha", "bravo", "charlie"]
        assert words.source == str(path)

    def test_wordlist_missing(self, tmp_path):
        with pytest.raises(ConfigurationError):
            Wordlist.from_file(tmp_path / "missing.txt")


# ============================================================================
# Carving
# ============================================================================

class TestCarving:
    """Test boundary-aware carving."""

    def test_zip_exact(self, plain_zip):
        """A ZIP is cut at the end of its EOCD record."""
        stream = b"junk" + plain_zip + b"trailing garbage"
        carving = carve(_hit(4, "zip"), stream)
        assert carving.data == plain_zip
        assert (carving.start, carving.end) == (4, 4 + len(plain_zip))
        assert not carving.truncated

    def test_png_exact(self):
        png = generate_payload(PayloadKind.PNG, 400, 11).data
        stream = bytes(10) + png + bytes(50)
        carving = carve(_hit(10, "png"), stream)
        assert carving.data == png
        assert len(carving.data) == 400

    def test_framed_exact(self, text_payload):
        framed = frame_payload(text_payload)
        stream = framed + bytes(100)
        assert find_end("framed", stream, 0) == len(framed)

    def test_riff_exact(self, sine_audio):
        wav = encode_wav(sine_audio.with_samples(sine_audio.samples[:100]))
        assert carve(_hit(3, "riff_wav"), b"abc" + wav + b"xyz").data == wav

    def test_truncated_zip(self, plain_zip):
        """Without an EOCD the carve runs to end of stream."""
        stream = plain_zip[:-22] + b"more bytes"
        carving = carve(_hit(0, "zip"), stream)
        assert carving.truncated
        assert carving.data == stream

    def test_no_rule(self):
        with pytest.raises(BoundaryNotFoundError):
            find_end("pdf", b"%PDF-1.4 ...", 0)
        assert carve(_hit(0, "pdf"), b"%PDF-1.4 ...").truncated

    def test_framed_past_end(self, text_payload):
        with pytest.raises(BoundaryNotFoundError):
            find_end("framed", frame_payload(text_payload)[:100], 0)


class TestIdentifyType:
    def test_zip(self, plain_zip):
        assert identify_type(plain_zip) == "zip"

    def test_docx(self):
        docx = generate_payload(PayloadKind.DOCX, 2000, 3).data
        assert identify_type(docx) == "docx"

    def test_png(self):
        assert identify_type(generate_payload(PayloadKind.PNG, 300, 1).data) == "png"

    def test_unknown(self):
        assert identify_type(b"plain words") == "unknown"

    def test_extensions(self):
        assert extension_for("sevenz") == "7z"
        assert extension_for("unknown") == "bin"
        assert extension_for("zip") == "zip"


# ============================================================================
# Extraction
# ============================================================================

class TestExtractAll:
    """Test artifact extraction from scanned files."""

    @pytest.fixture
    def stego_wav(self, tmp_path, stego_wav_bytes):
        path = tmp_path / "working" / "stego.wav"
        path.parent.mkdir()
        path.write_bytes(stego_wav_bytes)
        return path

    def test_framed_zip_with_wordlist(self, tmp_path, stego_wav, encrypted_zip):
        """The frame is deframed, the nested ZIP hit skipped, the archive cracked."""
        report = run_pipeline(stego_wav, times=TIMES, now=5000.0)
        out = tmp_path / "out"
        artifacts = extract_all(report, stego_wav, out, wordlist=Wordlist(["a", "secret"]))

        assert len(artifacts) == 1
        artifact = artifacts[0]
        assert artifact.type_id == "zip"
        assert artifact.plane is SourcePlane.LSB_PLANE
        assert artifact.carve_offset == 0
        assert artifact.output_path == out / "extracted" / "stego_lsb_plane_0.zip"
        assert artifact.output_path.read_bytes() == encrypted_zip
        assert artifact.decrypted
        assert artifact.password == "secret"
        decrypted = out / "extracted" / "stego_lsb_plane_0_decrypted" / "notes.txt"
        assert decrypted.read_bytes() == b"meet at the usual place\n" * 4

    def test_without_wordlist(self, tmp_path, stego_wav):
        report = run_pipeline(stego_wav, times=TIMES, now=5000.0)
        artifacts = extract_all(report, stego_wav, tmp_path / "out")
        assert not artifacts[0].decrypted
        assert any("no wordlist" in note for note in artifacts[0].notes)

    def test_carrier_untouched(self, tmp_path, stego_wav, stego_wav_bytes):
        report = run_pipeline(stego_wav, times=TIMES, now=5000.0)
        extract_all(report, stego_wav, tmp_path / "out")
        assert stego_wav.read_bytes() == stego_wav_bytes

    def test_crc_mismatch_noted(self, tmp_path, text_payload):
        """A damaged frame is still carved, with a note."""
        frame = bytearray(frame_payload(text_payload))
        frame[20] ^= 0x01
        carrier = synthesize_carrier(CarrierKind.SINE_TONE, 1.0)
        path = tmp_path / "damaged.wav"
        path.write_bytes(encode_wav(embed_wav_lsb(carrier, PayloadSpec(bytes(frame)), EmbedPlan())))

        report = run_pipeline(path, times=TIMES, now=5000.0)
        artifacts = extract_all(report, path, tmp_path / "out")
        framed = [a for a in artifacts if a.carve_offset == 0 and a.bits_per_sample == 1]
        assert framed
        assert any("CRC mismatch" in note for note in framed[0].notes)
        assert framed[0].length == len(text_payload.data)

    def test_missing_carrier(self, tmp_path, stego_wav):
        report = run_pipeline(stego_wav, times=TIMES, now=5000.0)
        with pytest.raises(IOFailureError):
            extract_all(report, tmp_path / "gone.wav", tmp_path / "out")

    def test_extraction_log(self, tmp_path, stego_wav):
        report = run_pipeline(stego_wav, times=TIMES, now=5000.0)
        artifacts = extract_all(report, stego_wav, tmp_path / "out", wordlist=Wordlist(["secret"]))
        log = tmp_path / "out" / "extraction_log.csv"
        write_extraction_log(artifacts, log)

        rows = read_extraction_log(log)
        assert list(rows[0]) == EXTRACTION_LOG_COLUMNS
        assert rows[0]["source"] == "stego.wav"
        assert rows[0]["decrypted"] == "true"
        assert rows[0]["password_present"] == "true"

    def test_missing_log_reads_empty(self, tmp_path):
        assert read_extraction_log(tmp_path / "none.csv") == []

    @pytest.mark.parametrize(
        "name,expected",
        [("notes.txt", "notes.txt"), ("../../etc/passwd", "etc_passwd"), ("a/b.txt", "a_b.txt")],
    )
    def test_safe_member_name(self, name, expected):
        assert safe_member_name(name) == expected
