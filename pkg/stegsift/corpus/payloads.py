"""
Seeded payload synthesis.

Every generator hits the requested size exactly: text is truncated,
PNG images are padded with a tEXt chunk, and archives are stored
(uncompressed) with a filler member sized to close the gap.
"""

from __future__ import annotations

import io

import numpy as np
from PIL import Image
from PIL.PngImagePlugin import PngInfo

from stegsift.corpus.config import PayloadKind
from stegsift.exceptions import SizeTooSmallError
from stegsift.recovery.zipcrack import Wordlist
from stegsift.recovery.zipcrypto import (
    ENCRYPTION_HEADER_SIZE,
    METHOD_STORED,
    ZipMember,
    write_zip,
)
from stegsift.stego.payload import EmbedMode, PayloadSpec, PayloadType

DECLARED_TYPES = {
    PayloadKind.TXT: PayloadType.TXT,
    PayloadKind.TXT_ENCRYPTED: PayloadType.UNKNOWN,
    PayloadKind.DOCX: PayloadType.DOCX,
    PayloadKind.PNG: PayloadType.PNG,
    PayloadKind.ZIP: PayloadType.ZIP,
    PayloadKind.ZIP_ENCRYPTED: PayloadType.ZIP,
}

MIN_ENCRYPTED_TXT = 16
PNG_TEXT_KEY = "Comment"
PNG_EDGE = 4
ZIP_NOTE_SIZE = 48

_LOCAL_HEADER = 30
_CENTRAL_HEADER = 46
_EOCD = 22

_WORDS = (
    "audio evidence sample carrier forensic archive report signal record "
    "frame channel hidden layer witness review system noise window spectrum "
    "digest stream header offset payload format session backup invoice memo "
    "meeting schedule project draft budget summary contact address notes"
).split()

_CONTENT_TYPES = (
    '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>\n'
    '<Types xmlns="http://schemas.openxmlformats.org/package/2006/content-types">'
    '<Default Extension="rels" '
    'ContentType="application/vnd.openxmlformats-package.relationships+xml"/>'
    '<Default Extension="xml" ContentType="application/xml"/>'
    '<Override PartName="/word/document.xml" ContentType="application/'
    'vnd.openxmlformats-officedocument.wordprocessingml.document.main+xml"/>'
    "</Types>"
).encode("utf-8")

_RELS = (
    '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>\n'
    '<Relationships xmlns="http://schemas.openxmlformats.org/package/2006/relationships">'
    '<Relationship Id="rId1" Type="http://schemas.openxmlformats.org/officeDocument/'
    '2006/relationships/officeDocument" Target="word/document.xml"/>'
    "</Relationships>"
).encode("utf-8")

_DOCUMENT_HEAD = (
    '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>\n'
    '<w:document xmlns:w="http://schemas.openxmlformats.org/wordprocessingml/2006/main">'
    "<w:body><w:p><w:r><w:t>"
).encode("utf-8")
_DOCUMENT_TAIL = b"</w:t></w:r></w:p></w:body></w:document>"


def _text(size: int, rng: np.random.Generator) -> bytes:
    """Seeded printable ASCII prose, exactly size bytes."""
    if size <= 0:
        return b""
    chunks: list[str] = []
    length = 0
    while length < size:
        words = [_WORDS[i] for i in rng.integers(0, len(_WORDS), size=size // 4 + 8)]
        chunk = " ".join(words) + ". "
        chunks.append(chunk)
        length += len(chunk)
    return "".join(chunks).encode("ascii")[:size]


def _archive_overhead(names: list[str], encrypted: bool) -> int:
    overhead = _EOCD
    for name in names:
        n = len(name.encode("utf-8"))
        overhead += _LOCAL_HEADER + _CENTRAL_HEADER + 2 * n
        if encrypted:
            overhead += ENCRYPTION_HEADER_SIZE
    return overhead


def _zip(size: int, rng: np.random.Generator, password: str | None) -> bytes:
    names = ["notes.txt", "data.bin"]
    encrypted = password is not None
    fixed = _archive_overhead(names, encrypted) + ZIP_NOTE_SIZE
    filler = size - fixed
    kind = PayloadKind.ZIP_ENCRYPTED if encrypted else PayloadKind.ZIP
    if filler < 1:
        raise SizeTooSmallError(kind.value, size, fixed + 1)

    members = [
        ZipMember(names[0], _text(ZIP_NOTE_SIZE, rng)),
        ZipMember(names[1], rng.bytes(filler)),
    ]
    return write_zip(
        members,
        password=password.encode("utf-8") if encrypted else None,
        method=METHOD_STORED,
        random_bytes=rng.bytes,
    )


def _docx(size: int, rng: np.random.Generator) -> bytes:
    names = ["[Content_Types].xml", "_rels/.rels", "word/document.xml"]
    fixed = (
        _archive_overhead(names, encrypted=False)
        + len(_CONTENT_TYPES)
        + len(_RELS)
        + len(_DOCUMENT_HEAD)
        + len(_DOCUMENT_TAIL)
    )
    filler = size - fixed
    if filler < 1:
        raise SizeTooSmallError(PayloadKind.DOCX.value, size, fixed + 1)

    document = _DOCUMENT_HEAD + _text(filler, rng) + _DOCUMENT_TAIL
    members = [
        ZipMember(names[0], _CONTENT_TYPES),
        ZipMember(names[1], _RELS),
        ZipMember(names[2], document),
    ]
    return write_zip(members, method=METHOD_STORED)


def _save_png(image: Image.Image, info: PngInfo | None = None) -> bytes:
    buffer = io.BytesIO()
    if info is None:
        image.save(buffer, format="PNG")
    else:
        image.save(buffer, format="PNG", pnginfo=info)
    return buffer.getvalue()


def _png(size: int, rng: np.random.Generator) -> bytes:
    pixels = rng.integers(0, 256, size=(PNG_EDGE, PNG_EDGE, 3), dtype=np.uint8)
    image = Image.fromarray(pixels)
    base = _save_png(image)
    # tEXt chunk: length + type + keyword + NUL separator + text + CRC
    overhead = 12 + len(PNG_TEXT_KEY) + 1
    filler = size - len(base) - overhead
    if filler < 1:
        raise SizeTooSmallError(PayloadKind.PNG.value, size, len(base) + overhead + 1)

    info = PngInfo()
    info.add_text(PNG_TEXT_KEY, _text(filler, rng).decode("ascii"))
    return _save_png(image, info)


def pick_password(seed: int | np.random.SeedSequence, wordlist: Wordlist | None = None) -> str:
    """Deterministically draw a password from the build wordlist."""
    wordlist = wordlist or Wordlist.bundled()
    rng = np.random.default_rng(seed)
    return wordlist.entries[int(rng.integers(0, len(wordlist)))]


def generate_payload(
    kind: PayloadKind | str,
    size: int,
    seed: int | np.random.SeedSequence,
    *,
    mode: EmbedMode = EmbedMode.FRAMED,
    password: str | None = None,
) -> PayloadSpec:
    """
    Build a payload of exactly size bytes.

    zip_encrypted uses password, or one drawn with pick_password(seed).

    Raises:
        SizeTooSmallError: size below the structural minimum for kind
    """
    kind = PayloadKind(kind)
    rng = np.random.default_rng(seed)

    if kind is PayloadKind.TXT:
        if size < 1:
            raise SizeTooSmallError(kind.value, size, 1)
        data = _text(size, rng)
    elif kind is PayloadKind.TXT_ENCRYPTED:
        if size < MIN_ENCRYPTED_TXT:
            raise SizeTooSmallError(kind.value, size, MIN_ENCRYPTED_TXT)
        data = rng.bytes(size)
    elif kind is PayloadKind.PNG:
        data = _png(size, rng)
    elif kind is PayloadKind.DOCX:
        data = _docx(size, rng)
    elif kind is PayloadKind.ZIP:
        data = _zip(size, rng, None)
    else:
        data = _zip(size, rng, password or pick_password(seed))

    return PayloadSpec(data, DECLARED_TYPES[kind], EmbedMode(mode))
