"""
File digests (MD5, SHA-1, SHA-256).
"""

from __future__ import annotations

import hashlib
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

from stegsift.exceptions import IOFailureError


CHUNK_SIZE = 1 << 20


@dataclass(frozen=True)
class Digests:
    md5: str
    sha256: str
    sha1: str | None = None

    def get(self, algorithm: str) -> str:
        value = getattr(self, algorithm, None)
        if value is None:
            raise ValueError(f"Digest '{algorithm}' not available")
        return value

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def compute_digests(data: bytes) -> Digests:
    return Digests(
        md5=hashlib.md5(data).hexdigest(),
        sha256=hashlib.sha256(data).hexdigest(),
        sha1=hashlib.sha1(data).hexdigest(),
    )


def digest_file(path: Path | str) -> Digests:
    """Digest a file in fixed-size chunks."""
    md5, sha1, sha256 = hashlib.md5(), hashlib.sha1(), hashlib.sha256()
    try:
        with open(path, "rb") as fh:
            for chunk in iter(lambda: fh.read(CHUNK_SIZE), b""):
                md5.update(chunk)
                sha1.update(chunk)
                sha256.update(chunk)
    except OSError as e:
        raise IOFailureError(str(path), e.strerror or str(e)) from e
    return Digests(md5=md5.hexdigest(), sha256=sha256.hexdigest(), sha1=sha1.hexdigest())
