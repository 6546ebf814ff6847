"""
Evidence integrity: digests and the hash database.
"""

from stegsift.integrity.digests import Digests, compute_digests, digest_file
from stegsift.integrity.hashdb import (
    FindingStatus,
    HashDb,
    HashRecord,
    VerificationFinding,
    build_db,
    check_file,
    list_source_files,
    verify_against_db,
)

__all__ = [
    "Digests",
    "compute_digests",
    "digest_file",
    "FindingStatus",
    "HashDb",
    "HashRecord",
    "VerificationFinding",
    "build_db",
    "check_file",
    "list_source_files",
    "verify_against_db",
]
