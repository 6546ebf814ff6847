"""
Payload recovery: carving, ZipCrypto brute force and artifact extraction.
"""

from stegsift.recovery.carving import Carving, carve, extension_for, find_end, identify_type
from stegsift.recovery.extractor import (
    EXTRACTION_LOG_COLUMNS,
    ExtractedArtifact,
    extract_all,
    read_extraction_log,
    write_extraction_log,
)
from stegsift.recovery.zipcrack import (
    CrackResult,
    Wordlist,
    encrypted_entries,
    is_encrypted_zip,
    zip_brute_force,
)
from stegsift.recovery.zipcrypto import ZipCryptoCipher, ZipMember, write_zip

__all__ = [
    "Carving",
    "carve",
    "extension_for",
    "find_end",
    "identify_type",
    "EXTRACTION_LOG_COLUMNS",
    "ExtractedArtifact",
    "extract_all",
    "read_extraction_log",
    "write_extraction_log",
    "CrackResult",
    "Wordlist",
    "encrypted_entries",
    "is_encrypted_zip",
    "zip_brute_force",
    "ZipCryptoCipher",
    "ZipMember",
    "write_zip",
]
