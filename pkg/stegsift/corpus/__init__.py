"""
Deterministic evaluation corpus: synthetic carriers, seeded payloads and
a ground-truth manifest.
"""

from stegsift.corpus.carriers import (
    CarrierKind,
    mp3_frame_count,
    synthesize_carrier,
    synthesize_mp3_carrier,
)
from stegsift.corpus.config import CorpusConfig, CorpusPreset, DurationSchedule, PayloadKind
from stegsift.corpus.factory import (
    CorpusLayout,
    clean_indices,
    duration_schedule,
    generate_corpus,
    payload_size,
)
from stegsift.corpus.payloads import generate_payload, pick_password

__all__ = [
    "CarrierKind",
    "mp3_frame_count",
    "synthesize_carrier",
    "synthesize_mp3_carrier",
    "CorpusConfig",
    "CorpusPreset",
    "DurationSchedule",
    "PayloadKind",
    "CorpusLayout",
    "clean_indices",
    "duration_schedule",
    "generate_corpus",
    "payload_size",
    "generate_payload",
    "pick_password",
]
