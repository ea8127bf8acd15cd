"""ASR and diarization engine contracts plus their implementations."""

from ..models import ModelSpec
from .base import Diarizer, EngineFactory, ProgressFn, Transcriber, interpolate_words
from .device import detect_device, resolve_device
from .mock import MockDiarizer, MockEngineFactory, MockTranscriber
from .types import SpeakerTurn, TranscriptSegment, WordToken, speaker_label

__all__ = [
    "Diarizer",
    "EngineFactory",
    "MockDiarizer",
    "MockEngineFactory",
    "MockTranscriber",
    "ModelSpec",
    "ProgressFn",
    "SpeakerTurn",
    "Transcriber",
    "TranscriptSegment",
    "WordToken",
    "detect_device",
    "interpolate_words",
    "resolve_device",
    "speaker_label",
]
