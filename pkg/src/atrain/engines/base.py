"""Engine contracts.

An engine instance serves one job at a time; construction may be slow
(model load) and callers should surface it as its own progress phase.
"""

from __future__ import annotations

from typing import Callable, Protocol, runtime_checkable

from ..media import CanonicalAudio
from ..models import ModelSpec
from .types import SpeakerTurn, TranscriptSegment

# Called with a fraction in [0, 1]; may raise to cancel cooperatively.
ProgressFn = Callable[[float], None]


@runtime_checkable
class Transcriber(Protocol):
    def transcribe(
        self,
        audio: CanonicalAudio,
        model: ModelSpec,
        language: str = "auto",
        translate: bool = False,
        progress: ProgressFn | None = None,
    ) -> list[TranscriptSegment]:
        """Speech to timestamped segments with word-level times."""
        ...


@runtime_checkable
class Diarizer(Protocol):
    def diarize(
        self,
        audio: CanonicalAudio,
        num_speakers: int | str = "auto",
        progress: ProgressFn | None = None,
    ) -> list[SpeakerTurn]:
        """Who spoke when; labels dense from SPEAKER_00 upward."""
        ...


class EngineFactory(Protocol):
    """Builds per-job engine instances and resolves model specs."""

    def model_spec(self, model_id: str) -> ModelSpec: ...

    def make_transcriber(self, model: ModelSpec, device: str) -> Transcriber: ...

    def make_diarizer(self, device: str) -> Diarizer: ...


def interpolate_words(text: str, start_s: float, end_s: float) -> list:
    """Spread words uniformly by character count across [start_s, end_s].

    Fallback for backends that return segment text without word timings.
    """
    from .types import WordToken

    tokens = [t for t in text.split() if t.strip()]
    if not tokens:
        return []
    total_chars = sum(len(t) for t in tokens)
    span = max(0.0, end_s - start_s)
    words = []
    cursor = start_s
    consumed = 0
    for token in tokens:
        consumed += len(token)
        word_end = start_s + span * (consumed / total_chars)
        words.append(WordToken(start_s=cursor, end_s=word_end, text=token, confidence=1.0))
        cursor = word_end
    return words
