"""Timestamped units exchanged between the engines and the rest of the pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field


def speaker_label(index: int) -> str:
    """Normalized diarization label, dense from SPEAKER_00 upward."""
    return f"SPEAKER_{index:02d}"


@dataclass(frozen=True)
class WordToken:
    """One recognized word with its time span and confidence."""

    start_s: float
    end_s: float
    text: str
    confidence: float

    def __post_init__(self):
        if not 0 <= self.start_s <= self.end_s:
            raise ValueError(f"word times out of order: [{self.start_s}, {self.end_s}]")
        if not self.text.strip():
            raise ValueError("word text must be non-empty")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")

    @property
    def duration_s(self) -> float:
        return self.end_s - self.start_s


# Words may spill slightly past their segment bounds; anything beyond this is a bug.
WORD_SLACK_S = 0.5


@dataclass
class TranscriptSegment:
    """One utterance-level unit of ASR output with its word list."""

    id: int
    start_s: float
    end_s: float
    text: str
    words: list[WordToken] = field(default_factory=list)

    def __post_init__(self):
        if self.start_s > self.end_s:
            raise ValueError(f"segment times out of order: [{self.start_s}, {self.end_s}]")
        lo = self.start_s - WORD_SLACK_S
        hi = self.end_s + WORD_SLACK_S
        prev_start = None
        for word in self.words:
            if word.start_s < lo or word.end_s > hi:
                raise ValueError(
                    f"word [{word.start_s}, {word.end_s}] outside segment "
                    f"[{self.start_s}, {self.end_s}] (+/- {WORD_SLACK_S}s)"
                )
            if prev_start is not None and word.start_s < prev_start:
                raise ValueError("word starts must be nondecreasing")
            prev_start = word.start_s


@dataclass(frozen=True)
class SpeakerTurn:
    """A contiguous time interval attributed to one speaker."""

    start_s: float
    end_s: float
    speaker: str

    def __post_init__(self):
        if not self.start_s < self.end_s:
            raise ValueError(f"turn must have positive width: [{self.start_s}, {self.end_s}]")
        if not self.speaker:
            raise ValueError("speaker label must be non-empty")
