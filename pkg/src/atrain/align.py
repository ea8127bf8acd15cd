"""Attach speaker labels to recognized words and segments.

Diarization answers "who spoke when" as a list of labeled time intervals;
ASR answers "what was said when" as words and segments. This module joins
the two by temporal overlap:

* each word takes the label of the turn it overlaps most, with
  deterministic tie-breaking (earliest turn start, then smallest label);
* words overlapping no turn fall back to the nearest turn when the gap is
  small enough, otherwise they stay UNKNOWN;
* each segment takes the label that owns the most spoken time among its
  words, the earliest word breaking ties.

All functions are pure; identical inputs give identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .engines.types import SpeakerTurn, TranscriptSegment

UNKNOWN = "UNKNOWN"

DEFAULT_GAP_TOLERANCE_S = 2.0


@dataclass(frozen=True)
class AlignedWord:
    """A word token plus the speaker it was attributed to.

    ``speaker`` is None only in transcripts produced with diarization
    disabled; an undecidable word inside a diarized run is UNKNOWN.
    """

    start_s: float
    end_s: float
    text: str
    confidence: float
    speaker: str | None

    @property
    def duration_s(self) -> float:
        return self.end_s - self.start_s


@dataclass
class AlignedSegment:
    id: int
    start_s: float
    end_s: float
    text: str
    words: list[AlignedWord]
    speaker: str | None


@dataclass
class AlignedTranscript:
    """The unit every exporter consumes.

    ``diarization_enabled`` False means speaker fields are absent (None)
    throughout, not UNKNOWN.
    """

    segments: list[AlignedSegment]
    speaker_count_used: int | None
    diarization_enabled: bool


def interval_overlap(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Width of the intersection of two [start, end] intervals, >= 0."""
    a_start, a_end = a
    b_start, b_end = b
    if a_start > a_end or b_start > b_end:
        raise ValueError("interval start must not exceed its end")
    return max(0.0, min(a_end, b_end) - max(a_start, b_start))


def _interval_gap(start_s: float, end_s: float, turn: SpeakerTurn) -> float:
    """Boundary gap between a disjoint interval and a turn; 0 when touching."""
    return max(turn.start_s - end_s, start_s - turn.end_s, 0.0)


def _assign_interval(
    start_s: float,
    end_s: float,
    turns: Sequence[SpeakerTurn],
    gap_tolerance_s: float,
) -> str:
    """Label for one time interval under the overlap-then-nearest rule."""
    if not turns:
        return UNKNOWN

    best_turn = None
    best_key = None
    for turn in turns:
        overlap = interval_overlap((start_s, end_s), (turn.start_s, turn.end_s))
        if overlap <= 0.0:
            continue
        key = (-overlap, turn.start_s, turn.speaker)
        if best_key is None or key < best_key:
            best_key = key
            best_turn = turn
    if best_turn is not None:
        return best_turn.speaker

    nearest = min(turns, key=lambda t: (_interval_gap(start_s, end_s, t), t.start_s, t.speaker))
    if _interval_gap(start_s, end_s, nearest) <= gap_tolerance_s:
        return nearest.speaker
    return UNKNOWN


def assign_word_speakers(
    words: Sequence,
    turns: Sequence[SpeakerTurn],
    gap_tolerance_s: float = DEFAULT_GAP_TOLERANCE_S,
) -> list[AlignedWord]:
    """Label every word with the turn it overlaps most.

    Ties break toward the earliest turn start, then the lexicographically
    smallest label. A word with zero overlap against every turn takes the
    nearest turn's label when its boundary gap is within
    ``gap_tolerance_s``, else UNKNOWN. Empty turns mean all UNKNOWN.
    """
    return [
        AlignedWord(
            start_s=w.start_s,
            end_s=w.end_s,
            text=w.text,
            confidence=w.confidence,
            speaker=_assign_interval(w.start_s, w.end_s, turns, gap_tolerance_s),
        )
        for w in words
    ]


def assign_segment_speakers(
    segments: Sequence[TranscriptSegment],
    words_per_segment: Sequence[Sequence[AlignedWord]],
    turns: Sequence[SpeakerTurn],
    gap_tolerance_s: float = DEFAULT_GAP_TOLERANCE_S,
) -> AlignedTranscript:
    """Vote a speaker per segment from its already-labeled words.

    The label with the largest summed word duration wins; on a tie the
    earliest word carrying one of the tied labels decides. A segment whose
    words are all UNKNOWN (or that has no words) is treated as a single
    pseudo-word spanning the segment interval and assigned by the word rule.
    """
    if len(segments) != len(words_per_segment):
        raise ValueError("one word list per segment required")

    aligned_segments = []
    for segment, words in zip(segments, words_per_segment):
        speaker = _vote_segment_speaker(segment, list(words), turns, gap_tolerance_s)
        aligned_segments.append(
            AlignedSegment(
                id=segment.id,
                start_s=segment.start_s,
                end_s=segment.end_s,
                text=segment.text,
                words=list(words),
                speaker=speaker,
            )
        )
    return AlignedTranscript(
        segments=aligned_segments,
        speaker_count_used=len({turn.speaker for turn in turns}),
        diarization_enabled=True,
    )


def _vote_segment_speaker(
    segment: TranscriptSegment,
    words: list[AlignedWord],
    turns: Sequence[SpeakerTurn],
    gap_tolerance_s: float,
) -> str:
    known = [w for w in words if w.speaker is not None and w.speaker != UNKNOWN]
    if not known:
        return _assign_interval(segment.start_s, segment.end_s, turns, gap_tolerance_s)

    durations: dict[str, float] = {}
    for w in known:
        durations[w.speaker] = durations.get(w.speaker, 0.0) + w.duration_s
    top = max(durations.values())
    tied = {label for label, total in durations.items() if total == top}
    if len(tied) == 1:
        return next(iter(tied))
    for w in sorted(known, key=lambda w: w.start_s):
        if w.speaker in tied:
            return w.speaker
    return min(tied)  # unreachable; keeps the function total


def align_transcript(
    segments: Sequence[TranscriptSegment],
    turns: Sequence[SpeakerTurn],
    gap_tolerance_s: float = DEFAULT_GAP_TOLERANCE_S,
) -> AlignedTranscript:
    """Full alignment step: label words, then vote per segment."""
    words_per_segment = [
        assign_word_speakers(segment.words, turns, gap_tolerance_s) for segment in segments
    ]
    return assign_segment_speakers(segments, words_per_segment, turns, gap_tolerance_s)


def unaligned_transcript(segments: Sequence[TranscriptSegment]) -> AlignedTranscript:
    """Transcript with diarization disabled: every speaker field is absent."""
    aligned_segments = [
        AlignedSegment(
            id=segment.id,
            start_s=segment.start_s,
            end_s=segment.end_s,
            text=segment.text,
            words=[
                AlignedWord(
                    start_s=w.start_s,
                    end_s=w.end_s,
                    text=w.text,
                    confidence=w.confidence,
                    speaker=None,
                )
                for w in segment.words
            ],
            speaker=None,
        )
        for segment in segments
    ]
    return AlignedTranscript(
        segments=aligned_segments, speaker_count_used=None, diarization_enabled=False
    )
