"""Deterministic, offline engine implementations driven by sidecar files.

A fixture ``x.wav`` pairs with ``x.transcript.json`` (the raw-transcript
segment schema) and ``x.turns.json``. Same fixture + sidecar always yields
bit-identical output, which keeps every downstream test reproducible.

The transcriber can simulate load: ``delay_factor`` sleeps that fraction
of the recording length, which is what the benchmark harness calibrates
against.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

from ..errors import EngineFailureError, ModelNotInstalledError
from ..languages import validate_language
from ..media import CanonicalAudio
from ..models import ModelSpec
from .base import ProgressFn
from .types import SpeakerTurn, TranscriptSegment, WordToken, speaker_label

TRANSCRIPT_SIDECAR = ".transcript.json"
TURNS_SIDECAR = ".turns.json"

_SLEEP_SLICES = 10


def sidecar_path(source: Path, suffix: str) -> Path:
    return source.parent / (source.stem + suffix)


def load_transcript_sidecar(path: Path) -> list[TranscriptSegment]:
    payload = json.loads(path.read_text(encoding="utf-8"))
    segments = []
    for i, seg in enumerate(payload.get("segments", [])):
        words = [
            WordToken(
                start_s=w["start"],
                end_s=w["end"],
                text=w["text"],
                confidence=w.get("confidence", 1.0),
            )
            for w in seg.get("words", [])
        ]
        segments.append(
            TranscriptSegment(
                id=seg.get("id", i),
                start_s=seg["start"],
                end_s=seg["end"],
                text=seg["text"],
                words=words,
            )
        )
    return segments


def load_turns_sidecar(path: Path) -> list[SpeakerTurn]:
    payload = json.loads(path.read_text(encoding="utf-8"))
    return [
        SpeakerTurn(start_s=t["start"], end_s=t["end"], speaker=t["speaker"])
        for t in payload.get("turns", [])
    ]


def _find_sidecar(audio: CanonicalAudio, suffix: str) -> Path | None:
    for candidate_source in (audio.source_path, audio.wav_path):
        if candidate_source is None:
            continue
        candidate = sidecar_path(Path(candidate_source), suffix)
        if candidate.is_file():
            return candidate
    return None


def _sleep_with_progress(total_s: float, progress: ProgressFn | None) -> None:
    if total_s <= 0:
        if progress is not None:
            progress(1.0)
        return
    slice_s = total_s / _SLEEP_SLICES
    for i in range(_SLEEP_SLICES):
        time.sleep(slice_s)
        if progress is not None:
            progress((i + 1) / _SLEEP_SLICES)


class MockTranscriber:
    """Sidecar-driven ASR stand-in; empty transcript when no sidecar exists."""

    def __init__(
        self,
        delay_factor: float = 0.0,
        fail_with: str | None = None,
        fallback_sidecar: Path | None = None,
    ):
        self.delay_factor = delay_factor
        self.fail_with = fail_with
        self.fallback_sidecar = fallback_sidecar

    def transcribe(
        self,
        audio: CanonicalAudio,
        model: ModelSpec,
        language: str = "auto",
        translate: bool = False,
        progress: ProgressFn | None = None,
    ) -> list[TranscriptSegment]:
        if self.fail_with:
            raise EngineFailureError(self.fail_with)
        if not model.installed:
            raise ModelNotInstalledError(model.model_id)
        validate_language(language)
        _sleep_with_progress(self.delay_factor * audio.duration_s, progress)
        sidecar = _find_sidecar(audio, TRANSCRIPT_SIDECAR) or self.fallback_sidecar
        if sidecar is None or not sidecar.is_file():
            return []
        return load_transcript_sidecar(sidecar)


class MockDiarizer:
    """Sidecar-driven diarization stand-in.

    When a fixed speaker count is requested, sidecar labels are renumbered
    densely in order of first appearance and any surplus speakers collapse
    into the last allowed label, so the count contract always holds.
    """

    def __init__(
        self,
        delay_s: float = 0.0,
        fail_with: str | None = None,
        fallback_sidecar: Path | None = None,
    ):
        self.delay_s = delay_s
        self.fail_with = fail_with
        self.fallback_sidecar = fallback_sidecar

    def diarize(
        self,
        audio: CanonicalAudio,
        num_speakers: int | str = "auto",
        progress: ProgressFn | None = None,
    ) -> list[SpeakerTurn]:
        if self.fail_with:
            raise EngineFailureError(self.fail_with)
        _sleep_with_progress(self.delay_s, progress)
        sidecar = _find_sidecar(audio, TURNS_SIDECAR) or self.fallback_sidecar
        if sidecar is None or not sidecar.is_file():
            return []
        turns = sorted(load_turns_sidecar(sidecar), key=lambda t: (t.start_s, t.end_s))
        if isinstance(num_speakers, int):
            turns = _clamp_speakers(turns, num_speakers)
        return turns


def _clamp_speakers(turns: list[SpeakerTurn], limit: int) -> list[SpeakerTurn]:
    rank: dict[str, int] = {}
    for turn in turns:
        if turn.speaker not in rank:
            rank[turn.speaker] = len(rank)
    out = []
    for turn in turns:
        index = min(rank[turn.speaker], limit - 1)
        out.append(SpeakerTurn(turn.start_s, turn.end_s, speaker_label(index)))
    return out


class MockEngineFactory:
    """Engine factory used by tests, demos and the benchmark mock mode.

    Every model id is considered installed; transcription and diarization
    read sidecars. ``fail_stage`` injects an EngineFailure into the named
    stage ("transcribe" or "diarize").
    """

    def __init__(
        self,
        delay_factor: float = 0.0,
        diarizer_delay_s: float = 0.0,
        fail_stage: str | None = None,
        fail_message: str = "injected engine failure",
        transcript_fallback: Path | None = None,
        turns_fallback: Path | None = None,
    ):
        self.delay_factor = delay_factor
        self.diarizer_delay_s = diarizer_delay_s
        self.fail_stage = fail_stage
        self.fail_message = fail_message
        self.transcript_fallback = transcript_fallback
        self.turns_fallback = turns_fallback

    def model_spec(self, model_id: str) -> ModelSpec:
        return ModelSpec(model_id=model_id, tier=model_id, local_path=None, installed=True)

    def make_transcriber(self, model: ModelSpec, device: str) -> MockTranscriber:
        fail = self.fail_message if self.fail_stage == "transcribe" else None
        return MockTranscriber(
            delay_factor=self.delay_factor,
            fail_with=fail,
            fallback_sidecar=self.transcript_fallback,
        )

    def make_diarizer(self, device: str) -> MockDiarizer:
        fail = self.fail_message if self.fail_stage == "diarize" else None
        return MockDiarizer(
            delay_s=self.diarizer_delay_s,
            fail_with=fail,
            fallback_sidecar=self.turns_fallback,
        )
