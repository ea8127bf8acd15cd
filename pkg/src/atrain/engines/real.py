"""Adapters for the real ASR and diarization backends.

Both backends are optional extras; imports happen lazily so the rest of
the package works with mocks alone. Models must already be present
locally (see the registry); nothing here downloads anything.
"""

from __future__ import annotations

import os
from pathlib import Path

from ..errors import EngineFailureError, ModelNotInstalledError
from ..languages import AUTO
from ..media import CanonicalAudio
from ..models import ModelRegistry, ModelSpec
from .base import ProgressFn, interpolate_words
from .types import SpeakerTurn, TranscriptSegment, WordToken, speaker_label

ENV_DIARIZATION_MODEL = "ATRAIN_DIARIZATION_MODEL"
DEFAULT_DIARIZATION_SOURCE = "pyannote/speaker-diarization-3.1"


class FasterWhisperTranscriber:
    """Whisper-class ASR behind the Transcriber contract."""

    def __init__(self, model: ModelSpec, device: str = "cpu"):
        if not model.installed or model.local_path is None:
            raise ModelNotInstalledError(model.model_id)
        try:
            from faster_whisper import WhisperModel
        except ImportError as exc:
            raise EngineFailureError(
                "faster-whisper is not installed; install the 'backends' extra"
            ) from exc
        backend_device = "cuda" if device == "gpu" else "cpu"
        compute_type = "float16" if backend_device == "cuda" else "int8"
        try:
            self._model = WhisperModel(
                str(model.local_path), device=backend_device, compute_type=compute_type
            )
        except Exception as exc:
            raise EngineFailureError(f"ASR model load failed: {exc}") from exc

    def transcribe(
        self,
        audio: CanonicalAudio,
        model: ModelSpec,
        language: str = AUTO,
        translate: bool = False,
        progress: ProgressFn | None = None,
    ) -> list[TranscriptSegment]:
        try:
            raw_segments, _info = self._model.transcribe(
                str(audio.wav_path),
                language=None if language == AUTO else language,
                task="translate" if translate else "transcribe",
                word_timestamps=True,
            )
            collected = list(raw_segments)
        except Exception as exc:
            raise EngineFailureError(f"ASR backend failed: {exc}") from exc

        limit = audio.duration_s + 0.5
        segments: list[TranscriptSegment] = []
        for seg in sorted(collected, key=lambda s: s.start):
            text = (seg.text or "").strip()
            if not text:
                continue
            start = max(0.0, min(float(seg.start), limit))
            end = max(start, min(float(seg.end), limit))
            words = _sanitize_words(getattr(seg, "words", None), start, end)
            if not words:
                words = interpolate_words(text, start, end)
            segments.append(
                TranscriptSegment(
                    id=len(segments), start_s=start, end_s=end, text=text, words=words
                )
            )
            if progress is not None and audio.duration_s > 0:
                progress(min(1.0, end / audio.duration_s))
        return segments


def _sanitize_words(raw_words, seg_start: float, seg_end: float) -> list[WordToken]:
    if not raw_words:
        return []
    lo = seg_start - 0.5
    hi = seg_end + 0.5
    words: list[WordToken] = []
    prev_start = lo
    for w in raw_words:
        text = (w.word or "").strip()
        if not text:
            continue
        start = min(max(float(w.start), lo), hi)
        start = max(start, prev_start)
        end = min(max(float(w.end), start), hi)
        confidence = min(1.0, max(0.0, float(getattr(w, "probability", 1.0))))
        words.append(WordToken(start_s=start, end_s=end, text=text, confidence=confidence))
        prev_start = start
    return words


class PyannoteDiarizer:
    """Speaker detection behind the Diarizer contract.

    The underlying pipeline must already be cached locally; its source can
    be overridden via the ATRAIN_DIARIZATION_MODEL env var. Only the
    speaker count is exposed; other knobs stay at backend defaults.
    """

    def __init__(self, device: str = "cpu", pipeline_source: str | None = None):
        try:
            from pyannote.audio import Pipeline
        except ImportError as exc:
            raise EngineFailureError(
                "pyannote.audio is not installed; install the 'backends' extra"
            ) from exc
        source = pipeline_source or os.environ.get(
            ENV_DIARIZATION_MODEL, DEFAULT_DIARIZATION_SOURCE
        )
        try:
            self._pipeline = Pipeline.from_pretrained(source)
        except Exception as exc:
            raise EngineFailureError(f"diarization pipeline load failed: {exc}") from exc
        if device == "gpu":
            try:
                import torch

                self._pipeline.to(torch.device("cuda"))
            except Exception as exc:
                raise EngineFailureError(f"cannot move diarization to gpu: {exc}") from exc

    def diarize(
        self,
        audio: CanonicalAudio,
        num_speakers: int | str = "auto",
        progress: ProgressFn | None = None,
    ) -> list[SpeakerTurn]:
        kwargs = {}
        if isinstance(num_speakers, int):
            kwargs["num_speakers"] = num_speakers
        try:
            annotation = self._pipeline(str(audio.wav_path), **kwargs)
        except Exception as exc:
            raise EngineFailureError(f"diarization backend failed: {exc}") from exc

        turns: list[SpeakerTurn] = []
        labels: dict[str, str] = {}
        for segment, _track, label in annotation.itertracks(yield_label=True):
            if segment.end <= segment.start:
                continue
            if label not in labels:
                labels[label] = speaker_label(len(labels))
            turns.append(
                SpeakerTurn(
                    start_s=float(segment.start),
                    end_s=float(segment.end),
                    speaker=labels[label],
                )
            )
        turns.sort(key=lambda t: (t.start_s, t.end_s))
        if progress is not None:
            progress(1.0)
        return turns


class RealEngineFactory:
    """Builds the real backends against the local model registry."""

    def __init__(self, registry: ModelRegistry, diarization_source: str | None = None):
        self.registry = registry
        self.diarization_source = diarization_source

    def model_spec(self, model_id: str) -> ModelSpec:
        return self.registry.spec(model_id)

    def make_transcriber(self, model: ModelSpec, device: str) -> FasterWhisperTranscriber:
        return FasterWhisperTranscriber(model, device)

    def make_diarizer(self, device: str) -> PyannoteDiarizer:
        return PyannoteDiarizer(device, pipeline_source=self.diarization_source)
