"""Serialize an aligned transcript into the four output files.

All exporters are deterministic: the same transcript and metadata yield
byte-identical files on every run and platform (UTF-8, LF line endings,
fixed JSON key order, floats capped at three decimals).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import json

from .align import AlignedSegment, AlignedTranscript, AlignedWord
from .errors import NegativeTimeError

TIMESTAMPED_TXT = "transcript_timestamps.txt"
PLAIN_TXT = "transcript.txt"
QDA_TXT = "transcript_qda.txt"
RAW_JSON = "transcript.json"

EXPORT_FILE_NAMES = (TIMESTAMPED_TXT, PLAIN_TXT, QDA_TXT, RAW_JSON)


@dataclass
class JobMetadata:
    """The metadata block of the raw JSON export."""

    source_file: str
    duration_s: float
    model: str
    language: str
    num_speakers: int | None
    diarization_enabled: bool
    translate: bool
    started_at: str | None
    finished_at: str | None
    processing_time_s: float | None
    rpt: float | None
    tool_version: str

    def to_dict(self) -> dict:
        # Insertion order here is the wire order of the metadata block.
        return {
            "source_file": self.source_file,
            "duration_s": _num(self.duration_s),
            "model": self.model,
            "language": self.language,
            "num_speakers": self.num_speakers,
            "diarization_enabled": self.diarization_enabled,
            "translate": self.translate,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "processing_time_s": _num(self.processing_time_s),
            "rpt": _num(self.rpt),
            "tool_version": self.tool_version,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "JobMetadata":
        return cls(
            source_file=data["source_file"],
            duration_s=data["duration_s"],
            model=data["model"],
            language=data["language"],
            num_speakers=data["num_speakers"],
            diarization_enabled=data["diarization_enabled"],
            translate=data["translate"],
            started_at=data.get("started_at"),
            finished_at=data.get("finished_at"),
            processing_time_s=data.get("processing_time_s"),
            rpt=data.get("rpt"),
            tool_version=data["tool_version"],
        )


def format_timestamp(t: float) -> str:
    """``HH:MM:SS.t`` with the tenths digit truncated, never rounded up.

    Truncation keeps a printed token at or before the real instant, so a
    QDA tool seeking to it never overshoots the audio.
    """
    if t < 0:
        raise NegativeTimeError(f"cannot format negative time {t}")
    # Small epsilon so values that are tenths up to float noise stay exact.
    tenths = int(t * 10 + 1e-6)
    seconds, tenth = divmod(tenths, 10)
    hours, rest = divmod(seconds, 3600)
    minutes, secs = divmod(rest, 60)
    return f"{hours:02d}:{minutes:02d}:{secs:02d}.{tenth}"


def _speaker_prefix(segment: AlignedSegment, enabled: bool) -> str:
    return f"{segment.speaker}: " if enabled else ""


def export_timestamped_txt(transcript: AlignedTranscript) -> str:
    """One line per segment: ``[HH:MM:SS.t] SPEAKER_XX: text``."""
    lines = [
        f"[{format_timestamp(seg.start_s)}] "
        f"{_speaker_prefix(seg, transcript.diarization_enabled)}{seg.text}"
        for seg in transcript.segments
    ]
    return "\n".join(lines) + "\n" if lines else ""


def export_plain_txt(transcript: AlignedTranscript) -> str:
    """One line per segment without timestamps."""
    lines = [
        f"{_speaker_prefix(seg, transcript.diarization_enabled)}{seg.text}"
        for seg in transcript.segments
    ]
    return "\n".join(lines) + "\n" if lines else ""


def export_qda_txt(transcript: AlignedTranscript) -> str:
    """Paragraphs with end-of-paragraph sync tokens for QDA import.

    A lone ``#00:00:00.0#`` opens the document on its own line; every
    paragraph closes with the token of its segment end, so clicking a
    passage plays the matching audio. Paragraphs are blank-line separated.
    """
    head = "#00:00:00.0#\n"
    paragraphs = [
        f"{_speaker_prefix(seg, transcript.diarization_enabled)}{seg.text} "
        f"#{format_timestamp(seg.end_s)}#"
        for seg in transcript.segments
    ]
    if not paragraphs:
        return head
    return head + "\n\n".join(paragraphs) + "\n"


def _num(value: float | None) -> float | None:
    if value is None:
        return None
    return round(float(value), 3)


def export_raw_json(transcript: AlignedTranscript, meta: JobMetadata) -> str:
    """Complete raw-transcript document for users building their own formats."""
    payload = {
        "metadata": meta.to_dict(),
        "segments": [
            {
                "id": seg.id,
                "start": _num(seg.start_s),
                "end": _num(seg.end_s),
                "text": seg.text,
                "speaker": seg.speaker,
                "words": [
                    {
                        "start": _num(w.start_s),
                        "end": _num(w.end_s),
                        "text": w.text,
                        "confidence": _num(w.confidence),
                    }
                    for w in seg.words
                ],
            }
            for seg in transcript.segments
        ],
    }
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def parse_raw_json(text: str) -> tuple[AlignedTranscript, JobMetadata]:
    """Inverse of export_raw_json.

    Word-level attribution is carried at segment granularity in the file,
    so every parsed word takes its segment's speaker.
    """
    payload = json.loads(text)
    meta = JobMetadata.from_dict(payload["metadata"])
    segments = []
    for seg in payload["segments"]:
        speaker = seg.get("speaker")
        words = [
            AlignedWord(
                start_s=w["start"],
                end_s=w["end"],
                text=w["text"],
                confidence=w["confidence"],
                speaker=speaker,
            )
            for w in seg["words"]
        ]
        segments.append(
            AlignedSegment(
                id=seg["id"],
                start_s=seg["start"],
                end_s=seg["end"],
                text=seg["text"],
                words=words,
                speaker=speaker,
            )
        )
    transcript = AlignedTranscript(
        segments=segments,
        speaker_count_used=None if not meta.diarization_enabled else meta.num_speakers,
        diarization_enabled=meta.diarization_enabled,
    )
    return transcript, meta


@dataclass(frozen=True)
class ExportBundle:
    """Paths of the four files written for one job."""

    timestamped_txt: Path
    plain_txt: Path
    qda_txt: Path
    raw_json: Path
    metadata: JobMetadata


def write_bundle(
    transcript: AlignedTranscript, meta: JobMetadata, directory: Path | str
) -> ExportBundle:
    """Write all four export files into ``directory`` (UTF-8, LF)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    outputs = {
        TIMESTAMPED_TXT: export_timestamped_txt(transcript),
        PLAIN_TXT: export_plain_txt(transcript),
        QDA_TXT: export_qda_txt(transcript),
        RAW_JSON: export_raw_json(transcript, meta),
    }
    for name, content in outputs.items():
        with open(directory / name, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(content)
    return ExportBundle(
        timestamped_txt=directory / TIMESTAMPED_TXT,
        plain_txt=directory / PLAIN_TXT,
        qda_txt=directory / QDA_TXT,
        raw_json=directory / RAW_JSON,
        metadata=meta,
    )
