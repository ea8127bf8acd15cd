"""Shared builders for fixture media, sidecars and golden transcripts."""

from __future__ import annotations

import json
import math
import struct
from pathlib import Path

from atrain.align import AlignedSegment, AlignedTranscript, AlignedWord
from atrain.export import JobMetadata


def make_wav_file(
    path: Path,
    seconds: float,
    rate: int = 16_000,
    channels: int = 1,
    width: int = 2,
    freq: float = 220.0,
    amplitude: float = 0.6,
) -> Path:
    """Write a sine-tone WAV with the given shape. Supports 8/16/24/32 bit."""
    import wave

    n_frames = int(round(seconds * rate))
    frames = bytearray()
    for i in range(n_frames):
        value = amplitude * math.sin(2 * math.pi * freq * i / rate)
        for ch in range(channels):
            sample = value if ch == 0 else value * 0.5
            if width == 1:
                frames.append(int((sample + 1) * 127.5))
            elif width == 2:
                frames += struct.pack("<h", int(sample * 32767))
            elif width == 3:
                frames += struct.pack("<i", int(sample * 8388607))[:3]
            elif width == 4:
                frames += struct.pack("<i", int(sample * 2147483647))
            else:
                raise ValueError(f"unsupported width {width}")
    with wave.open(str(path), "wb") as wav:
        wav.setnchannels(channels)
        wav.setsampwidth(width)
        wav.setframerate(rate)
        wav.writeframes(bytes(frames))
    return path


def make_fake_media(path: Path, **spec) -> Path:
    """Write a file in the converter stub's toy container format."""
    path.write_text(json.dumps(spec), encoding="utf-8")
    return path


def word(start: float, end: float, text: str, confidence: float = 1.0) -> dict:
    return {"start": start, "end": end, "text": text, "confidence": confidence}


def seg(seg_id: int, start: float, end: float, text: str, words: list[dict]) -> dict:
    return {"id": seg_id, "start": start, "end": end, "text": text, "words": words}


def turn(start: float, end: float, speaker: str) -> dict:
    return {"start": start, "end": end, "speaker": speaker}


def write_transcript_sidecar(media_path: Path, segments: list[dict]) -> Path:
    path = media_path.parent / (media_path.stem + ".transcript.json")
    path.write_text(json.dumps({"segments": segments}), encoding="utf-8")
    return path


def write_turns_sidecar(media_path: Path, turns: list[dict]) -> Path:
    path = media_path.parent / (media_path.stem + ".turns.json")
    path.write_text(json.dumps({"turns": turns}), encoding="utf-8")
    return path


# Standard two-speaker fixture used by the job and API tests: 2 segments,
# 5 words, second segment spoken by the other voice.
CLIP_SEGMENTS = [
    seg(0, 0.0, 2.9, "Guten Morgen allerseits.", [
        word(0.0, 0.9, "Guten", 0.98),
        word(1.0, 1.8, "Morgen", 0.97),
        word(1.9, 2.9, "allerseits.", 0.95),
    ]),
    seg(1, 3.2, 5.8, "Danke, gleichfalls.", [
        word(3.2, 4.4, "Danke,", 0.96),
        word(4.5, 5.8, "gleichfalls.", 0.94),
    ]),
]

CLIP_TURNS = [
    turn(0.0, 3.0, "SPEAKER_00"),
    turn(3.0, 6.0, "SPEAKER_01"),
]


def make_clip(directory: Path, name: str = "clip.wav", seconds: float = 6.0) -> Path:
    """Tone WAV plus the standard transcript and turns sidecars."""
    path = make_wav_file(directory / name, seconds)
    write_transcript_sidecar(path, CLIP_SEGMENTS)
    write_turns_sidecar(path, CLIP_TURNS)
    return path


def aligned_word(start: float, end: float, text: str, conf: float, speaker) -> AlignedWord:
    return AlignedWord(start_s=start, end_s=end, text=text, confidence=conf, speaker=speaker)


def golden_cases() -> list[tuple[str, AlignedTranscript, JobMetadata]]:
    """The three transcripts the golden files were written against."""
    diarized = AlignedTranscript(
        segments=[
            AlignedSegment(
                id=0, start_s=0.0, end_s=2.35, text="Grüße aus Köln.",
                speaker="SPEAKER_00",
                words=[
                    aligned_word(0.0, 0.8, "Grüße", 0.98, "SPEAKER_00"),
                    aligned_word(0.9, 1.5, "aus", 0.97, "SPEAKER_00"),
                    aligned_word(1.6, 2.35, "Köln.", 0.99, "SPEAKER_00"),
                ],
            ),
            AlignedSegment(
                id=1, start_s=2.8, end_s=5.0, text="Schön, dass du da bist.",
                speaker="SPEAKER_01",
                words=[
                    aligned_word(2.8, 3.1, "Schön,", 0.9, "SPEAKER_01"),
                    aligned_word(3.15, 3.4, "dass", 0.88, "SPEAKER_01"),
                    aligned_word(3.45, 3.7, "du", 0.92, "SPEAKER_01"),
                    aligned_word(3.75, 4.1, "da", 0.95, "SPEAKER_01"),
                    aligned_word(4.2, 5.0, "bist.", 0.93, "SPEAKER_01"),
                ],
            ),
            AlignedSegment(
                id=2, start_s=59.9, end_s=62.4, text="Bis bald.",
                speaker="SPEAKER_00",
                words=[
                    aligned_word(59.9, 60.8, "Bis", 0.85, "SPEAKER_00"),
                    aligned_word(61.0, 62.4, "bald.", 0.8, "SPEAKER_00"),
                ],
            ),
        ],
        speaker_count_used=2,
        diarization_enabled=True,
    )
    diarized_meta = JobMetadata(
        source_file="interview.wav",
        duration_s=62.5,
        model="medium",
        language="de",
        num_speakers=2,
        diarization_enabled=True,
        translate=False,
        started_at="2024-05-14T09:30:00.000+00:00",
        finished_at="2024-05-14T09:30:45.500+00:00",
        processing_time_s=45.5,
        rpt=0.728,
        tool_version="0.1.0",
    )

    plain = AlignedTranscript(
        segments=[
            AlignedSegment(
                id=0, start_s=0.0, end_s=4.2, text="Pick up the dry cleaning.",
                speaker=None,
                words=[
                    aligned_word(0.0, 0.5, "Pick", 1.0, None),
                    aligned_word(0.6, 1.2, "up", 0.99, None),
                    aligned_word(1.3, 1.7, "the", 0.97, None),
                    aligned_word(1.8, 2.9, "dry", 0.96, None),
                    aligned_word(3.0, 4.2, "cleaning.", 0.95, None),
                ],
            ),
            AlignedSegment(
                id=1, start_s=4.6, end_s=9.9, text="Then call the bank about the card.",
                speaker=None,
                words=[
                    aligned_word(4.6, 5.0, "Then", 0.94, None),
                    aligned_word(5.1, 5.6, "call", 0.93, None),
                    aligned_word(5.7, 6.0, "the", 0.92, None),
                    aligned_word(6.1, 6.8, "bank", 0.91, None),
                    aligned_word(6.9, 7.4, "about", 0.9, None),
                    aligned_word(7.5, 7.8, "the", 0.89, None),
                    aligned_word(7.9, 9.9, "card.", 0.88, None),
                ],
            ),
        ],
        speaker_count_used=None,
        diarization_enabled=False,
    )
    plain_meta = JobMetadata(
        source_file="memo.mp3",
        duration_s=10.0,
        model="tiny",
        language="en",
        num_speakers=None,
        diarization_enabled=False,
        translate=False,
        started_at="2024-05-14T10:00:00.000+00:00",
        finished_at="2024-05-14T10:00:02.000+00:00",
        processing_time_s=2.0,
        rpt=0.2,
        tool_version="0.1.0",
    )

    empty = AlignedTranscript(segments=[], speaker_count_used=0, diarization_enabled=True)
    empty_meta = JobMetadata(
        source_file="silence.wav",
        duration_s=10.0,
        model="small",
        language="auto",
        num_speakers=0,
        diarization_enabled=True,
        translate=False,
        started_at="2024-05-14T11:00:00.000+00:00",
        finished_at="2024-05-14T11:00:01.000+00:00",
        processing_time_s=1.0,
        rpt=0.1,
        tool_version="0.1.0",
    )

    return [
        ("diarized", diarized, diarized_meta),
        ("plain", plain, plain_meta),
        ("empty", empty, empty_meta),
    ]
