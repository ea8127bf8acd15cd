"""End-to-end walkthrough on synthetic audio with the mock engine.

Builds a six-second tone clip plus transcript/turns sidecars, runs one
job through the full pipeline and prints every export. No network, no
external tools, no real models needed.

    python3 demos/transcribe_demo.py
"""

from __future__ import annotations

import json
import math
import struct
import tempfile
import wave
from pathlib import Path

from atrain.config import Settings
from atrain.engines.mock import MockEngineFactory
from atrain.export import EXPORT_FILE_NAMES
from atrain.jobs.manager import JobManager
from atrain.jobs.records import JobConfig

SEGMENTS = [
    {
        "id": 0, "start": 0.0, "end": 2.9, "text": "Guten Morgen allerseits.",
        "words": [
            {"start": 0.0, "end": 0.9, "text": "Guten", "confidence": 0.98},
            {"start": 1.0, "end": 1.8, "text": "Morgen", "confidence": 0.97},
            {"start": 1.9, "end": 2.9, "text": "allerseits.", "confidence": 0.95},
        ],
    },
    {
        "id": 1, "start": 3.2, "end": 5.8, "text": "Danke, gleichfalls.",
        "words": [
            {"start": 3.2, "end": 4.4, "text": "Danke,", "confidence": 0.96},
            {"start": 4.5, "end": 5.8, "text": "gleichfalls.", "confidence": 0.94},
        ],
    },
]

TURNS = [
    {"start": 0.0, "end": 3.0, "speaker": "SPEAKER_00"},
    {"start": 3.0, "end": 6.0, "speaker": "SPEAKER_01"},
]


def write_tone(path: Path, seconds: float = 6.0, rate: int = 16_000) -> Path:
    frames = bytearray()
    for i in range(int(seconds * rate)):
        sample = 0.4 * math.sin(2 * math.pi * 220.0 * i / rate)
        frames += struct.pack("<h", int(sample * 32767))
    with wave.open(str(path), "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(2)
        wav.setframerate(rate)
        wav.writeframes(bytes(frames))
    return path


def main() -> None:
    workdir = Path(tempfile.mkdtemp(prefix="atrain-demo-"))
    clip = write_tone(workdir / "greeting.wav")
    # the mock engine reads these instead of running a model
    (workdir / "greeting.transcript.json").write_text(
        json.dumps({"segments": SEGMENTS}), encoding="utf-8"
    )
    (workdir / "greeting.turns.json").write_text(
        json.dumps({"turns": TURNS}), encoding="utf-8"
    )

    home = workdir / "home"
    manager = JobManager(home, MockEngineFactory(), settings=Settings(data_dir=home))
    record = manager.create_job(
        JobConfig(input_path=clip, model_id="tiny", device="cpu", num_speakers=2)
    )
    print(f"job {record.job_id}")
    record = manager.run_blocking(
        record.job_id,
        on_event=lambda e: e.get("type") == "state" and print(f"  [{e['state']}]"),
    )

    print(f"\nstate: {record.state.value}, rpt {record.rpt:.3f}")
    for name in EXPORT_FILE_NAMES:
        body = (record.directory / name).read_text(encoding="utf-8")
        print(f"\n--- {name} ---")
        print(body if len(body) < 800 else body[:800] + "...")


if __name__ == "__main__":
    main()
