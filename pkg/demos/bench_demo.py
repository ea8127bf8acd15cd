"""Benchmark harness walkthrough with simulated engine delays.

Runs a small corpus x model matrix where the mock engine sleeps for a
known fraction of each recording, then prints the markdown report. The
measured rpt values land close to the configured delay factors.

    python3 demos/bench_demo.py
"""

from __future__ import annotations

import math
import struct
import tempfile
import wave
from pathlib import Path

from atrain.bench import emit_report, run_benchmark
from atrain.engines.mock import MockEngineFactory


def write_tone(path: Path, seconds: float, rate: int = 16_000) -> Path:
    frames = bytearray()
    for i in range(int(seconds * rate)):
        sample = 0.3 * math.sin(2 * math.pi * 180.0 * i / rate)
        frames += struct.pack("<h", int(sample * 32767))
    with wave.open(str(path), "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(2)
        wav.setframerate(rate)
        wav.writeframes(bytes(frames))
    return path


def main() -> None:
    corpus = Path(tempfile.mkdtemp(prefix="atrain-bench-demo-"))
    write_tone(corpus / "short.wav", seconds=4.0)
    write_tone(corpus / "long.wav", seconds=8.0)

    # delay 0.25 means the fake model "processes" at a quarter of real time
    results = run_benchmark(
        corpus,
        model_ids=("tiny", "base"),
        engine_factory=MockEngineFactory(delay_factor=0.25),
        machine_label="demo-box",
        on_cell=lambda r: print(f"{r.file} x {r.model_id}: rpt={r.rpt:.3f}"),
    )

    report, _plot = emit_report(results)
    print()
    print(report)


if __name__ == "__main__":
    main()
