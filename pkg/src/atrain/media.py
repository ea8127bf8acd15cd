"""Probe input media and convert it to the canonical WAV the engines consume.

Canonical form is RIFF/WAV, PCM signed 16-bit little-endian, 16 kHz, mono.
Plain PCM WAV input is converted in-process; everything else is delegated
to an external converter (ffmpeg-compatible argv). Nothing here decodes
compressed audio itself.
"""

from __future__ import annotations

import audioop
import json
import re
import shutil
import subprocess
import wave
from dataclasses import dataclass
from pathlib import Path

from .config import Settings
from .errors import (
    ConversionFailedError,
    ConverterNotFoundError,
    NoAudioStreamError,
    UnreadableMediaError,
)

CANONICAL_SAMPLE_RATE = 16_000
CANONICAL_CHANNELS = 1
CANONICAL_SAMPLE_WIDTH = 2  # bytes, s16le
DURATION_TOLERANCE_S = 0.2


@dataclass(frozen=True)
class MediaInfo:
    """Probe result for one input file."""

    source_path: Path
    container_format: str
    duration_s: float
    has_audio: bool

    def __post_init__(self):
        if self.duration_s < 0:
            raise ValueError("duration_s must be non-negative")


@dataclass(frozen=True)
class CanonicalAudio:
    """A 16 kHz mono s16le WAV file ready for the engines."""

    wav_path: Path
    sample_rate_hz: int
    channels: int
    duration_s: float
    source_path: Path | None = None


def probe_media(path: Path | str, settings: Settings | None = None) -> MediaInfo:
    """Inspect ``path`` and report container, duration and audio presence.

    Never writes to the filesystem. WAV files are read directly; anything
    else goes through the external prober that ships next to the converter.

    Raises:
        FileNotFoundError: path does not exist.
        UnreadableMediaError: corrupt file or unsupported container.
        NoAudioStreamError: the file has no audio stream.
        ConverterNotFoundError: non-WAV input and no probing tool available.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such media file: {path}")

    info = _probe_wav(path)
    if info is None:
        info = _probe_external(path, settings or Settings())
    if not info.has_audio:
        raise NoAudioStreamError(f"{path.name} contains no audio stream")
    return info


def convert_to_canonical(
    info: MediaInfo, workdir: Path | str, settings: Settings | None = None
) -> CanonicalAudio:
    """Convert ``info.source_path`` into the canonical WAV inside ``workdir``.

    The source file is never modified. Video streams are dropped.

    Raises:
        NoAudioStreamError: the probe reported no audio.
        ConverterNotFoundError: no converter executable resolved.
        ConversionFailedError: converter exited nonzero or produced a file
            outside the canonical contract (wrong header or duration drift
            beyond the tolerance).
    """
    if not info.has_audio:
        raise NoAudioStreamError(f"{info.source_path} has no audio to convert")
    settings = settings or Settings()

    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    out_path = workdir / "audio.wav"
    if out_path.exists() and info.source_path.exists() and out_path.samefile(info.source_path):
        out_path = workdir / "audio.converted.wav"

    in_process = _convert_wav_in_process(info, out_path)
    if in_process is not None:
        return in_process

    converter = settings.resolve_converter()
    argv = [
        str(converter),
        "-nostdin",
        "-hide_banner",
        "-y",
        "-i",
        str(info.source_path),
        "-vn",
        "-ac",
        str(CANONICAL_CHANNELS),
        "-ar",
        str(CANONICAL_SAMPLE_RATE),
        "-c:a",
        "pcm_s16le",
        "-f",
        "wav",
        str(out_path),
    ]
    proc = subprocess.run(argv, capture_output=True, text=True)
    if proc.returncode != 0:
        diagnostics = (proc.stderr or proc.stdout or "").strip()[-2000:]
        raise ConversionFailedError(
            f"converter exited with status {proc.returncode} for {info.source_path.name}",
            diagnostics=diagnostics,
        )

    rate, channels, sampwidth, duration = _read_wav_contract(out_path)
    if (rate, channels, sampwidth) != (
        CANONICAL_SAMPLE_RATE,
        CANONICAL_CHANNELS,
        CANONICAL_SAMPLE_WIDTH,
    ):
        raise ConversionFailedError(
            f"converter output violates the canonical contract: "
            f"{rate} Hz, {channels} ch, {sampwidth * 8}-bit"
        )
    if abs(duration - info.duration_s) > DURATION_TOLERANCE_S:
        raise ConversionFailedError(
            f"duration drifted from {info.duration_s:.3f}s to {duration:.3f}s "
            f"(tolerance {DURATION_TOLERANCE_S}s)"
        )
    return CanonicalAudio(
        wav_path=out_path,
        sample_rate_hz=rate,
        channels=channels,
        duration_s=duration,
        source_path=info.source_path,
    )


_IN_PROCESS_CHUNK_FRAMES = 1 << 18


def _convert_wav_in_process(info: MediaInfo, out_path: Path) -> CanonicalAudio | None:
    """Resample plain PCM WAV with the stdlib; None defers to the converter."""
    try:
        reader = wave.open(str(info.source_path), "rb")
    except (wave.Error, EOFError, OSError):
        return None
    with reader:
        rate = reader.getframerate()
        channels = reader.getnchannels()
        width = reader.getsampwidth()
        if rate <= 0 or channels < 1 or width not in (1, 2, 3, 4):
            return None
        with wave.open(str(out_path), "wb") as writer:
            writer.setnchannels(CANONICAL_CHANNELS)
            writer.setsampwidth(CANONICAL_SAMPLE_WIDTH)
            writer.setframerate(CANONICAL_SAMPLE_RATE)
            state = None
            while True:
                frames = reader.readframes(_IN_PROCESS_CHUNK_FRAMES)
                if not frames:
                    break
                if width == 1:
                    # WAV stores 8-bit samples unsigned.
                    frames = audioop.bias(frames, 1, -128)
                if width != CANONICAL_SAMPLE_WIDTH:
                    frames = audioop.lin2lin(frames, width, CANONICAL_SAMPLE_WIDTH)
                if channels == 2:
                    frames = audioop.tomono(frames, CANONICAL_SAMPLE_WIDTH, 0.5, 0.5)
                elif channels > 2:
                    frames = _downmix(frames, CANONICAL_SAMPLE_WIDTH, channels)
                if rate != CANONICAL_SAMPLE_RATE:
                    frames, state = audioop.ratecv(
                        frames,
                        CANONICAL_SAMPLE_WIDTH,
                        CANONICAL_CHANNELS,
                        rate,
                        CANONICAL_SAMPLE_RATE,
                        state,
                    )
                writer.writeframes(frames)

    out_rate, out_channels, out_width, duration = _read_wav_contract(out_path)
    if abs(duration - info.duration_s) > DURATION_TOLERANCE_S:
        raise ConversionFailedError(
            f"duration drifted from {info.duration_s:.3f}s to {duration:.3f}s "
            f"(tolerance {DURATION_TOLERANCE_S}s)"
        )
    return CanonicalAudio(
        wav_path=out_path,
        sample_rate_hz=out_rate,
        channels=out_channels,
        duration_s=duration,
        source_path=info.source_path,
    )


def _downmix(frames: bytes, width: int, channels: int) -> bytes:
    # audioop.tomono only knows stereo; average N channels sample by sample.
    total = len(frames) // (channels * width)
    limit = 1 << (8 * width - 1)
    out = bytearray(total * width)
    for i in range(total):
        acc = sum(
            audioop.getsample(frames, width, i * channels + ch) for ch in range(channels)
        )
        sample = max(-limit, min(limit - 1, acc // channels))
        out[i * width : (i + 1) * width] = sample.to_bytes(width, "little", signed=True)
    return bytes(out)


def _read_wav_contract(path: Path) -> tuple[int, int, int, float]:
    try:
        with wave.open(str(path), "rb") as wav:
            rate = wav.getframerate()
            channels = wav.getnchannels()
            sampwidth = wav.getsampwidth()
            frames = wav.getnframes()
    except (wave.Error, EOFError) as exc:
        raise ConversionFailedError(f"converter produced an unreadable WAV: {exc}")
    duration = frames / rate if rate else 0.0
    return rate, channels, sampwidth, duration


def _probe_wav(path: Path) -> MediaInfo | None:
    """Fast path for RIFF/WAV; returns None when the file is not plain WAV."""
    try:
        with wave.open(str(path), "rb") as wav:
            rate = wav.getframerate()
            frames = wav.getnframes()
    except (wave.Error, EOFError):
        return None
    except OSError as exc:
        raise UnreadableMediaError(f"cannot read {path}: {exc}")
    duration = frames / rate if rate else 0.0
    return MediaInfo(
        source_path=path,
        container_format="wav",
        duration_s=duration,
        has_audio=True,
    )


def _find_prober(settings: Settings) -> Path | None:
    """Locate an ffprobe-compatible tool, preferring a sibling of the converter."""
    try:
        converter = settings.resolve_converter()
    except ConverterNotFoundError:
        converter = None
    if converter is not None and "ffmpeg" in converter.name:
        sibling = converter.with_name(converter.name.replace("ffmpeg", "ffprobe"))
        if sibling.is_file():
            return sibling
    found = shutil.which("ffprobe")
    if found:
        return Path(found)
    return None


def _probe_external(path: Path, settings: Settings) -> MediaInfo:
    prober = _find_prober(settings)
    if prober is not None:
        return _probe_with_ffprobe(prober, path)
    # Last resort: the converter itself prints stream info on `-i`.
    converter = settings.resolve_converter()
    return _probe_with_converter(converter, path)


def _probe_with_ffprobe(prober: Path, path: Path) -> MediaInfo:
    argv = [
        str(prober),
        "-v",
        "error",
        "-print_format",
        "json",
        "-show_format",
        "-show_streams",
        str(path),
    ]
    proc = subprocess.run(argv, capture_output=True, text=True)
    if proc.returncode != 0:
        raise UnreadableMediaError(
            f"cannot probe {path.name}: {(proc.stderr or '').strip()[-500:]}"
        )
    try:
        payload = json.loads(proc.stdout)
    except json.JSONDecodeError as exc:
        raise UnreadableMediaError(f"prober emitted invalid JSON for {path.name}: {exc}")

    streams = payload.get("streams", [])
    fmt = payload.get("format", {})
    has_audio = any(s.get("codec_type") == "audio" for s in streams)
    duration = _best_duration(fmt, streams)
    return MediaInfo(
        source_path=path,
        container_format=str(fmt.get("format_name", "unknown")).split(",")[0],
        duration_s=duration,
        has_audio=has_audio,
    )


def _best_duration(fmt: dict, streams: list[dict]) -> float:
    candidates = []
    if fmt.get("duration") is not None:
        candidates.append(fmt["duration"])
    for s in streams:
        if s.get("duration") is not None:
            candidates.append(s["duration"])
    for value in candidates:
        try:
            return max(0.0, float(value))
        except (TypeError, ValueError):
            continue
    return 0.0


_DURATION_RE = re.compile(r"Duration:\s*(\d+):(\d{2}):(\d{2})\.(\d+)")
_AUDIO_STREAM_RE = re.compile(r"Stream #\d+:\d+.*?:\s*Audio:")


def _probe_with_converter(converter: Path, path: Path) -> MediaInfo:
    # ffmpeg exits nonzero on `-i` without outputs; stream info still lands
    # on stderr, so only an unparseable report counts as unreadable.
    argv = [str(converter), "-nostdin", "-hide_banner", "-i", str(path)]
    proc = subprocess.run(argv, capture_output=True, text=True)
    report = proc.stderr or ""
    match = _DURATION_RE.search(report)
    if match is None:
        raise UnreadableMediaError(
            f"cannot probe {path.name}: {report.strip()[-500:] or 'no converter output'}"
        )
    hours, minutes, seconds, frac = match.groups()
    duration = int(hours) * 3600 + int(minutes) * 60 + int(seconds) + float(f"0.{frac}")
    fmt_match = re.search(r"Input #0,\s*([^,]+),", report)
    return MediaInfo(
        source_path=path,
        container_format=fmt_match.group(1).strip() if fmt_match else "unknown",
        duration_s=duration,
        has_audio=_AUDIO_STREAM_RE.search(report) is not None,
    )
