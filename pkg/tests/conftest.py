"""Test fixtures: clean environment, stub converter tools, fixture media.

The converter stubs speak a toy container format so the external-tool
code paths can run without ffmpeg: a ``.fake`` file holds a JSON object
like ``{"duration_s": 12.5, "has_audio": true}``. The stub prober reports
it, the stub converter renders it to silence of the stated length, and
either tool rejects files that do not parse.
"""

from __future__ import annotations

import stat
import sys
import textwrap
from pathlib import Path

import pytest

from atrain.config import ENV_HOME, ENV_MEDIA_CONVERTER, ENV_MODEL_DIR

FFMPEG_STUB = textwrap.dedent(
    """\
    # ffmpeg-shaped stand-in for the test suite's toy ".fake" format.
    # Probe call (no output file) prints stream info to stderr and exits 1,
    # matching how the real tool behaves when invoked with only -i.
    import json, sys, wave

    def main(argv):
        args = argv[1:]
        if "-i" not in args:
            return 2
        src = args[args.index("-i") + 1]
        tail = [a for a in args[args.index("-i") + 2:]]
        out = tail[-1] if tail and not tail[-1].startswith("-") else None
        try:
            with open(src) as fh:
                spec = json.load(fh)
        except Exception:
            sys.stderr.write(src + ": Invalid data found when processing input\\n")
            return 1
        duration = float(spec.get("duration_s", 1.0))
        has_audio = bool(spec.get("has_audio", True))
        if out is None:
            hh = int(duration // 3600)
            mm = int(duration % 3600 // 60)
            ss = duration % 60
            sys.stderr.write("Input #0, fake, from '%s':\\n" % src)
            sys.stderr.write("  Duration: %02d:%02d:%05.2f, start: 0.0, bitrate: 1 kb/s\\n" % (hh, mm, ss))
            if has_audio:
                sys.stderr.write("  Stream #0:0: Audio: fake, 44100 Hz, stereo\\n")
            else:
                sys.stderr.write("  Stream #0:0: Video: fake, 640x480\\n")
            sys.stderr.write("At least one output file must be specified\\n")
            return 1
        if not has_audio:
            sys.stderr.write("Output file does not contain any stream\\n")
            return 1
        rate = 8000 if spec.get("bad_rate") else 16000
        actual = float(spec.get("actual_s", duration))
        with wave.open(out, "wb") as w:
            w.setnchannels(1)
            w.setsampwidth(2)
            w.setframerate(rate)
            w.writeframes(b"\\x00\\x00" * int(actual * rate))
        return 0

    sys.exit(main(sys.argv))
    """
)

FFPROBE_STUB = textwrap.dedent(
    """\
    import json, sys

    src = sys.argv[-1]
    try:
        with open(src) as fh:
            spec = json.load(fh)
    except Exception:
        sys.stderr.write(src + ": Invalid data found when processing input\\n")
        sys.exit(1)
    duration = str(float(spec.get("duration_s", 1.0)))
    streams = []
    if spec.get("has_audio", True):
        streams.append({"codec_type": "audio", "duration": duration})
    if spec.get("has_video"):
        streams.append({"codec_type": "video"})
    print(json.dumps({
        "format": {"format_name": "fake", "duration": duration},
        "streams": streams,
    }))
    """
)


def _write_tool(path: Path, source: str) -> Path:
    # absolute interpreter path: the stubs must run even under a gutted PATH
    path.write_text(f"#!{sys.executable}\n{source}", encoding="utf-8")
    path.chmod(path.stat().st_mode | stat.S_IXUSR | stat.S_IXGRP | stat.S_IXOTH)
    return path


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    """Keep ambient configuration out of every test."""
    for name in (ENV_HOME, ENV_MODEL_DIR, ENV_MEDIA_CONVERTER):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture(scope="session")
def stub_tools_dir(tmp_path_factory) -> Path:
    """Directory holding stub ffmpeg + ffprobe executables."""
    directory = tmp_path_factory.mktemp("stub-tools")
    _write_tool(directory / "ffmpeg", FFMPEG_STUB)
    _write_tool(directory / "ffprobe", FFPROBE_STUB)
    return directory


@pytest.fixture(scope="session")
def stub_converter(stub_tools_dir) -> str:
    return str(stub_tools_dir / "ffmpeg")


@pytest.fixture(scope="session")
def lone_converter(tmp_path_factory) -> str:
    """Stub ffmpeg without an ffprobe sibling, to hit the -i probe path."""
    directory = tmp_path_factory.mktemp("lone-tool")
    _write_tool(directory / "ffmpeg", FFMPEG_STUB)
    return str(directory / "ffmpeg")


@pytest.fixture
def no_system_tools(monkeypatch, tmp_path):
    """Make PATH lookups for ffmpeg/ffprobe fail regardless of the host."""
    empty = tmp_path / "empty-path"
    empty.mkdir(exist_ok=True)
    monkeypatch.setenv("PATH", str(empty))


@pytest.fixture
def clip(tmp_path) -> Path:
    """Six-second tone WAV with the standard two-speaker sidecars."""
    from helpers import make_clip

    return make_clip(tmp_path)
