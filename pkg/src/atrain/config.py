"""Runtime settings resolved from environment variables.

Env vars:
    ATRAIN_HOME             root data directory (job archive lives here)
    ATRAIN_MODEL_DIR        where prefetched models are stored
    ATRAIN_MEDIA_CONVERTER  path to the media converter executable
"""

from __future__ import annotations

import os
import shutil
import sys
from dataclasses import dataclass, field
from pathlib import Path

ENV_HOME = "ATRAIN_HOME"
ENV_MODEL_DIR = "ATRAIN_MODEL_DIR"
ENV_MEDIA_CONVERTER = "ATRAIN_MEDIA_CONVERTER"

DEFAULT_CONVERTER = "ffmpeg"


def _user_data_dir() -> Path:
    if sys.platform == "win32":
        base = os.environ.get("APPDATA", str(Path.home() / "AppData" / "Roaming"))
        return Path(base) / "atrain"
    if sys.platform == "darwin":
        return Path.home() / "Library" / "Application Support" / "atrain"
    base = os.environ.get("XDG_DATA_HOME", str(Path.home() / ".local" / "share"))
    return Path(base) / "atrain"


def default_data_dir() -> Path:
    env = os.environ.get(ENV_HOME)
    return Path(env) if env else _user_data_dir()


def default_model_dir(data_dir: Path | None = None) -> Path:
    env = os.environ.get(ENV_MODEL_DIR)
    if env:
        return Path(env)
    return (data_dir or default_data_dir()) / "models"


@dataclass
class Settings:
    """Resolved locations and tool paths for one process."""

    data_dir: Path = field(default_factory=default_data_dir)
    model_dir: Path | None = None
    media_converter: str | None = None

    def __post_init__(self):
        self.data_dir = Path(self.data_dir)
        if self.model_dir is None:
            self.model_dir = default_model_dir(self.data_dir)
        self.model_dir = Path(self.model_dir)
        if self.media_converter is None:
            self.media_converter = os.environ.get(ENV_MEDIA_CONVERTER)

    def resolve_converter(self) -> Path:
        """Locate the converter executable, falling back to the system PATH."""
        candidate = self.media_converter or DEFAULT_CONVERTER
        path = Path(candidate)
        if path.is_file() and os.access(path, os.X_OK):
            return path
        found = shutil.which(candidate)
        if found:
            return Path(found)
        from .errors import ConverterNotFoundError

        raise ConverterNotFoundError(
            f"media converter '{candidate}' not found; install ffmpeg or set ${ENV_MEDIA_CONVERTER}"
        )
