"""Local model registry: manifest, install checks, explicit prefetch.

Models are never fetched implicitly. A transcription run only ever reads
from the local model directory; downloads happen through ``prefetch`` on
explicit user request.

The manifest maps model_id to its tier, download location and expected
file checksums. A ``sha256`` of null means "not pinned": the checksum is
recorded on first successful prefetch and verified on later checks.
"""

from __future__ import annotations

import hashlib
import json
import shutil
import urllib.error
import urllib.request
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable

from .errors import ChecksumMismatchError, DownloadFailedError, ModelNotInstalledError

MODEL_TIERS = ("tiny", "base", "small", "medium", "large")

PREFETCH_HINT = "run `atrain models prefetch {model_id}` to install it"

_CHUNK = 1 << 20
RECORDED_CHECKSUMS_FILE = "checksums.json"


@dataclass(frozen=True)
class ModelSpec:
    """Install state of one model tier."""

    model_id: str
    tier: str
    local_path: Path | None
    installed: bool

    @property
    def size_hint(self) -> str:
        return {"tiny": "smallest/fastest", "large": "largest/most accurate"}.get(
            self.tier, "mid-range"
        )


@dataclass(frozen=True)
class ManifestFile:
    name: str
    sha256: str | None
    size_bytes: int | None


@dataclass(frozen=True)
class ManifestEntry:
    model_id: str
    tier: str
    base_url: str
    files: tuple[ManifestFile, ...]


def load_manifest(path: Path | None = None) -> dict[str, ManifestEntry]:
    """Read a manifest file; the packaged default when no path is given."""
    if path is not None:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    else:
        raw = json.loads(
            resources.files("atrain").joinpath("data/models.json").read_text(encoding="utf-8")
        )
    entries = {}
    for model_id, body in raw["models"].items():
        files = tuple(
            ManifestFile(
                name=f["name"],
                sha256=f.get("sha256"),
                size_bytes=f.get("size_bytes"),
            )
            for f in body["files"]
        )
        entries[model_id] = ManifestEntry(
            model_id=model_id,
            tier=body.get("tier", model_id),
            base_url=body["base_url"].rstrip("/"),
            files=files,
        )
    return entries


def _sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        while chunk := fh.read(_CHUNK):
            digest.update(chunk)
    return digest.hexdigest()


class ModelRegistry:
    """Answers "is this model installed?" and performs explicit prefetches."""

    def __init__(self, model_dir: Path, manifest: dict[str, ManifestEntry] | None = None):
        self.model_dir = Path(model_dir)
        self.manifest = manifest if manifest is not None else load_manifest()

    def model_path(self, model_id: str) -> Path:
        return self.model_dir / model_id

    def entry(self, model_id: str) -> ManifestEntry:
        try:
            return self.manifest[model_id]
        except KeyError:
            known = ", ".join(sorted(self.manifest))
            raise ModelNotInstalledError(model_id, hint=f"known models: {known}")

    def spec(self, model_id: str) -> ModelSpec:
        entry = self.entry(model_id)
        path = self.model_path(model_id)
        return ModelSpec(
            model_id=model_id,
            tier=entry.tier,
            local_path=path if path.is_dir() else None,
            installed=self.is_installed(model_id),
        )

    def require_installed(self, model_id: str) -> ModelSpec:
        spec = self.spec(model_id)
        if not spec.installed:
            raise ModelNotInstalledError(model_id, hint=PREFETCH_HINT.format(model_id=model_id))
        return spec

    def list_models(self) -> list[ModelSpec]:
        order = {tier: i for i, tier in enumerate(MODEL_TIERS)}
        ids = sorted(self.manifest, key=lambda m: (order.get(self.manifest[m].tier, 99), m))
        return [self.spec(model_id) for model_id in ids]

    def is_installed(self, model_id: str) -> bool:
        if model_id not in self.manifest:
            return False
        entry = self.manifest[model_id]
        root = self.model_path(model_id)
        if not root.is_dir():
            return False
        recorded = self._recorded_checksums(root)
        for mf in entry.files:
            path = root / mf.name
            if not path.is_file():
                return False
            if mf.size_bytes is not None and path.stat().st_size != mf.size_bytes:
                return False
            pin = mf.sha256 or recorded.get(mf.name)
            if pin is not None and _sha256_file(path) != pin:
                return False
        return True

    def prefetch(
        self, model_id: str, progress: Callable[[str, float], None] | None = None
    ) -> ModelSpec:
        """Download and verify one model; no-op when already installed.

        Raises:
            ChecksumMismatchError: downloaded bytes disagree with the pin;
                the partial file is removed.
            DownloadFailedError: transfer failed; partials are removed.
        """
        entry = self.entry(model_id)
        if self.is_installed(model_id):
            return self.spec(model_id)

        root = self.model_path(model_id)
        root.mkdir(parents=True, exist_ok=True)
        recorded = self._recorded_checksums(root)
        for i, mf in enumerate(entry.files):
            target = root / mf.name
            if target.is_file() and mf.sha256 and _sha256_file(target) == mf.sha256:
                recorded[mf.name] = mf.sha256
                continue
            partial = root / (mf.name + ".part")
            url = f"{entry.base_url}/{mf.name}"
            try:
                self._download(url, partial)
            except (urllib.error.URLError, OSError, ValueError) as exc:
                partial.unlink(missing_ok=True)
                raise DownloadFailedError(f"download of {url} failed: {exc}")
            digest = _sha256_file(partial)
            if mf.sha256 is not None and digest != mf.sha256:
                partial.unlink(missing_ok=True)
                raise ChecksumMismatchError(
                    f"{mf.name} of model '{model_id}': expected {mf.sha256}, got {digest}"
                )
            partial.replace(target)
            recorded[mf.name] = digest
            if progress is not None:
                progress(mf.name, (i + 1) / len(entry.files))
        self._write_recorded_checksums(root, recorded)
        return self.spec(model_id)

    def delete(self, model_id: str) -> None:
        root = self.model_path(model_id)
        if root.is_dir():
            shutil.rmtree(root)

    def _download(self, url: str, target: Path) -> None:
        with urllib.request.urlopen(url, timeout=60) as response:
            with open(target, "wb") as out:
                shutil.copyfileobj(response, out, _CHUNK)

    def _recorded_checksums(self, root: Path) -> dict[str, str]:
        path = root / RECORDED_CHECKSUMS_FILE
        if not path.is_file():
            return {}
        try:
            return dict(json.loads(path.read_text(encoding="utf-8")))
        except (json.JSONDecodeError, ValueError):
            return {}

    def _write_recorded_checksums(self, root: Path, recorded: dict[str, str]) -> None:
        path = root / RECORDED_CHECKSUMS_FILE
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(recorded, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        tmp.replace(path)
