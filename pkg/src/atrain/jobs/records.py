"""Job configuration and the persisted job record."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

from ..errors import InvalidConfigError, UnsupportedLanguageError
from ..languages import AUTO, validate_language

SPEAKERS_OFF = "off"
SPEAKERS_AUTO = "auto"


class JobState(str, Enum):
    CREATED = "CREATED"
    CONVERTING = "CONVERTING"
    TRANSCRIBING = "TRANSCRIBING"
    DIARIZING = "DIARIZING"
    ALIGNING = "ALIGNING"
    EXPORTING = "EXPORTING"
    COMPLETED = "COMPLETED"
    FAILED = "FAILED"


# Full happy path; DIARIZING is skipped when diarization is off.
STATE_ORDER = (
    JobState.CREATED,
    JobState.CONVERTING,
    JobState.TRANSCRIBING,
    JobState.DIARIZING,
    JobState.ALIGNING,
    JobState.EXPORTING,
    JobState.COMPLETED,
)

TERMINAL_STATES = frozenset({JobState.COMPLETED, JobState.FAILED})


def expected_states(diarization_enabled: bool) -> tuple[JobState, ...]:
    """The legal transition order for one run."""
    if diarization_enabled:
        return STATE_ORDER
    return tuple(s for s in STATE_ORDER if s is not JobState.DIARIZING)


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


_SLUG_RE = re.compile(r"[^a-z0-9_-]+")


def slugify(name: str) -> str:
    slug = _SLUG_RE.sub("-", name.lower()).strip("-")
    return slug[:40] or "job"


@dataclass
class JobConfig:
    """User-chosen options for one transcription run."""

    input_path: Path
    model_id: str = "medium"
    language: str = AUTO
    num_speakers: int | str = SPEAKERS_AUTO
    device: str = "auto"
    translate: bool = False
    gap_tolerance_s: float = 2.0

    def __post_init__(self):
        self.input_path = Path(self.input_path)

    @property
    def diarization_enabled(self) -> bool:
        return self.num_speakers != SPEAKERS_OFF

    def validate(self) -> None:
        """Raise InvalidConfigError when any option violates its contract."""
        if not self.model_id:
            raise InvalidConfigError("model_id must be set")
        try:
            self.language = validate_language(self.language)
        except UnsupportedLanguageError as exc:
            raise InvalidConfigError(str(exc)) from exc
        if self.translate and self.language != "en":
            raise InvalidConfigError(
                "translate targets English only; set language to 'en' to translate"
            )
        if isinstance(self.num_speakers, bool) or (
            isinstance(self.num_speakers, int) and self.num_speakers < 1
        ):
            raise InvalidConfigError("num_speakers must be 'off', 'auto' or a positive integer")
        if isinstance(self.num_speakers, str) and self.num_speakers not in (
            SPEAKERS_OFF,
            SPEAKERS_AUTO,
        ):
            raise InvalidConfigError(
                f"num_speakers must be 'off', 'auto' or a positive integer, "
                f"not '{self.num_speakers}'"
            )
        if self.device not in ("auto", "cpu", "gpu"):
            raise InvalidConfigError(f"device must be auto, cpu or gpu, not '{self.device}'")
        if self.gap_tolerance_s < 0:
            raise InvalidConfigError("gap_tolerance_s must be non-negative")

    def to_dict(self) -> dict:
        return {
            "input_path": str(self.input_path),
            "model_id": self.model_id,
            "language": self.language,
            "num_speakers": self.num_speakers,
            "device": self.device,
            "translate": self.translate,
            "gap_tolerance_s": self.gap_tolerance_s,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "JobConfig":
        return cls(
            input_path=Path(data["input_path"]),
            model_id=data.get("model_id", "medium"),
            language=data.get("language", AUTO),
            num_speakers=data.get("num_speakers", SPEAKERS_AUTO),
            device=data.get("device", "auto"),
            translate=data.get("translate", False),
            gap_tolerance_s=data.get("gap_tolerance_s", 2.0),
        )


@dataclass
class JobRecord:
    """Persisted state of one transcription run."""

    job_id: str
    state: JobState
    config: JobConfig
    directory: Path
    created_at: str = field(default_factory=utc_now_iso)
    started_at: str | None = None
    finished_at: str | None = None
    duration_s: float | None = None
    processing_time_s: float | None = None
    rpt: float | None = None
    error: str | None = None
    stage_times_s: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "job_id": self.job_id,
            "state": self.state.value,
            "config": self.config.to_dict(),
            "directory": str(self.directory),
            "created_at": self.created_at,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "duration_s": self.duration_s,
            "processing_time_s": self.processing_time_s,
            "rpt": self.rpt,
            "error": self.error,
            "stage_times_s": self.stage_times_s,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "JobRecord":
        return cls(
            job_id=data["job_id"],
            state=JobState(data["state"]),
            config=JobConfig.from_dict(data["config"]),
            directory=Path(data["directory"]),
            created_at=data["created_at"],
            started_at=data.get("started_at"),
            finished_at=data.get("finished_at"),
            duration_s=data.get("duration_s"),
            processing_time_s=data.get("processing_time_s"),
            rpt=data.get("rpt"),
            error=data.get("error"),
            stage_times_s=dict(data.get("stage_times_s", {})),
        )

    @property
    def is_terminal(self) -> bool:
        return self.state in TERMINAL_STATES


def new_job_id(input_path: Path, now: datetime | None = None) -> str:
    stamp = (now or datetime.now(timezone.utc)).strftime("%Y%m%d-%H%M%S")
    return f"{stamp}_{slugify(Path(input_path).stem)}"
