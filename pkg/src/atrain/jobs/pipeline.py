"""The transcription pipeline: convert, transcribe, diarize, align, export.

One runner call takes a CREATED job to COMPLETED or FAILED, persisting
every state change and appending events as it goes. The whole run sits
inside the offline guard; any recorded network attempt fails the job.
"""

from __future__ import annotations

import threading
import time
from pathlib import Path
from typing import Callable

from .. import align as align_mod
from ..config import Settings
from ..engines.base import EngineFactory
from ..engines.device import detect_device, resolve_device
from ..errors import (
    ATrainError,
    JobCancelledError,
    ModelNotInstalledError,
    NetworkAttemptDeniedError,
    ZeroDurationError,
)
from ..export import JobMetadata, write_bundle
from ..media import convert_to_canonical, probe_media
from .offline import OfflineGuard
from .records import JobRecord, JobState, utc_now_iso
from .store import JobStore

EventFn = Callable[[dict], None]


def compute_rpt(processing_time_s: float, duration_s: float) -> float:
    """Relative processing time: wall time divided by recording length.

    1.0 means real time; lower is faster than the recording plays.
    """
    if processing_time_s < 0:
        raise ValueError(f"processing time must be non-negative, got {processing_time_s}")
    if duration_s <= 0:
        raise ZeroDurationError(f"recording duration must be positive, got {duration_s}")
    return processing_time_s / duration_s


class PipelineRunner:
    def __init__(
        self,
        store: JobStore,
        engine_factory: EngineFactory,
        settings: Settings | None = None,
        tool_version: str = "0.0.0",
        device_detector: Callable[[], str] = detect_device,
    ):
        self.store = store
        self.engine_factory = engine_factory
        self.settings = settings or Settings()
        self.tool_version = tool_version
        self.device_detector = device_detector

    def run(
        self,
        job_id: str,
        cancel: threading.Event | None = None,
        on_event: EventFn | None = None,
    ) -> JobRecord:
        record = self.store.load(job_id)
        if record.state is not JobState.CREATED:
            raise ATrainError(
                f"job {job_id} is {record.state.value}; only CREATED jobs can run"
            )
        cancel = cancel or threading.Event()
        stage = "startup"

        def emit(event: dict) -> None:
            stored = self.store.append_event(job_id, event)
            if on_event is not None:
                on_event(stored)

        def enter(state: JobState) -> None:
            record.state = state
            self.store.save(record)
            emit({"type": "state", "state": state.value})

        def check_cancelled() -> None:
            if cancel.is_set():
                raise JobCancelledError("cancelled by request")

        def progress_fn(stage_name: str) -> Callable[[float], None]:
            def on_progress(fraction: float) -> None:
                check_cancelled()
                emit(
                    {
                        "type": "progress",
                        "stage": stage_name,
                        "fraction": round(min(max(fraction, 0.0), 1.0), 3),
                    }
                )

            return on_progress

        record.started_at = utc_now_iso()
        clock_start = time.monotonic()
        stage_clock = clock_start

        def close_stage(name: str) -> None:
            nonlocal stage_clock
            now = time.monotonic()
            record.stage_times_s[name] = now - stage_clock
            stage_clock = now

        try:
            config = record.config
            device = resolve_device(config.device, detector=self.device_detector)
            model = self.engine_factory.model_spec(config.model_id)
            if not model.installed:
                raise ModelNotInstalledError(config.model_id)

            with OfflineGuard() as guard:
                stage = JobState.CONVERTING.value
                check_cancelled()
                enter(JobState.CONVERTING)
                info = probe_media(config.input_path, self.settings)
                audio = convert_to_canonical(info, record.directory, self.settings)
                record.duration_s = audio.duration_s
                close_stage(stage)

                stage = JobState.TRANSCRIBING.value
                check_cancelled()
                enter(JobState.TRANSCRIBING)
                emit({"type": "phase", "stage": stage, "phase": "load-model"})
                transcriber = self.engine_factory.make_transcriber(model, device)
                emit({"type": "phase", "stage": stage, "phase": "run"})
                segments = transcriber.transcribe(
                    audio,
                    model,
                    language=config.language,
                    translate=config.translate,
                    progress=progress_fn(stage),
                )
                close_stage(stage)

                turns = None
                if config.diarization_enabled:
                    stage = JobState.DIARIZING.value
                    check_cancelled()
                    enter(JobState.DIARIZING)
                    emit({"type": "phase", "stage": stage, "phase": "load-model"})
                    diarizer = self.engine_factory.make_diarizer(device)
                    emit({"type": "phase", "stage": stage, "phase": "run"})
                    turns = diarizer.diarize(
                        audio,
                        num_speakers=config.num_speakers,
                        progress=progress_fn(stage),
                    )
                    close_stage(stage)

                stage = JobState.ALIGNING.value
                check_cancelled()
                enter(JobState.ALIGNING)
                if turns is None:
                    transcript = align_mod.unaligned_transcript(segments)
                else:
                    transcript = align_mod.align_transcript(
                        segments, turns, gap_tolerance_s=config.gap_tolerance_s
                    )
                close_stage(stage)

                stage = JobState.EXPORTING.value
                check_cancelled()
                enter(JobState.EXPORTING)
                record.finished_at = utc_now_iso()
                record.processing_time_s = time.monotonic() - clock_start
                record.rpt = compute_rpt(record.processing_time_s, record.duration_s)
                meta = self._metadata(record, transcript)
                write_bundle(transcript, meta, record.directory)
                close_stage(stage)

            if guard.report:
                stage = "offline-guard"
                first = guard.report[0]
                raise NetworkAttemptDeniedError(
                    f"{len(guard.report)} network attempt(s) during the run; "
                    f"first: {first.api} {first.destination}"
                )

            stage = JobState.COMPLETED.value
            record.state = JobState.COMPLETED
            record.error = None
            self.store.save(record)
            emit({"type": "state", "state": JobState.COMPLETED.value})
            return record
        except BaseException as exc:
            record.state = JobState.FAILED
            record.error = f"{stage}: {exc}"
            record.finished_at = record.finished_at or utc_now_iso()
            if record.processing_time_s is None:
                record.processing_time_s = time.monotonic() - clock_start
            record.rpt = None
            self.store.save(record)
            emit(
                {
                    "type": "state",
                    "state": JobState.FAILED.value,
                    "stage": stage,
                    "error": str(exc),
                }
            )
            if isinstance(exc, (ATrainError, OSError, ValueError)):
                return record
            raise

    def _metadata(self, record: JobRecord, transcript) -> JobMetadata:
        config = record.config
        num_speakers = transcript.speaker_count_used if config.diarization_enabled else None
        return JobMetadata(
            source_file=Path(config.input_path).name,
            duration_s=record.duration_s or 0.0,
            model=config.model_id,
            language=config.language,
            num_speakers=num_speakers,
            diarization_enabled=config.diarization_enabled,
            translate=config.translate,
            started_at=record.started_at or "",
            finished_at=record.finished_at or "",
            processing_time_s=record.processing_time_s or 0.0,
            rpt=record.rpt if record.rpt is not None else 0.0,
            tool_version=self.tool_version,
        )
