"""Job lifecycle: creation, the single-worker queue and deletion."""

from __future__ import annotations

import queue
import threading
import uuid
from pathlib import Path
from typing import Callable

from ..config import Settings
from ..engines.base import EngineFactory
from ..engines.device import detect_device
from ..errors import ModelNotInstalledError
from .pipeline import PipelineRunner
from .records import JobConfig, JobRecord, JobState
from .store import JobStore


class JobManager:
    """Owns the store, the runner and one FIFO worker thread.

    Jobs run strictly one at a time in submission order. Deleting a
    running job cancels it first, then removes its directory.
    """

    def __init__(
        self,
        data_dir: Path,
        engine_factory: EngineFactory,
        settings: Settings | None = None,
        tool_version: str = "0.0.0",
        device_detector: Callable[[], str] = detect_device,
    ):
        self.settings = settings or Settings(data_dir=Path(data_dir))
        self.store = JobStore(Path(data_dir))
        self.uploads_dir = Path(data_dir) / "uploads"
        self.uploads_dir.mkdir(parents=True, exist_ok=True)
        self.runner = PipelineRunner(
            self.store,
            engine_factory,
            settings=self.settings,
            tool_version=tool_version,
            device_detector=device_detector,
        )
        self.engine_factory = engine_factory
        self._queue: queue.Queue[str | None] = queue.Queue()
        self._worker: threading.Thread | None = None
        self._stop = threading.Event()
        self._lock = threading.Lock()
        self._cancel_flags: dict[str, threading.Event] = {}
        self._running_job: str | None = None
        self._run_done: dict[str, threading.Event] = {}
        self.recovered_jobs = self.store.recover_interrupted()

    # -- creation ---------------------------------------------------------

    def create_job(self, config: JobConfig) -> JobRecord:
        config.validate()
        if not config.input_path.is_file():
            raise FileNotFoundError(f"input file not found: {config.input_path}")
        model = self.engine_factory.model_spec(config.model_id)
        if not model.installed:
            raise ModelNotInstalledError(config.model_id)
        job_id = self.store.allocate_job_id(config.input_path)
        record = JobRecord(
            job_id=job_id,
            state=JobState.CREATED,
            config=config,
            directory=self.store.job_dir(job_id),
        )
        record.directory.mkdir(parents=True, exist_ok=True)
        self.store.save(record)
        self.store.append_event(job_id, {"type": "state", "state": JobState.CREATED.value})
        return record

    def save_upload(self, filename: str, content: bytes) -> Path:
        """Stash an uploaded file for a job to consume.

        Each upload gets its own directory so the original file name
        survives into job ids and export metadata.
        """
        safe_name = Path(filename).name or "upload"
        target = self.uploads_dir / uuid.uuid4().hex[:8] / safe_name
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(content)
        return target

    # -- execution --------------------------------------------------------

    def run_blocking(self, job_id: str, on_event=None) -> JobRecord:
        """Run one job on the calling thread. Used by the CLI."""
        cancel = threading.Event()
        with self._lock:
            self._cancel_flags[job_id] = cancel
            self._running_job = job_id
        try:
            return self.runner.run(job_id, cancel=cancel, on_event=on_event)
        finally:
            with self._lock:
                self._cancel_flags.pop(job_id, None)
                self._running_job = None

    def submit(self, job_id: str) -> None:
        """Queue a job for the background worker, starting it if needed."""
        with self._lock:
            self._cancel_flags.setdefault(job_id, threading.Event())
            self._run_done[job_id] = threading.Event()
        self.start_worker()
        self._queue.put(job_id)

    def start_worker(self) -> None:
        if self._worker is not None and self._worker.is_alive():
            return
        self._stop.clear()
        self._worker = threading.Thread(target=self._worker_loop, daemon=True)
        self._worker.start()

    def stop_worker(self, timeout: float = 10.0) -> None:
        if self._worker is None:
            return
        self._stop.set()
        self._queue.put(None)
        self._worker.join(timeout=timeout)
        self._worker = None

    def _worker_loop(self) -> None:
        while not self._stop.is_set():
            job_id = self._queue.get()
            if job_id is None:
                break
            with self._lock:
                cancel = self._cancel_flags.get(job_id)
                done = self._run_done.get(job_id)
                if not self.store.exists(job_id):
                    # Deleted while queued; nothing left to run.
                    self._cancel_flags.pop(job_id, None)
                    self._run_done.pop(job_id, None)
                    if done is not None:
                        done.set()
                    continue
                self._running_job = job_id
            try:
                self.runner.run(job_id, cancel=cancel)
            except Exception:
                # The runner persisted the failure; the queue must survive.
                pass
            finally:
                with self._lock:
                    self._running_job = None
                    self._cancel_flags.pop(job_id, None)
                    self._run_done.pop(job_id, None)
                if done is not None:
                    done.set()

    # -- queries and teardown --------------------------------------------

    def list_jobs(self) -> list[JobRecord]:
        return self.store.list_records()

    def list_models(self):
        registry = getattr(self.engine_factory, "registry", None)
        if registry is not None:
            return registry.list_models()
        from ..models import MODEL_TIERS

        return [self.engine_factory.model_spec(m) for m in MODEL_TIERS]

    def get_job(self, job_id: str) -> JobRecord:
        return self.store.load(job_id)

    def cancel_job(self, job_id: str) -> bool:
        with self._lock:
            flag = self._cancel_flags.get(job_id)
            if flag is not None:
                flag.set()
                return True
        return False

    def delete_job(self, job_id: str, timeout: float = 30.0) -> None:
        self.store.load(job_id)
        with self._lock:
            flag = self._cancel_flags.get(job_id)
            done = self._run_done.get(job_id)
            running = self._running_job == job_id
        if flag is not None:
            flag.set()
        if running and done is not None:
            done.wait(timeout=timeout)
        self.store.delete(job_id)

    def wait_for(self, job_id: str, timeout: float = 60.0) -> JobRecord:
        """Block until a submitted job reaches a terminal state."""
        with self._lock:
            done = self._run_done.get(job_id)
        if done is not None:
            done.wait(timeout=timeout)
        return self.store.load(job_id)

    def close(self) -> None:
        self.stop_worker()
