"""On-disk persistence for job records and their event logs.

Every job owns one directory under the data dir. The record lives in
metadata.json, written atomically (write to a temp file, then rename) so
a crash never leaves a torn file behind. Events append to events.log as
one JSON object per line.
"""

from __future__ import annotations

import json
import os
import shutil
import tempfile
from datetime import datetime, timezone
from pathlib import Path

from ..errors import JobNotFoundError
from .records import JobRecord, JobState, new_job_id, utc_now_iso

METADATA_FILE = "metadata.json"
EVENTS_FILE = "events.log"
INTERRUPTED_ERROR = "interrupted: process exited before the job finished"


class JobStore:
    def __init__(self, data_dir: Path):
        # Job dirs live directly under the data dir; sibling dirs such as
        # models/ or uploads/ are ignored because they hold no metadata.json.
        self.data_dir = Path(data_dir)
        self.jobs_root = self.data_dir
        self.jobs_root.mkdir(parents=True, exist_ok=True)

    def job_dir(self, job_id: str) -> Path:
        return self.jobs_root / job_id

    def metadata_path(self, job_id: str) -> Path:
        return self.job_dir(job_id) / METADATA_FILE

    def events_path(self, job_id: str) -> Path:
        return self.job_dir(job_id) / EVENTS_FILE

    def allocate_job_id(self, input_path: Path) -> str:
        """Pick a fresh id; append a numeric suffix on collision."""
        base = new_job_id(input_path, datetime.now(timezone.utc))
        job_id = base
        counter = 2
        while self.job_dir(job_id).exists():
            job_id = f"{base}-{counter}"
            counter += 1
        return job_id

    def exists(self, job_id: str) -> bool:
        return self.metadata_path(job_id).is_file()

    def save(self, record: JobRecord) -> None:
        directory = self.job_dir(record.job_id)
        directory.mkdir(parents=True, exist_ok=True)
        target = directory / METADATA_FILE
        payload = json.dumps(record.to_dict(), ensure_ascii=False, indent=2) + "\n"
        fd, tmp_name = tempfile.mkstemp(dir=directory, prefix=".metadata-", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(payload)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp_name, target)
        except BaseException:
            try:
                os.unlink(tmp_name)
            except OSError:
                pass
            raise

    def load(self, job_id: str) -> JobRecord:
        path = self.metadata_path(job_id)
        if not path.is_file():
            raise JobNotFoundError(f"no job named '{job_id}'")
        with open(path, encoding="utf-8") as handle:
            return JobRecord.from_dict(json.load(handle))

    def list_records(self) -> list[JobRecord]:
        """All jobs, newest first."""
        records = []
        for entry in self.jobs_root.iterdir():
            if entry.is_dir() and (entry / METADATA_FILE).is_file():
                records.append(self.load(entry.name))
        records.sort(key=lambda r: (r.created_at, r.job_id), reverse=True)
        return records

    def delete(self, job_id: str) -> None:
        if not self.job_dir(job_id).exists():
            raise JobNotFoundError(f"no job named '{job_id}'")
        shutil.rmtree(self.job_dir(job_id))

    def append_event(self, job_id: str, event: dict) -> dict:
        event = dict(event)
        event.setdefault("ts", utc_now_iso())
        line = json.dumps(event, ensure_ascii=False)
        directory = self.job_dir(job_id)
        directory.mkdir(parents=True, exist_ok=True)
        with open(directory / EVENTS_FILE, "a", encoding="utf-8", newline="\n") as handle:
            handle.write(line + "\n")
            handle.flush()
        return event

    def read_events(self, job_id: str) -> list[dict]:
        path = self.events_path(job_id)
        if not path.is_file():
            return []
        events = []
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if line:
                    events.append(json.loads(line))
        return events

    def recover_interrupted(self) -> list[str]:
        """Mark jobs left non-terminal by a dead process as FAILED.

        Called once at startup, before the worker begins. Returns the ids
        that were repaired.
        """
        repaired = []
        for record in self.list_records():
            if record.is_terminal:
                continue
            record.state = JobState.FAILED
            record.error = INTERRUPTED_ERROR
            record.finished_at = record.finished_at or utc_now_iso()
            self.save(record)
            self.append_event(
                record.job_id,
                {"type": "state", "state": JobState.FAILED.value, "error": INTERRUPTED_ERROR},
            )
            repaired.append(record.job_id)
        return repaired
