"""HTTP API over the job manager.

Serves localhost by default. Uploads arrive as multipart/form-data with
a ``file`` part and an optional ``config`` part holding a JSON object;
the body is parsed with the stdlib email machinery.
"""

from __future__ import annotations

import json
import time
from email import policy
from email.parser import BytesParser
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import FileResponse, JSONResponse, StreamingResponse

from ..errors import (
    ATrainError,
    InvalidConfigError,
    JobNotFoundError,
    ModelNotInstalledError,
)
from ..export import EXPORT_FILE_NAMES, RAW_JSON
from .manager import JobManager
from .records import JobConfig, JobRecord, TERMINAL_STATES
from .store import JobStore

SSE_POLL_S = 0.05


def parse_multipart(content_type: str, body: bytes) -> dict[str, tuple[str | None, bytes]]:
    """Split a multipart/form-data body into {field: (filename, content)}."""
    head = f"Content-Type: {content_type}\r\nMIME-Version: 1.0\r\n\r\n"
    message = BytesParser(policy=policy.default).parsebytes(head.encode("latin-1") + body)
    if not message.is_multipart():
        raise ValueError("body is not multipart")
    fields: dict[str, tuple[str | None, bytes]] = {}
    for part in message.iter_parts():
        name = part.get_param("name", header="content-disposition")
        if not name:
            continue
        payload = part.get_payload(decode=True)
        if payload is None:
            payload = b""
        fields[str(name)] = (part.get_filename(), payload)
    return fields


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse({"error": {"code": code, "message": message}}, status_code=status)


def _job_dict(record: JobRecord) -> dict:
    data = record.to_dict()
    data["files"] = [
        name for name in EXPORT_FILE_NAMES if (record.directory / name).is_file()
    ]
    return data


def _config_from_options(input_path: Path, options: dict) -> JobConfig:
    config = JobConfig(input_path=input_path)
    if "model" in options:
        config.model_id = str(options["model"])
    elif "model_id" in options:
        config.model_id = str(options["model_id"])
    if "language" in options:
        config.language = str(options["language"])
    if "num_speakers" in options:
        value = options["num_speakers"]
        if isinstance(value, str) and value.isdigit():
            value = int(value)
        config.num_speakers = value
    if "device" in options:
        config.device = str(options["device"])
    if "translate" in options:
        config.translate = bool(options["translate"])
    if "gap_tolerance_s" in options:
        config.gap_tolerance_s = float(options["gap_tolerance_s"])
    return config


def _event_stream(store: JobStore, job_id: str, timeout_s: float):
    """Yield SSE frames for each event line until the job is terminal."""
    terminal_values = {state.value for state in TERMINAL_STATES}
    deadline = time.monotonic() + timeout_s
    pos = 0
    while time.monotonic() < deadline:
        path = store.events_path(job_id)
        if path.is_file():
            with open(path, "rb") as handle:
                handle.seek(pos)
                data = handle.read()
            lines = data.split(b"\n")
            pos += len(data) - len(lines[-1])
            for raw in lines[:-1]:
                if not raw.strip():
                    continue
                text = raw.decode("utf-8")
                yield f"data: {text}\n\n"
                try:
                    event = json.loads(text)
                except ValueError:
                    continue
                if event.get("type") == "state" and event.get("state") in terminal_values:
                    return
        elif not store.exists(job_id):
            return
        time.sleep(SSE_POLL_S)


def create_app(
    manager: JobManager,
    static_dir: Path | None = None,
    sse_timeout_s: float = 600.0,
) -> FastAPI:
    app = FastAPI(title="atrain", docs_url=None, redoc_url=None)
    app.state.manager = manager

    @app.post("/api/jobs", status_code=201)
    async def create_job(request: Request):
        content_type = request.headers.get("content-type", "")
        if "multipart/form-data" not in content_type:
            return _error(400, "bad_request", "expected a multipart/form-data body")
        try:
            fields = parse_multipart(content_type, await request.body())
        except ValueError as exc:
            return _error(400, "bad_request", f"unreadable multipart body: {exc}")
        if "file" not in fields:
            return _error(400, "bad_request", "missing 'file' field")
        filename, content = fields["file"]
        if not content:
            return _error(400, "bad_request", "uploaded file is empty")
        options: dict = {}
        if "config" in fields:
            try:
                options = json.loads(fields["config"][1].decode("utf-8"))
            except ValueError:
                return _error(400, "bad_request", "'config' field must be a JSON object")
            if not isinstance(options, dict):
                return _error(400, "bad_request", "'config' field must be a JSON object")
        saved = manager.save_upload(filename or "upload", content)
        try:
            config = _config_from_options(saved, options)
        except (TypeError, ValueError) as exc:
            return _error(400, "invalid_config", str(exc))
        try:
            record = manager.create_job(config)
        except InvalidConfigError as exc:
            return _error(400, "invalid_config", str(exc))
        except ModelNotInstalledError as exc:
            return _error(409, "model_not_installed", str(exc))
        except (FileNotFoundError, ATrainError) as exc:
            return _error(400, "bad_request", str(exc))
        manager.submit(record.job_id)
        return JSONResponse({"job_id": record.job_id}, status_code=201)

    @app.get("/api/jobs")
    def list_jobs():
        return {"jobs": [_job_dict(record) for record in manager.list_jobs()]}

    @app.get("/api/jobs/{job_id}")
    def get_job(job_id: str):
        try:
            record = manager.get_job(job_id)
        except JobNotFoundError as exc:
            return _error(404, "not_found", str(exc))
        return _job_dict(record)

    @app.get("/api/jobs/{job_id}/events")
    def job_events(job_id: str):
        if not manager.store.exists(job_id):
            return _error(404, "not_found", f"no job named '{job_id}'")
        stream = _event_stream(manager.store, job_id, timeout_s=sse_timeout_s)
        return StreamingResponse(
            stream,
            media_type="text/event-stream",
            headers={"Cache-Control": "no-cache", "X-Accel-Buffering": "no"},
        )

    @app.get("/api/jobs/{job_id}/files/{name}")
    def job_file(job_id: str, name: str):
        try:
            record = manager.get_job(job_id)
        except JobNotFoundError as exc:
            return _error(404, "not_found", str(exc))
        if name not in EXPORT_FILE_NAMES:
            return _error(404, "not_found", f"'{name}' is not an export of this tool")
        path = record.directory / name
        if not path.is_file():
            return _error(404, "not_found", f"{name} has not been produced for {job_id}")
        media_type = "application/json" if name == RAW_JSON else "text/plain"
        return FileResponse(path, filename=name, media_type=media_type)

    @app.delete("/api/jobs/{job_id}")
    def delete_job(job_id: str):
        try:
            manager.delete_job(job_id)
        except JobNotFoundError as exc:
            return _error(404, "not_found", str(exc))
        return {"deleted": job_id}

    @app.get("/api/models")
    def list_models():
        return {
            "models": [
                {
                    "model_id": spec.model_id,
                    "tier": spec.tier,
                    "installed": spec.installed,
                    "hint": spec.size_hint,
                }
                for spec in manager.list_models()
            ]
        }

    index_file = Path(static_dir) / "index.html" if static_dir else None

    @app.get("/")
    def index():
        if index_file is not None and index_file.is_file():
            return FileResponse(index_file, media_type="text/html")
        return {"name": "atrain", "api": "/api"}

    return app
