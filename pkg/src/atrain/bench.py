"""Relative processing time benchmarks across a corpus and model tiers.

Each cell of the matrix (file x model x rep) runs the full pipeline in a
throwaway data dir and appends one CSV row as soon as it finishes, so a
crash mid-matrix loses at most the cell in flight. Reports are rebuilt
from the CSV alone, which makes them reproducible after the fact.
"""

from __future__ import annotations

import csv
import json
import platform
import shutil
import statistics
import tempfile
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .config import Settings
from .engines.base import EngineFactory
from .errors import EmptyResultsError
from .jobs.manager import JobManager
from .jobs.records import JobConfig, JobState
from .models import MODEL_TIERS

CSV_COLUMNS = (
    "machine_label",
    "device",
    "model_id",
    "file",
    "duration_s",
    "total_s",
    "rpt",
    "convert_s",
    "transcribe_s",
    "diarize_s",
    "align_s",
    "export_s",
    "error",
)

# Larger models on plain processors land in this range; a GPU should stay
# well under it. Values outside are worth a second look, nothing more.
CPU_LARGE_RPT_RANGE = (1.0, 3.5)
GPU_LARGE_RPT_MAX = 0.5
ADVISORY_TIERS = frozenset({"medium", "large"})

_STAGE_COLUMNS = {
    "CONVERTING": "convert_s",
    "TRANSCRIBING": "transcribe_s",
    "DIARIZING": "diarize_s",
    "ALIGNING": "align_s",
    "EXPORTING": "export_s",
}

_SIDECAR_SUFFIXES = (".transcript.json", ".turns.json")


@dataclass
class BenchResult:
    machine_label: str
    device: str
    model_id: str
    file: str
    duration_s: float | None = None
    total_s: float | None = None
    rpt: float | None = None
    convert_s: float | None = None
    transcribe_s: float | None = None
    diarize_s: float | None = None
    align_s: float | None = None
    export_s: float | None = None
    error: str | None = None


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def append_result(csv_path: Path, result: BenchResult) -> None:
    """Append one row, creating the file with a header as needed."""
    csv_path = Path(csv_path)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    write_header = not csv_path.is_file() or csv_path.stat().st_size == 0
    with open(csv_path, "a", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        if write_header:
            writer.writerow(CSV_COLUMNS)
        writer.writerow(
            [_format_cell(getattr(result, column)) for column in CSV_COLUMNS]
        )
        handle.flush()


def read_results(csv_path: Path) -> list[BenchResult]:
    float_fields = {
        f.name for f in fields(BenchResult) if f.name not in
        ("machine_label", "device", "model_id", "file", "error")
    }
    results = []
    with open(csv_path, encoding="utf-8", newline="") as handle:
        for row in csv.DictReader(handle):
            kwargs = {}
            for column in CSV_COLUMNS:
                raw = row.get(column, "")
                if column in float_fields:
                    kwargs[column] = float(raw) if raw not in ("", None) else None
                else:
                    kwargs[column] = raw if raw not in ("", None) else None
            if kwargs["machine_label"] is None or kwargs["model_id"] is None:
                continue
            results.append(BenchResult(**kwargs))
    return results


def corpus_files(corpus_dir: Path) -> list[Path]:
    """Media files in the corpus, sorted by name. Sidecars are skipped."""
    files = []
    for entry in sorted(Path(corpus_dir).iterdir()):
        if not entry.is_file() or entry.name.startswith("."):
            continue
        if any(entry.name.endswith(suffix) for suffix in _SIDECAR_SUFFIXES):
            continue
        files.append(entry)
    return files


def default_machine_label() -> str:
    return platform.node() or "local"


def run_benchmark(
    corpus_dir: Path,
    model_ids: Sequence[str],
    engine_factory: EngineFactory,
    device: str = "cpu",
    reps: int = 1,
    out_csv: Path | None = None,
    machine_label: str | None = None,
    media_converter: str | None = None,
    on_cell: Callable[[BenchResult], None] | None = None,
) -> list[BenchResult]:
    """Run the full matrix serially and return one result per cell.

    A failing cell records its error and the matrix moves on; partial
    results are already on disk when that happens.
    """
    label = machine_label or default_machine_label()
    files = corpus_files(corpus_dir)
    if not files:
        raise EmptyResultsError(f"no media files found in {corpus_dir}")
    results = []
    for media_file in files:
        for model_id in model_ids:
            for _ in range(max(1, reps)):
                result = _run_cell(
                    media_file, model_id, engine_factory, device, label, media_converter
                )
                results.append(result)
                if out_csv is not None:
                    append_result(out_csv, result)
                if on_cell is not None:
                    on_cell(result)
    return results


def _run_cell(
    media_file: Path,
    model_id: str,
    engine_factory: EngineFactory,
    device: str,
    label: str,
    media_converter: str | None,
) -> BenchResult:
    result = BenchResult(
        machine_label=label, device=device, model_id=model_id, file=media_file.name
    )
    workdir = Path(tempfile.mkdtemp(prefix="atrain-bench-"))
    try:
        settings = Settings(data_dir=workdir, media_converter=media_converter)
        manager = JobManager(workdir, engine_factory, settings=settings)
        record = manager.create_job(
            JobConfig(input_path=media_file, model_id=model_id, device=device)
        )
        record = manager.run_blocking(record.job_id)
        result.duration_s = record.duration_s
        result.total_s = record.processing_time_s
        result.rpt = record.rpt
        for stage, column in _STAGE_COLUMNS.items():
            setattr(result, column, record.stage_times_s.get(stage))
        if record.state is not JobState.COMPLETED:
            result.error = record.error or "failed"
    except Exception as exc:
        result.error = str(exc) or exc.__class__.__name__
    finally:
        shutil.rmtree(workdir, ignore_errors=True)
    return result


def tier_of(model_id: str) -> str | None:
    if model_id in MODEL_TIERS:
        return model_id
    for tier in MODEL_TIERS:
        if model_id.startswith(tier):
            return tier
    return None


def _mean_rpt(cells: Iterable[BenchResult]) -> float | None:
    values = [c.rpt for c in cells if c.rpt is not None]
    return statistics.fmean(values) if values else None


def advisory_flags(results: Sequence[BenchResult]) -> list[dict]:
    """Out-of-range observations for larger models. Advisory only."""
    flags = []
    grouped: dict[tuple[str, str, str], list[BenchResult]] = {}
    for r in results:
        grouped.setdefault((r.machine_label, r.device, r.model_id), []).append(r)
    for (label, device, model_id), cells in sorted(grouped.items()):
        tier = tier_of(model_id)
        if tier not in ADVISORY_TIERS:
            continue
        mean = _mean_rpt(cells)
        if mean is None:
            continue
        if device == "cpu":
            low, high = CPU_LARGE_RPT_RANGE
            if not (low <= mean <= high):
                flags.append(
                    {
                        "machine_label": label,
                        "device": device,
                        "model_id": model_id,
                        "rpt": mean,
                        "note": (
                            f"cpu rpt {mean:.3f} outside the usual "
                            f"[{low}, {high}] band for {tier} models"
                        ),
                    }
                )
        elif device == "gpu" and mean > GPU_LARGE_RPT_MAX:
            flags.append(
                {
                    "machine_label": label,
                    "device": device,
                    "model_id": model_id,
                    "rpt": mean,
                    "note": (
                        f"gpu rpt {mean:.3f} above the usual "
                        f"{GPU_LARGE_RPT_MAX} ceiling for {tier} models"
                    ),
                }
            )
    return flags


def plot_data(results: Sequence[BenchResult]) -> dict:
    """Chart-ready points: model tier ordinal on x, mean rpt on y."""
    series_map: dict[tuple[str, str], dict] = {}
    grouped: dict[tuple[str, str, str], list[BenchResult]] = {}
    for r in results:
        grouped.setdefault((r.machine_label, r.device, r.model_id), []).append(r)
    for (label, device, model_id), cells in sorted(grouped.items()):
        mean = _mean_rpt(cells)
        if mean is None:
            continue
        tier = tier_of(model_id)
        ordinal = MODEL_TIERS.index(tier) if tier in MODEL_TIERS else -1
        series = series_map.setdefault(
            (label, device),
            {"machine_label": label, "device": device, "points": []},
        )
        series["points"].append(
            {"model_id": model_id, "tier_ordinal": ordinal, "rpt": mean}
        )
    for series in series_map.values():
        series["points"].sort(key=lambda p: (p["tier_ordinal"], p["model_id"]))
    return {"series": list(series_map.values())}


def emit_report(results: Sequence[BenchResult]) -> tuple[str, dict]:
    """Build the markdown report and plot data from parsed results."""
    if not results:
        raise EmptyResultsError("no benchmark rows to report on")
    lines = ["# Relative processing time", ""]
    lines.append(
        "rpt = processing time / recording length; 1.0 means real time."
    )
    lines.append("")
    by_machine: dict[tuple[str, str], list[BenchResult]] = {}
    for r in results:
        by_machine.setdefault((r.machine_label, r.device), []).append(r)
    for (label, device), rows in sorted(by_machine.items()):
        lines.append(f"## {label} ({device})")
        lines.append("")
        lines.append("| model | file | duration_s | total_s | rpt | error |")
        lines.append("|---|---|---|---|---|---|")
        order = {tier: i for i, tier in enumerate(MODEL_TIERS)}
        rows = sorted(
            rows,
            key=lambda r: (order.get(tier_of(r.model_id) or "", 99), r.model_id, r.file),
        )
        for r in rows:
            lines.append(
                "| {model} | {file} | {dur} | {total} | {rpt} | {err} |".format(
                    model=r.model_id,
                    file=r.file,
                    dur="" if r.duration_s is None else f"{r.duration_s:.1f}",
                    total="" if r.total_s is None else f"{r.total_s:.2f}",
                    rpt="" if r.rpt is None else f"{r.rpt:.3f}",
                    err=r.error or "",
                )
            )
        lines.append("")
    flags = advisory_flags(results)
    if flags:
        lines.append("## Advisories")
        lines.append("")
        for flag in flags:
            lines.append(
                f"- {flag['machine_label']} ({flag['device']}) "
                f"{flag['model_id']}: {flag['note']}"
            )
        lines.append("")
    report = "\n".join(lines)
    return report, plot_data(results)


def write_report(csv_path: Path, out_md: Path | None = None, out_json: Path | None = None):
    """Report straight from a results CSV; returns (markdown, plot data)."""
    results = read_results(Path(csv_path))
    report, data = emit_report(results)
    if out_md is not None:
        Path(out_md).write_text(report + "\n", encoding="utf-8")
    if out_json is not None:
        Path(out_json).write_text(
            json.dumps(data, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
    return report, data
