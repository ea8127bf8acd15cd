"""Command line entry points."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .bench import run_benchmark, write_report
from .config import Settings
from .engines.mock import MockEngineFactory
from .errors import ATrainError
from .export import EXPORT_FILE_NAMES
from .jobs.manager import JobManager
from .jobs.records import JobConfig, JobState
from .models import ModelRegistry, load_manifest

DEFAULT_PORT = 5514


def _make_settings(args) -> Settings:
    if getattr(args, "data_dir", None):
        return Settings(data_dir=Path(args.data_dir))
    return Settings()


def _make_factory(args, settings: Settings):
    if getattr(args, "engine", "real") == "mock":
        return MockEngineFactory(delay_factor=getattr(args, "mock_delay", 0.0))
    from .engines.real import RealEngineFactory

    return RealEngineFactory(ModelRegistry(settings.model_dir))


def _parse_speakers(value: str) -> int | str:
    if value in ("off", "auto"):
        return value
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"speakers must be 'off', 'auto' or a positive integer, not '{value}'"
        )


def _print_event(event: dict) -> None:
    if event.get("type") == "state":
        line = f"[{event['state']}]"
        if event.get("error"):
            line += f" {event['error']}"
        print(line, flush=True)


def _cmd_transcribe(args) -> int:
    settings = _make_settings(args)
    factory = _make_factory(args, settings)
    manager = JobManager(
        settings.data_dir, factory, settings=settings, tool_version=__version__
    )
    config = JobConfig(
        input_path=Path(args.file),
        model_id=args.model,
        language=args.language,
        num_speakers=args.speakers,
        device=args.device,
        translate=args.translate,
        gap_tolerance_s=args.gap_tolerance,
    )
    record = manager.create_job(config)
    print(f"job {record.job_id}")
    record = manager.run_blocking(record.job_id, on_event=_print_event)
    if record.state is not JobState.COMPLETED:
        print(f"error: {record.error}", file=sys.stderr)
        return 1
    print(f"duration: {record.duration_s:.1f}s")
    print(f"processing time: {record.processing_time_s:.1f}s (rpt {record.rpt:.2f})")
    for name in EXPORT_FILE_NAMES:
        print(record.directory / name)
    return 0


def _cmd_models_list(args) -> int:
    settings = _make_settings(args)
    manifest = load_manifest(Path(args.manifest)) if args.manifest else None
    registry = ModelRegistry(settings.model_dir, manifest=manifest)
    for spec in registry.list_models():
        state = "installed" if spec.installed else "not installed"
        print(f"{spec.model_id:<10} {spec.tier:<8} {state:<14} {spec.size_hint}")
    return 0


def _cmd_models_prefetch(args) -> int:
    settings = _make_settings(args)
    manifest = load_manifest(Path(args.manifest)) if args.manifest else None
    registry = ModelRegistry(settings.model_dir, manifest=manifest)

    def progress(name: str, fraction: float) -> None:
        print(f"  {name} ({fraction * 100:.0f}%)", flush=True)

    spec = registry.prefetch(args.model_id, progress=progress)
    print(f"{spec.model_id} installed at {registry.model_path(spec.model_id)}")
    return 0


def _cmd_jobs_list(args) -> int:
    settings = _make_settings(args)
    manager = JobManager(settings.data_dir, MockEngineFactory(), settings=settings)
    for record in manager.list_jobs():
        rpt = f"{record.rpt:.2f}" if record.rpt is not None else "-"
        print(
            f"{record.job_id:<40} {record.state.value:<12} "
            f"{record.config.model_id:<10} rpt={rpt}"
        )
    return 0


def _cmd_jobs_show(args) -> int:
    settings = _make_settings(args)
    manager = JobManager(settings.data_dir, MockEngineFactory(), settings=settings)
    record = manager.get_job(args.job_id)
    data = record.to_dict()
    data["files"] = [
        name for name in EXPORT_FILE_NAMES if (record.directory / name).is_file()
    ]
    print(json.dumps(data, ensure_ascii=False, indent=2))
    return 0


def _cmd_jobs_delete(args) -> int:
    settings = _make_settings(args)
    manager = JobManager(settings.data_dir, MockEngineFactory(), settings=settings)
    manager.delete_job(args.job_id)
    print(f"deleted {args.job_id}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .jobs.api import create_app

    settings = _make_settings(args)
    factory = _make_factory(args, settings)
    manager = JobManager(
        settings.data_dir, factory, settings=settings, tool_version=__version__
    )
    manager.start_worker()
    static_dir = Path(args.static_dir) if args.static_dir else None
    app = create_app(manager, static_dir=static_dir)
    print(f"serving on http://{args.host}:{args.port}")
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    finally:
        manager.close()
    return 0


def _cmd_bench_run(args) -> int:
    settings = _make_settings(args)
    factory = _make_factory(args, settings)
    model_ids = []
    for chunk in args.models:
        model_ids.extend(m for m in chunk.split(",") if m)

    def on_cell(result) -> None:
        status = f"rpt={result.rpt:.3f}" if result.rpt is not None else f"error: {result.error}"
        print(f"{result.file} x {result.model_id}: {status}", flush=True)

    results = run_benchmark(
        Path(args.corpus),
        model_ids,
        factory,
        device=args.device,
        reps=args.reps,
        out_csv=Path(args.out),
        machine_label=args.machine_label,
        media_converter=settings.media_converter,
        on_cell=on_cell,
    )
    failed = sum(1 for r in results if r.error)
    print(f"{len(results)} cells, {failed} failed, results in {args.out}")
    return 0


def _cmd_bench_report(args) -> int:
    report, _ = write_report(
        Path(args.csv),
        out_md=Path(args.out_md) if args.out_md else None,
        out_json=Path(args.out_json) if args.out_json else None,
    )
    print(report)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atrain", description="Offline transcription with speaker labels."
    )
    parser.add_argument("--version", action="version", version=f"atrain {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--data-dir", help="override the data directory")

    def add_engine(p):
        p.add_argument(
            "--engine", choices=("real", "mock"), default="real",
            help="mock runs offline against sidecar fixtures",
        )
        p.add_argument(
            "--mock-delay", type=float, default=0.0,
            help="mock engine delay as a fraction of recording length",
        )

    p = sub.add_parser("transcribe", help="transcribe one file end to end")
    p.add_argument("file")
    p.add_argument("--model", default="medium")
    p.add_argument("--language", default="auto")
    p.add_argument(
        "--speakers", type=_parse_speakers, default="auto",
        help="'off' disables speaker labels, 'auto' detects, N forces a count",
    )
    p.add_argument("--device", choices=("auto", "cpu", "gpu"), default="auto")
    p.add_argument("--translate", action="store_true", help="translate to English")
    p.add_argument("--gap-tolerance", type=float, default=2.0)
    add_common(p)
    add_engine(p)
    p.set_defaults(func=_cmd_transcribe)

    models = sub.add_parser("models", help="manage local models")
    models_sub = models.add_subparsers(dest="models_command", required=True)
    p = models_sub.add_parser("list", help="show install state per model")
    p.add_argument("--manifest", help="alternate manifest file")
    add_common(p)
    p.set_defaults(func=_cmd_models_list)
    p = models_sub.add_parser("prefetch", help="download and verify one model")
    p.add_argument("model_id")
    p.add_argument("--manifest", help="alternate manifest file")
    add_common(p)
    p.set_defaults(func=_cmd_models_prefetch)

    jobs = sub.add_parser("jobs", help="inspect the job archive")
    jobs_sub = jobs.add_subparsers(dest="jobs_command", required=True)
    p = jobs_sub.add_parser("list", help="all jobs, newest first")
    add_common(p)
    p.set_defaults(func=_cmd_jobs_list)
    p = jobs_sub.add_parser("show", help="full record of one job")
    p.add_argument("job_id")
    add_common(p)
    p.set_defaults(func=_cmd_jobs_show)
    p = jobs_sub.add_parser("delete", help="remove a job and its files")
    p.add_argument("job_id")
    add_common(p)
    p.set_defaults(func=_cmd_jobs_delete)

    p = sub.add_parser("serve", help="run the local web interface")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=DEFAULT_PORT)
    p.add_argument("--static-dir", help="directory with the web UI build")
    add_common(p)
    add_engine(p)
    p.set_defaults(func=_cmd_serve)

    bench = sub.add_parser("bench", help="relative processing time benchmarks")
    bench_sub = bench.add_subparsers(dest="bench_command", required=True)
    p = bench_sub.add_parser("run", help="run the corpus x model matrix")
    p.add_argument("--corpus", required=True)
    p.add_argument("--models", required=True, nargs="+")
    p.add_argument("--device", choices=("auto", "cpu", "gpu"), default="cpu")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--out", default="results.csv")
    p.add_argument("--machine-label")
    add_common(p)
    add_engine(p)
    p.set_defaults(func=_cmd_bench_run)
    p = bench_sub.add_parser("report", help="markdown report from a results CSV")
    p.add_argument("csv")
    p.add_argument("--out-md")
    p.add_argument("--out-json")
    p.set_defaults(func=_cmd_bench_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ATrainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
