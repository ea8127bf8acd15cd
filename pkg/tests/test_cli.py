"""Command line tests driven through main() with captured output."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import pytest

from atrain import __version__
from atrain.cli import main
from atrain.export import EXPORT_FILE_NAMES

import helpers


def run_cli(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
    assert f"atrain {__version__}" in capsys.readouterr().out


def test_command_required(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main([])
    assert excinfo.value.code == 2


class TestTranscribe:
    def test_mock_run_end_to_end(self, tmp_path: Path, capsys):
        clip = helpers.make_clip(tmp_path)
        data_dir = tmp_path / "data"
        code, out, err = run_cli(
            capsys,
            "transcribe", str(clip),
            "--engine", "mock",
            "--model", "tiny",
            "--speakers", "2",
            "--data-dir", str(data_dir),
        )
        assert code == 0, err
        assert out.startswith("job ")
        assert "[COMPLETED]" in out
        assert "[DIARIZING]" in out
        assert "rpt" in out
        printed_paths = [Path(line) for line in out.splitlines()[-4:]]
        assert [p.name for p in printed_paths] == list(EXPORT_FILE_NAMES)
        for path in printed_paths:
            assert path.is_file()

    def test_speakers_off_skips_diarizing(self, tmp_path: Path, capsys):
        clip = helpers.make_clip(tmp_path)
        code, out, _ = run_cli(
            capsys,
            "transcribe", str(clip),
            "--engine", "mock",
            "--speakers", "off",
            "--data-dir", str(tmp_path / "data"),
        )
        assert code == 0
        assert "[DIARIZING]" not in out
        assert "[ALIGNING]" in out
        assert "[COMPLETED]" in out

    def test_rejects_bad_speakers_value(self, tmp_path: Path, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["transcribe", "x.wav", "--speakers", "many"])
        assert excinfo.value.code == 2
        assert "speakers" in capsys.readouterr().err

    def test_missing_input_file(self, tmp_path: Path, capsys):
        code, _, err = run_cli(
            capsys,
            "transcribe", str(tmp_path / "absent.wav"),
            "--engine", "mock",
            "--data-dir", str(tmp_path / "data"),
        )
        assert code == 1
        assert "error:" in err
        assert "not found" in err

    def test_real_engine_requires_installed_model(self, tmp_path: Path, capsys):
        clip = helpers.make_clip(tmp_path)
        code, _, err = run_cli(
            capsys,
            "transcribe", str(clip),
            "--data-dir", str(tmp_path / "data"),
        )
        assert code == 1
        assert "not installed" in err


class TestJobsCommands:
    def test_list_show_delete_cycle(self, tmp_path: Path, capsys):
        clip = helpers.make_clip(tmp_path)
        data_dir = str(tmp_path / "data")
        code, out, _ = run_cli(
            capsys,
            "transcribe", str(clip), "--engine", "mock", "--data-dir", data_dir,
        )
        assert code == 0
        job_id = out.splitlines()[0].removeprefix("job ")

        code, out, _ = run_cli(capsys, "jobs", "list", "--data-dir", data_dir)
        assert code == 0
        assert job_id in out
        assert "COMPLETED" in out
        assert "rpt=" in out

        code, out, _ = run_cli(capsys, "jobs", "show", job_id, "--data-dir", data_dir)
        assert code == 0
        record = json.loads(out)
        assert record["job_id"] == job_id
        assert record["state"] == "COMPLETED"
        assert sorted(record["files"]) == sorted(EXPORT_FILE_NAMES)

        code, out, _ = run_cli(capsys, "jobs", "delete", job_id, "--data-dir", data_dir)
        assert code == 0
        assert f"deleted {job_id}" in out

        code, _, err = run_cli(capsys, "jobs", "show", job_id, "--data-dir", data_dir)
        assert code == 1
        assert "error:" in err

        code, out, _ = run_cli(capsys, "jobs", "list", "--data-dir", data_dir)
        assert code == 0
        assert out == ""


class TestModelsCommands:
    def test_list_default_manifest(self, tmp_path: Path, capsys):
        code, out, _ = run_cli(
            capsys, "models", "list", "--data-dir", str(tmp_path / "data")
        )
        assert code == 0
        lines = out.splitlines()
        assert [line.split()[0] for line in lines] == [
            "tiny", "base", "small", "medium", "large",
        ]
        assert all("not installed" in line for line in lines)
        assert "smallest/fastest" in lines[0]

    def write_demo_manifest(self, tmp_path: Path) -> Path:
        remote = tmp_path / "remote"
        remote.mkdir()
        payload = b"demo model weights"
        (remote / "model.bin").write_bytes(payload)
        manifest = {
            "models": {
                "demo": {
                    "tier": "small",
                    "base_url": remote.as_uri(),
                    "files": [
                        {
                            "name": "model.bin",
                            "sha256": hashlib.sha256(payload).hexdigest(),
                            "size_bytes": len(payload),
                        }
                    ],
                }
            }
        }
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps(manifest), encoding="utf-8")
        return path

    def test_prefetch_then_list_installed(self, tmp_path: Path, capsys):
        manifest = self.write_demo_manifest(tmp_path)
        data_dir = str(tmp_path / "data")
        code, out, _ = run_cli(
            capsys,
            "models", "prefetch", "demo",
            "--manifest", str(manifest),
            "--data-dir", data_dir,
        )
        assert code == 0
        assert "model.bin (100%)" in out
        assert "demo installed at" in out

        code, out, _ = run_cli(
            capsys,
            "models", "list", "--manifest", str(manifest), "--data-dir", data_dir,
        )
        assert code == 0
        (line,) = out.splitlines()
        assert line.startswith("demo")
        assert "not installed" not in line
        assert "installed" in line

    def test_prefetch_unknown_model(self, tmp_path: Path, capsys):
        manifest = self.write_demo_manifest(tmp_path)
        code, _, err = run_cli(
            capsys,
            "models", "prefetch", "nope",
            "--manifest", str(manifest),
            "--data-dir", str(tmp_path / "data"),
        )
        assert code == 1
        assert "error:" in err


class TestBenchCommands:
    def test_run_then_report(self, tmp_path: Path, capsys):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        helpers.make_clip(corpus, seconds=1.0)
        out_csv = tmp_path / "results.csv"
        code, out, _ = run_cli(
            capsys,
            "bench", "run",
            "--corpus", str(corpus),
            "--models", "tiny,base",
            "--engine", "mock",
            "--out", str(out_csv),
            "--machine-label", "ci",
            "--data-dir", str(tmp_path / "data"),
        )
        assert code == 0
        assert "clip.wav x tiny: rpt=" in out
        assert "2 cells, 0 failed" in out
        assert out_csv.is_file()
        assert len(out_csv.read_text(encoding="utf-8").splitlines()) == 3

        md_path = tmp_path / "report.md"
        json_path = tmp_path / "report.json"
        code, out, _ = run_cli(
            capsys,
            "bench", "report", str(out_csv),
            "--out-md", str(md_path),
            "--out-json", str(json_path),
        )
        assert code == 0
        assert "# Relative processing time" in out
        assert "## ci (cpu)" in out
        assert md_path.is_file()
        assert json.loads(json_path.read_text(encoding="utf-8"))["series"]

    def test_models_accept_repeated_flags(self, tmp_path: Path, capsys):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        helpers.make_clip(corpus, seconds=1.0)
        code, out, _ = run_cli(
            capsys,
            "bench", "run",
            "--corpus", str(corpus),
            "--models", "tiny", "base",
            "--engine", "mock",
            "--out", str(tmp_path / "r.csv"),
            "--data-dir", str(tmp_path / "data"),
        )
        assert code == 0
        assert "2 cells" in out

    def test_report_missing_csv(self, tmp_path: Path, capsys):
        code, _, err = run_cli(capsys, "bench", "report", str(tmp_path / "absent.csv"))
        assert code == 1
        assert "error:" in err

    def test_report_empty_csv(self, tmp_path: Path, capsys):
        out_csv = tmp_path / "empty.csv"
        out_csv.write_text(
            "machine_label,device,model_id,file,duration_s,total_s,rpt,"
            "convert_s,transcribe_s,diarize_s,align_s,export_s,error\n",
            encoding="utf-8",
        )
        code, _, err = run_cli(capsys, "bench", "report", str(out_csv))
        assert code == 1
        assert "error:" in err
