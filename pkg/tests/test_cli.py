import json

import numpy as np
import pytest

from planconnect.cli import run_cli
from planconnect.farm import TaskStatus, load_manifest
from planconnect.fields import FieldKind, load_f32
from planconnect.grid import read_pgm


@pytest.fixture
def plans(tmp_path):
    out = tmp_path / "plans"
    code = run_cli(
        [
            "generate",
            "--count", "2",
            "--size", "24x24",
            "--seed", "5",
            "--out", str(out),
            "--analyses", "spatial,sdf",
        ]
    )
    assert code == 0
    return out


class TestGenerate:
    def test_writes_plans_and_manifest(self, plans):
        assert sorted(p.name for p in plans.glob("*.pgm")) == ["plan_00000.pgm", "plan_00001.pgm"]
        tasks = load_manifest(plans / "manifest.jsonl")
        assert len(tasks) == 4
        assert all(t.status is TaskStatus.PENDING for t in tasks)

    def test_bad_analysis_name_is_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as excinfo:
            run_cli(["generate", "--count", "1", "--out", str(tmp_path), "--analyses", "bogus"])
        assert excinfo.value.code == 2

    def test_missing_subcommand_is_usage_error(self):
        with pytest.raises(SystemExit) as excinfo:
            run_cli([])
        assert excinfo.value.code == 2


class TestAnalyze:
    def test_writes_gray_pgm_and_sidecar(self, plans, tmp_path):
        out = tmp_path / "field.pgm"
        code = run_cli(
            [
                "analyze",
                "--input", str(plans / "plan_00000.pgm"),
                "--analysis", "spatial",
                "--out", str(out),
                "--sidecar",
            ]
        )
        assert code == 0
        gray = read_pgm(out)
        assert gray.pixels.shape == (24, 24)
        field = load_f32(str(out) + ".f32", FieldKind.SPATIAL_CONNECTIVITY)
        assert field.values.shape == (24, 24)

    def test_missing_input_is_error_exit(self, tmp_path):
        code = run_cli(
            [
                "analyze",
                "--input", str(tmp_path / "nope.pgm"),
                "--analysis", "sdf",
                "--out", str(tmp_path / "x.pgm"),
            ]
        )
        assert code == 1

    def test_visibility_backends_agree(self, plans, tmp_path):
        outputs = {}
        for backend in ("shadowcast", "exact"):
            out = tmp_path / f"{backend}.pgm"
            assert run_cli(
                [
                    "analyze",
                    "--input", str(plans / "plan_00000.pgm"),
                    "--analysis", "visual",
                    "--out", str(out),
                    "--visibility", backend,
                ]
            ) == 0
            outputs[backend] = read_pgm(out).pixels
        assert np.array_equal(outputs["shadowcast"], outputs["exact"])


class TestFarmLocal:
    def test_runs_manifest_and_prints_json(self, plans, capsys):
        code = run_cli(["farm", "local", "--manifest", str(plans / "manifest.jsonl"), "--workers", "2", "--json"])
        assert code == 0
        stats = json.loads(capsys.readouterr().out)
        assert stats["sample_count"] == 4
        assert stats["speedup"] > 0
        assert all(t.status is TaskStatus.DONE for t in load_manifest(plans / "manifest.jsonl"))

    def test_table_output(self, plans, capsys):
        code = run_cli(["farm", "local", "--manifest", str(plans / "manifest.jsonl"), "--workers", "1"])
        assert code == 0
        out = capsys.readouterr().out
        assert "No. of samples" in out
        assert "Speed-up" in out


class TestDatasetBuild:
    def test_end_to_end(self, plans, tmp_path, capsys):
        out = tmp_path / "ds"
        code = run_cli(
            [
                "dataset", "build",
                "--plans", str(plans),
                "--analyses", "spatial",
                "--out", str(out),
                "--workers", "2",
            ]
        )
        assert code == 0
        records = [json.loads(l) for l in (out / "dataset.jsonl").read_text().splitlines()]
        assert len(records) == 2
        assert {r["analysis"] for r in records} == {"SPATIAL"}

    def test_bad_split_is_error_exit(self, plans, tmp_path):
        code = run_cli(
            ["dataset", "build", "--plans", str(plans), "--out", str(tmp_path / "ds"), "--split", "0.5,0.5"]
        )
        assert code == 1


class TestBench:
    def test_json_on_stdout(self, plans, capsys):
        code = run_cli(
            ["bench", "--input", str(plans / "plan_00000.pgm"), "--analysis", "sdf", "--repeat", "2"]
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["analysis"] == "sdf"
        assert len(report["timings"]) == 2
        assert report["mean"] > 0
