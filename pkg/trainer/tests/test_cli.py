import json

import pytest

from surrogate_trainer.cli import run_cli


@pytest.fixture
def trained_run(dataset_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    code = run_cli(
        [
            "fit",
            "--arch", "unet",
            "--data", str(dataset_dir),
            "--epochs", "2",
            "--batch-size", "4",
            "--input-size", "32",
            "--seed", "1",
            "--out", str(out),
        ]
    )
    assert code == 0
    return out


class TestFit:
    def test_writes_artifacts(self, trained_run, capsys):
        assert (trained_run / "checkpoint.pt").exists()
        assert (trained_run / "history.jsonl").exists()

    def test_missing_data_is_error_exit(self, tmp_path):
        code = run_cli(["fit", "--data", str(tmp_path), "--epochs", "1", "--out", str(tmp_path / "o")])
        assert code == 1

    def test_unknown_arch_is_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as excinfo:
            run_cli(["fit", "--arch", "vae", "--data", str(tmp_path), "--out", str(tmp_path)])
        assert excinfo.value.code == 2


class TestEval:
    def test_writes_metrics(self, trained_run, dataset_dir, tmp_path, capsys):
        out = tmp_path / "report"
        code = run_cli(
            [
                "eval",
                "--checkpoint", str(trained_run / "checkpoint.pt"),
                "--data", str(dataset_dir),
                "--split", "TEST",
                "--out", str(out),
            ]
        )
        assert code == 0
        printed = json.loads(capsys.readouterr().out)
        metrics = json.loads((out / "metrics.json").read_text())
        assert printed["mean_mse"] == pytest.approx(metrics["mean_mse"])


class TestBench:
    def test_json_on_stdout(self, trained_run, capsys):
        code = run_cli(["bench", "--checkpoint", str(trained_run / "checkpoint.pt")])
        assert code == 0
        result = json.loads(capsys.readouterr().out)
        assert result["mean_seconds"] > 0
        assert len(result["timings"]) >= 20
