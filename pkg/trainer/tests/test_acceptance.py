"""Acceptance gate for the surrogate trainer, one pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s``. The desk-scale training
gate is an overnight job and only runs when RUN_DESK_SCALE=1 is set; the
inference speed comparison reproduces a GPU-vs-simulation claim and asserts
only where a CUDA device exists, reporting the measured CPU ratio elsewhere.
"""

import json
import os
import subprocess
import time

import pytest
import torch

from surrogate_trainer import (
    TrainConfig,
    UNetConfig,
    build_unet,
    combined_loss,
    count_parameters,
    evaluate_model,
    gdl_loss,
    mse_loss,
    train_unet,
)

from conftest import run_planconnect


def report(name: str, ok: bool, detail: str = "") -> None:
    suffix = f" ({detail})" if detail else ""
    print(f"[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'}{suffix}")
    assert ok, f"{name}{suffix}"


class TestAcceptance:
    def test_parameter_count(self):
        """Default U-Net within 0.1% of the 31,031,685-parameter reference."""
        count = count_parameters(build_unet())
        rel = abs(count - 31_031_685) / 31_031_685
        report("U-Net parameter count", rel < 0.001, f"{count:,} parameters, rel err {rel:.2e}")

    def test_loss_fixtures(self):
        """GDL fixtures exact; combined loss with zero GDL weight is pure MSE."""
        y = torch.rand(1, 1, 8, 8, dtype=torch.float64)
        identity_zero = gdl_loss(y, y, alpha=2.0).item() == 0.0
        offset_zero = gdl_loss(y + 0.125, y).item() < 1e-12
        target = torch.tensor([[0.0, 1.0], [0.0, 1.0]])
        fixture_two = gdl_loss(torch.zeros(2, 2), target, alpha=1.0).item() == 2.0
        worst = 0.0
        torch.manual_seed(0)
        for _ in range(20):
            p, t = torch.rand(2, 1, 16, 16, dtype=torch.float64), torch.rand(2, 1, 16, 16, dtype=torch.float64)
            worst = max(worst, abs(combined_loss(p, t, 1.0, 0.0).item() - mse_loss(p, t).item()))
        report(
            "loss components",
            identity_zero and offset_zero and fixture_two and worst < 1e-12,
            f"identity=0 {identity_zero}, offset=0 {offset_zero}, 2x2 case=2 {fixture_two}, "
            f"combined-vs-MSE max dev {worst:.2e}",
        )

    @pytest.mark.slow
    @pytest.mark.skipif(
        not os.environ.get("RUN_DESK_SCALE"),
        reason="overnight job; set RUN_DESK_SCALE=1 to run the 600-plan training gate",
    )
    def test_desk_scale_training(self, tmp_path):
        """600 plans, 256x256, <=100 epochs of Adadelta -> test MSE <= 0.02."""
        run_planconnect(
            "generate", "--count", 600, "--size", "100x100", "--seed", 2024,
            "--analyses", "spatial", "--out", tmp_path / "plans",
        )
        run_planconnect(
            "dataset", "build", "--plans", tmp_path / "plans", "--analyses", "spatial",
            "--out", tmp_path / "ds", "--workers", str(os.cpu_count() or 1),
        )
        model, history = train_unet(
            tmp_path / "ds",
            TrainConfig(optimizer="adadelta", learning_rate=1.0, batch_size=8, epochs=100),
            UNetConfig(input_size=256),
            tmp_path / "run",
        )
        result = evaluate_model(model, tmp_path / "ds", split="TEST")
        report(
            "desk-scale training",
            result.mean_mse <= 0.02,
            f"test MSE {result.mean_mse:.4f} after {len(history)} epochs",
        )

    def test_inference_speed_vs_simulation(self, tmp_path, torch_single_thread):
        """Surrogate inference >= 100x faster than the visual analysis it replaces."""
        run_planconnect(
            "generate", "--count", 1, "--size", "100x100", "--seed", 7,
            "--analyses", "visual", "--out", tmp_path / "plans",
        )
        plan = tmp_path / "plans" / "plan_00000.pgm"
        sim = json.loads(
            subprocess.run(
                ["planconnect", "bench", "--input", str(plan), "--analysis", "visual", "--repeat", "3"],
                check=True, capture_output=True, text=True,
            ).stdout
        )["mean"]

        device = "cuda" if torch.cuda.is_available() else "cpu"
        model = build_unet().to(device).eval()
        x = torch.zeros(1, 1, 256, 256, device=device)
        with torch.no_grad():
            model(x)
            start = time.perf_counter()
            for _ in range(5):
                model(x)
            if device == "cuda":
                torch.cuda.synchronize()
        unet = (time.perf_counter() - start) / 5
        ratio = sim / unet
        if device == "cpu":
            print(
                f"[ACCEPTANCE] inference speed-up: SKIP (no CUDA device; CPU-vs-CPU ratio "
                f"{ratio:.1f}x — the >=100x claim compares accelerated inference to the simulation)"
            )
            pytest.skip("inference speed-up gate needs a CUDA device")
        report("inference speed-up", ratio >= 100.0, f"{ratio:.1f}x on {device}")
