"""Inference timing: warm repeats, batch 1, mean and spread."""

from __future__ import annotations

import statistics
import time

import torch


def bench_inference(model, image: torch.Tensor, repeats: int = 20, warmup: int = 3) -> dict:
    """Mean wall seconds per single-image forward pass over >= 20 warm repeats.

    ``image`` is (channels, height, width). Returns mean, per-repeat timings,
    and the coefficient of variation.
    """
    repeats = max(20, repeats)
    batch = image[None]
    model.eval()
    with torch.no_grad():
        for _ in range(warmup):
            model(batch)
        timings = []
        for _ in range(repeats):
            start = time.perf_counter()
            model(batch)
            timings.append(time.perf_counter() - start)
    mean = sum(timings) / len(timings)
    spread = statistics.pstdev(timings)
    return {
        "mean_seconds": mean,
        "timings": timings,
        "coefficient_of_variation": spread / mean if mean else 0.0,
    }
