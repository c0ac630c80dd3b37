"""Evaluation: per-image MSE report, triptychs, loss histogram, metrics.json."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import torch
from PIL import Image

from .data import PairDataset, load_manifest, split_records
from .errors import EmptySplit


@dataclass(frozen=True)
class EvalReport:
    per_image_mse: list  # (record id, mse) pairs, manifest order
    mean_mse: float
    min_mse: float
    min_id: str
    max_mse: float
    max_id: str
    inference_seconds_per_image: float
    histogram_counts: list = field(default_factory=list)
    histogram_edges: list = field(default_factory=list)

    def __post_init__(self):
        values = [v for _, v in self.per_image_mse]
        if not values:
            raise EmptySplit("report needs at least one record")
        if not (
            abs(self.mean_mse - sum(values) / len(values)) < 1e-12
            and self.min_mse == min(values)
            and self.max_mse == max(values)
        ):
            raise ValueError("mean/min/max inconsistent with per-image list")

    def to_json(self) -> dict:
        return {
            "per_image_mse": [[i, v] for i, v in self.per_image_mse],
            "mean_mse": self.mean_mse,
            "min_mse": self.min_mse,
            "min_id": self.min_id,
            "max_mse": self.max_mse,
            "max_id": self.max_id,
            "inference_seconds_per_image": self.inference_seconds_per_image,
            "histogram_counts": self.histogram_counts,
            "histogram_edges": self.histogram_edges,
        }


def _triptych(target: np.ndarray, prediction: np.ndarray, path: Path) -> None:
    """target | prediction | absolute delta, darker delta = closer."""
    delta = np.abs(target - prediction)
    panel = np.clip(np.hstack([target, prediction, delta]), 0.0, 1.0)
    Image.fromarray((panel * 255).astype(np.uint8), mode="L").save(path)


def evaluate_model(model, data_dir, split: str = "TEST", out_dir=None) -> EvalReport:
    """Score every record of a split; optionally write report artifacts."""
    records = split_records(load_manifest(data_dir), split)
    dataset = PairDataset(records, model.config.input_size)
    model.eval()

    scored = []
    images = {}
    seconds = 0.0
    with torch.no_grad():
        for record, (x, y) in zip(records, dataset):
            start = time.perf_counter()
            prediction = model(x[None])[0, 0]
            seconds += time.perf_counter() - start
            mse = float(torch.mean((prediction - y[0]) ** 2))
            scored.append((record.id, mse))
            images[record.id] = (y[0].numpy(), prediction.numpy())

    values = [v for _, v in scored]
    min_id, min_mse = min(scored, key=lambda pair: pair[1])
    max_id, max_mse = max(scored, key=lambda pair: pair[1])
    counts, edges = np.histogram(values, bins=min(20, max(5, len(values))))
    report = EvalReport(
        per_image_mse=scored,
        mean_mse=sum(values) / len(values),
        min_mse=min_mse,
        min_id=min_id,
        max_mse=max_mse,
        max_id=max_id,
        inference_seconds_per_image=seconds / len(scored),
        histogram_counts=counts.tolist(),
        histogram_edges=edges.tolist(),
    )

    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "metrics.json").write_text(json.dumps(report.to_json(), indent=2))
        _triptych(*images[min_id], out_dir / "best_triptych.png")
        _triptych(*images[max_id], out_dir / "worst_triptych.png")
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.hist(values, bins=report.histogram_edges)
        ax.set_xlabel("per-image MSE")
        ax.set_ylabel("count")
        fig.tight_layout()
        fig.savefig(out_dir / "loss_histogram.png")
        plt.close(fig)
    return report
