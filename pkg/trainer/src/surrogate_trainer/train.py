"""U-Net training loop: seeded, flip-augmented, with per-epoch history.

Artifacts in the output directory: ``checkpoint.pt`` (weights + configs),
``history.jsonl`` (one ``{"epoch", "train_loss", "val_loss"}`` line per
epoch), and a ``val_panel/`` directory with the same fixed validation images
rendered after every epoch so training progress is visible at a glance.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import torch
from PIL import Image
from torch.utils.data import DataLoader

from .data import PairDataset, load_manifest, split_records
from .errors import ConfigInvalid, DivergedLoss
from .losses import combined_loss, mse_loss
from .unet import UNet, UNetConfig, build_unet

OPTIMIZERS = ("adadelta", "sgd", "rmsprop", "adam")
LOSSES = ("mse", "mse+gdl")


@dataclass(frozen=True)
class TrainConfig:
    optimizer: str = "adadelta"
    learning_rate: float = 1.0
    batch_size: int = 8
    epochs: int = 100
    loss: str = "mse"
    lambda_mse: float = 1.0
    lambda_gdl: float = 1.0
    alpha: float = 1.0
    augment: bool = True
    seed: int = 0
    val_panel_count: int = 4

    def __post_init__(self):
        if self.optimizer not in OPTIMIZERS:
            raise ConfigInvalid(f"optimizer must be one of {OPTIMIZERS}")
        if self.loss not in LOSSES:
            raise ConfigInvalid(f"loss must be one of {LOSSES}")
        if self.batch_size < 1 or self.epochs < 1:
            raise ConfigInvalid("batch_size and epochs must be >= 1")
        if self.lambda_mse < 0 or self.lambda_gdl < 0:
            raise ConfigInvalid("loss weights must be non-negative")
        if self.loss == "mse+gdl" and self.lambda_mse == 0 and self.lambda_gdl == 0:
            raise ConfigInvalid("loss weights cannot both be zero")
        if self.alpha < 1:
            raise ConfigInvalid("alpha must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigInvalid("seed must be an unsigned 64-bit integer")


def make_optimizer(model: torch.nn.Module, config: TrainConfig) -> torch.optim.Optimizer:
    cls = {
        "adadelta": torch.optim.Adadelta,
        "sgd": torch.optim.SGD,
        "rmsprop": torch.optim.RMSprop,
        "adam": torch.optim.Adam,
    }[config.optimizer]
    return cls(model.parameters(), lr=config.learning_rate)


def _loss_fn(config: TrainConfig):
    if config.loss == "mse":
        return mse_loss
    return lambda p, t: combined_loss(p, t, config.lambda_mse, config.lambda_gdl, config.alpha)


def save_checkpoint(model: UNet, path, extra: dict | None = None) -> None:
    payload = {
        "arch": "unet",
        "unet_config": asdict(model.config),
        "state_dict": model.state_dict(),
    }
    payload.update(extra or {})
    torch.save(payload, path)


def load_checkpoint(path) -> UNet:
    payload = torch.load(path, map_location="cpu", weights_only=False)
    config = UNetConfig(**payload["unet_config"])
    model = build_unet(config)
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model


def render_panel(model: UNet, panel: list[tuple[torch.Tensor, torch.Tensor]], path) -> None:
    """Stack target | prediction rows for a fixed set of validation images."""
    model.eval()
    rows = []
    with torch.no_grad():
        for x, y in panel:
            pred = model(x[None])[0, 0]
            rows.append(np.hstack([y[0].numpy(), pred.numpy()]))
    pixels = (np.clip(np.vstack(rows), 0.0, 1.0) * 255).astype(np.uint8)
    Image.fromarray(pixels, mode="L").save(path)


def train_unet(
    data_dir,
    train_config: TrainConfig,
    unet_config: UNetConfig | None = None,
    out_dir="runs/unet",
) -> tuple[UNet, list[dict]]:
    """Train on the TRAIN split, validate on VAL, write artifacts to out_dir."""
    unet_config = unet_config or UNetConfig()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "val_panel").mkdir(exist_ok=True)
    history_path = out_dir / "history.jsonl"
    history_path.write_text("")

    records = load_manifest(data_dir)
    train_records = split_records(records, "TRAIN")
    val_records = split_records(records, "VAL")

    torch.manual_seed(train_config.seed)
    generator = torch.Generator().manual_seed(train_config.seed)
    train_set = PairDataset(
        train_records, unet_config.input_size, augment=train_config.augment, generator=generator
    )
    val_set = PairDataset(val_records, unet_config.input_size)
    loader = DataLoader(
        train_set, batch_size=train_config.batch_size, shuffle=True, generator=generator
    )
    val_loader = DataLoader(val_set, batch_size=train_config.batch_size)
    panel = [val_set[i] for i in range(min(train_config.val_panel_count, len(val_set)))]

    model = build_unet(unet_config)
    optimizer = make_optimizer(model, train_config)
    loss_fn = _loss_fn(train_config)

    history: list[dict] = []
    for epoch in range(1, train_config.epochs + 1):
        model.train()
        train_loss = 0.0
        for x, y in loader:
            optimizer.zero_grad()
            loss = loss_fn(model(x), y)
            if not math.isfinite(loss.item()):
                raise DivergedLoss(f"non-finite training loss at epoch {epoch}")
            loss.backward()
            optimizer.step()
            train_loss += loss.item() * len(x)
        train_loss /= len(train_set)

        model.eval()
        val_loss = 0.0
        with torch.no_grad():
            for x, y in val_loader:
                val_loss += loss_fn(model(x), y).item() * len(x)
        val_loss /= len(val_set)
        if not math.isfinite(val_loss):
            raise DivergedLoss(f"non-finite validation loss at epoch {epoch}")

        entry = {"epoch": epoch, "train_loss": train_loss, "val_loss": val_loss}
        history.append(entry)
        with history_path.open("a") as handle:
            handle.write(json.dumps(entry) + "\n")
        render_panel(model, panel, out_dir / "val_panel" / f"epoch_{epoch:03d}.png")

    save_checkpoint(model, out_dir / "checkpoint.pt", {"train_config": asdict(train_config)})
    return model, history
