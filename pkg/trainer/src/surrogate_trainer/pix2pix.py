"""Conditional GAN (Pix2Pix style): U-Net generator vs PatchGAN discriminator.

The generator is the same U-Net as the regressor but with dropout kept on
during training — dropout is the noise source, following the reference
conditional-GAN implementation. The discriminator scores (input, candidate)
pairs patch-wise; the generator is trained with the adversarial objective
plus an L1 term against the real target.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict
from pathlib import Path

import torch
from torch import nn
from torch.utils.data import DataLoader

from .data import PairDataset, load_manifest, split_records
from .errors import DivergedLoss
from .train import TrainConfig, save_checkpoint
from .unet import UNet, UNetConfig, build_unet

L1_WEIGHT = 100.0


class PatchDiscriminator(nn.Module):
    """70x70-receptive-field patch classifier over (input, candidate) pairs."""

    def __init__(self, in_channels: int = 2, base: int = 64):
        super().__init__()
        widths = [base, base * 2, base * 4, base * 8]
        layers: list[nn.Module] = []
        prev = in_channels
        for i, width in enumerate(widths):
            stride = 2 if i < 3 else 1
            layers.append(nn.Conv2d(prev, width, kernel_size=4, stride=stride, padding=1))
            if i > 0:
                layers.append(nn.BatchNorm2d(width))
            layers.append(nn.LeakyReLU(0.2, inplace=True))
            prev = width
        layers.append(nn.Conv2d(prev, 1, kernel_size=4, stride=1, padding=1))
        self.net = nn.Sequential(*layers)

    def forward(self, condition: torch.Tensor, candidate: torch.Tensor) -> torch.Tensor:
        return self.net(torch.cat([condition, candidate], dim=1))


def build_generator(unet_config: UNetConfig | None = None) -> UNet:
    config = unet_config or UNetConfig(dropout=0.5)
    return build_unet(config)


def train_pix2pix(
    data_dir,
    train_config: TrainConfig,
    unet_config: UNetConfig | None = None,
    out_dir="runs/pix2pix",
) -> tuple[UNet, list[dict]]:
    """Adversarial training; returns the generator and per-epoch history."""
    unet_config = unet_config or UNetConfig(dropout=0.5)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    history_path = out_dir / "history.jsonl"
    history_path.write_text("")

    records = load_manifest(data_dir)
    train_records = split_records(records, "TRAIN")
    torch.manual_seed(train_config.seed)
    generator_rng = torch.Generator().manual_seed(train_config.seed)
    train_set = PairDataset(
        train_records, unet_config.input_size, augment=train_config.augment, generator=generator_rng
    )
    loader = DataLoader(
        train_set, batch_size=train_config.batch_size, shuffle=True, generator=generator_rng
    )

    generator = build_generator(unet_config)
    discriminator = PatchDiscriminator(in_channels=unet_config.input_channels + 1)
    opt_g = torch.optim.Adam(generator.parameters(), lr=2e-4, betas=(0.5, 0.999))
    opt_d = torch.optim.Adam(discriminator.parameters(), lr=2e-4, betas=(0.5, 0.999))
    bce = nn.BCEWithLogitsLoss()
    l1 = nn.L1Loss()

    history: list[dict] = []
    for epoch in range(1, train_config.epochs + 1):
        g_total = d_total = 0.0
        for x, y in loader:
            fake = generator(x)

            opt_d.zero_grad()
            real_score = discriminator(x, y)
            fake_score = discriminator(x, fake.detach())
            d_loss = 0.5 * (
                bce(real_score, torch.ones_like(real_score))
                + bce(fake_score, torch.zeros_like(fake_score))
            )
            d_loss.backward()
            opt_d.step()

            opt_g.zero_grad()
            fake_score = discriminator(x, fake)
            g_loss = bce(fake_score, torch.ones_like(fake_score)) + L1_WEIGHT * l1(fake, y)
            g_loss.backward()
            opt_g.step()

            if not (math.isfinite(g_loss.item()) and math.isfinite(d_loss.item())):
                raise DivergedLoss(f"non-finite adversarial loss at epoch {epoch}")
            g_total += g_loss.item() * len(x)
            d_total += d_loss.item() * len(x)

        entry = {
            "epoch": epoch,
            "train_loss": g_total / len(train_set),
            "val_loss": d_total / len(train_set),  # discriminator loss channel
        }
        history.append(entry)
        with history_path.open("a") as handle:
            handle.write(json.dumps(entry) + "\n")

    save_checkpoint(generator, out_dir / "checkpoint.pt", {"train_config": asdict(train_config)})
    return generator, history
