"""U-Net regressor: contracting/expansive conv ladder with skip connections.

The default configuration is the classic recipe — two 3x3 convolutions per
block (with biases, no normalization layers), 2x2 max pooling down, 2x2
transposed convolutions up, skip concatenation between mirrored blocks, and a
final 1x1 convolution squashed through a sigmoid so outputs live in (0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import torch
from torch import nn

from .errors import ConfigInvalid


@dataclass(frozen=True)
class UNetConfig:
    input_size: int = 256
    input_channels: int = 1
    filter_ladder: tuple[int, ...] = (64, 128, 256, 512, 1024)
    convs_per_block: int = 2
    dropout: float = 0.0  # applied inside decoder blocks; doubles as noise

    def __post_init__(self):
        if self.input_channels < 1:
            raise ConfigInvalid("input_channels must be >= 1")
        if len(self.filter_ladder) < 2:
            raise ConfigInvalid("filter_ladder needs at least two rungs")
        if any(b != 2 * a for a, b in zip(self.filter_ladder, self.filter_ladder[1:])):
            raise ConfigInvalid("filter_ladder must strictly double at each rung")
        if self.convs_per_block < 1:
            raise ConfigInvalid("convs_per_block must be >= 1")
        levels = len(self.filter_ladder) - 1
        if self.input_size < 2**levels or self.input_size % 2**levels:
            raise ConfigInvalid(
                f"input_size {self.input_size} must be a multiple of 2^{levels}"
            )
        if not 0.0 <= self.dropout < 1.0:
            raise ConfigInvalid("dropout must be in [0, 1)")


def _conv_block(in_ch: int, out_ch: int, convs: int, dropout: float) -> nn.Sequential:
    layers: list[nn.Module] = []
    for i in range(convs):
        layers.append(nn.Conv2d(in_ch if i == 0 else out_ch, out_ch, kernel_size=3, padding=1))
        layers.append(nn.ReLU(inplace=True))
    if dropout > 0:
        layers.append(nn.Dropout2d(dropout))
    return nn.Sequential(*layers)


class UNet(nn.Module):
    def __init__(self, config: UNetConfig):
        super().__init__()
        self.config = config
        ladder = config.filter_ladder
        convs = config.convs_per_block

        self.encoders = nn.ModuleList()
        in_ch = config.input_channels
        for width in ladder[:-1]:
            self.encoders.append(_conv_block(in_ch, width, convs, dropout=0.0))
            in_ch = width
        self.pool = nn.MaxPool2d(2)
        self.bottleneck = _conv_block(ladder[-2], ladder[-1], convs, dropout=0.0)

        self.upconvs = nn.ModuleList()
        self.decoders = nn.ModuleList()
        for width in reversed(ladder[:-1]):
            self.upconvs.append(nn.ConvTranspose2d(2 * width, width, kernel_size=2, stride=2))
            self.decoders.append(_conv_block(2 * width, width, convs, config.dropout))
        self.head = nn.Conv2d(ladder[0], 1, kernel_size=1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        skips = []
        for encoder in self.encoders:
            x = encoder(x)
            skips.append(x)
            x = self.pool(x)
        x = self.bottleneck(x)
        for upconv, decoder, skip in zip(self.upconvs, self.decoders, reversed(skips)):
            x = upconv(x)
            x = decoder(torch.cat([skip, x], dim=1))
        return torch.sigmoid(self.head(x))


def build_unet(config: UNetConfig | None = None) -> UNet:
    return UNet(config or UNetConfig())


def count_parameters(model: nn.Module) -> int:
    return sum(p.numel() for p in model.parameters() if p.requires_grad)
