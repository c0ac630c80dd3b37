"""Dataset access: JSON Lines manifests plus paired grayscale PGM images.

The trainer consumes the on-disk dataset contract only: a ``dataset.jsonl``
with ``id/input_path/target_path/analysis/split`` records, and 8-bit binary
PGM images. Images are normalized by 255 and upscaled to the model's input
size with nearest-neighbour interpolation (plans are hard-edged occupancy
rasters; smoothing would invent half-open walls).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
import torch.nn.functional as F

from .errors import DataMissing, EmptySplit

SPLITS = ("TRAIN", "VAL", "TEST")


@dataclass(frozen=True)
class PairRecord:
    id: str
    input_path: str
    target_path: str
    analysis: str
    split: str


def read_pgm(path) -> np.ndarray:
    """Minimal binary (P5) PGM reader; returns a 2-D uint8 array."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise DataMissing(f"cannot read image {path}: {exc}") from exc
    if not raw.startswith(b"P5"):
        raise DataMissing(f"{path}: not a binary PGM")
    fields: list[int] = []
    pos = 2
    while len(fields) < 3:
        while pos < len(raw) and raw[pos : pos + 1].isspace():
            pos += 1
        if raw[pos : pos + 1] == b"#":
            pos = raw.index(b"\n", pos) + 1
            continue
        end = pos
        while end < len(raw) and not raw[end : end + 1].isspace():
            end += 1
        fields.append(int(raw[pos:end]))
        pos = end
    width, height, maxval = fields
    pos += 1  # single whitespace after maxval
    if maxval > 255 or len(raw) - pos < width * height:
        raise DataMissing(f"{path}: truncated or unsupported PGM")
    pixels = np.frombuffer(raw, dtype=np.uint8, count=width * height, offset=pos)
    return pixels.reshape(height, width)


def load_manifest(data_dir) -> list[PairRecord]:
    manifest = Path(data_dir) / "dataset.jsonl"
    if not manifest.exists():
        raise DataMissing(f"no dataset.jsonl in {data_dir}")
    records = []
    for line in manifest.read_text().splitlines():
        if not line.strip():
            continue
        raw = json.loads(line)
        record = PairRecord(
            id=raw["id"],
            input_path=raw["input_path"],
            target_path=raw["target_path"],
            analysis=raw["analysis"],
            split=raw["split"],
        )
        if record.split not in SPLITS:
            raise DataMissing(f"unknown split {record.split!r} for record {record.id}")
        records.append(record)
    if not records:
        raise DataMissing(f"{manifest} has no records")
    return records


def split_records(records: list[PairRecord], split: str) -> list[PairRecord]:
    chosen = [r for r in records if r.split == split]
    if not chosen:
        raise EmptySplit(f"split {split} is empty")
    return chosen


def _to_tensor(pixels: np.ndarray, size: int) -> torch.Tensor:
    tensor = torch.from_numpy(pixels.astype(np.float32) / 255.0)[None, None]
    if tensor.shape[-2:] != (size, size):
        tensor = F.interpolate(tensor, size=(size, size), mode="nearest")
    return tensor[0]


class PairDataset(torch.utils.data.Dataset):
    """Input/target image pairs, optionally flip-augmented in lockstep.

    Augmentation draws from the provided generator at access time, so a
    seeded generator plus a seeded shuffle makes epochs reproducible.
    """

    def __init__(
        self,
        records: list[PairRecord],
        input_size: int = 256,
        augment: bool = False,
        generator: torch.Generator | None = None,
    ):
        self.records = records
        self.input_size = input_size
        self.augment = augment
        self.generator = generator

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, index: int) -> tuple[torch.Tensor, torch.Tensor]:
        record = self.records[index]
        x = _to_tensor(read_pgm(record.input_path), self.input_size)
        y = _to_tensor(read_pgm(record.target_path), self.input_size)
        if self.augment:
            draw = torch.rand(2, generator=self.generator)
            if draw[0] < 0.5:
                x, y = torch.flip(x, (-1,)), torch.flip(y, (-1,))
            if draw[1] < 0.5:
                x, y = torch.flip(x, (-2,)), torch.flip(y, (-2,))
        return x, y
