"""Analysis field and grayscale image containers, plus the float sidecar format.

The ``.f32`` sidecar is little-endian: two uint32 (width, height) followed by
row-major float32 values, with NaN standing in for cells where the field is
undefined (blocked cells).
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import IoFailure, MalformedImage


class FieldKind(enum.Enum):
    SPATIAL_CONNECTIVITY = "spatial"
    VISUAL_CONNECTIVITY = "visual"
    VISUAL_MEAN_DEPTH = "visual_depth"
    SDF = "sdf"


@dataclass(frozen=True)
class AnalysisField:
    """Per-cell real-valued analysis result over a grid.

    ``values`` is (height, width) float64; ``mask`` is True where the value is
    defined (free cells only). Values on masked-out cells are 0.
    """

    values: np.ndarray
    mask: np.ndarray
    kind: FieldKind

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape != self.mask.shape:
            raise ValueError("values and mask must be 2-D with equal shapes")
        if self.values[~self.mask].any():
            raise ValueError("undefined cells must hold value 0")

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    def defined_values(self) -> np.ndarray:
        return self.values[self.mask]

    def save_f32(self, path) -> None:
        path = Path(path)
        data = self.values.astype(np.float32)
        data = np.where(self.mask, data, np.float32("nan"))
        header = struct.pack("<II", self.width, self.height)
        try:
            tmp = path.with_name(path.name + ".tmp")
            tmp.write_bytes(header + data.astype("<f4").tobytes())
            tmp.replace(path)
        except OSError as exc:
            raise IoFailure(f"cannot write field {path}: {exc}") from exc


def load_f32(path, kind: FieldKind) -> AnalysisField:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise IoFailure(f"cannot read field {path}: {exc}") from exc
    if len(raw) < 8:
        raise MalformedImage(f"{path}: truncated field header")
    width, height = struct.unpack_from("<II", raw)
    expected = 8 + 4 * width * height
    if len(raw) != expected:
        raise MalformedImage(f"{path}: expected {expected} bytes, got {len(raw)}")
    values = np.frombuffer(raw, dtype="<f4", offset=8).reshape(height, width)
    mask = ~np.isnan(values)
    return AnalysisField(np.where(mask, values, 0.0).astype(np.float64), mask, kind)


@dataclass(frozen=True)
class GrayImage:
    """8-bit grayscale raster, row-major, top-left origin."""

    pixels: np.ndarray

    def __post_init__(self):
        if self.pixels.ndim != 2 or self.pixels.dtype != np.uint8:
            raise ValueError("pixels must be a 2-D uint8 array")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]
