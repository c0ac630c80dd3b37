"""Raster floor-plan model: binary PGM I/O, component pruning, distance field.

A plan is a binary occupancy grid: FREE cells are walkable, BLOCKED cells are
walls/furniture. The world outside the grid is treated as blocked (a virtual
one-cell ring), which grounds both the distance field and visibility at the
boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import ndimage

from .errors import IoFailure, MalformedImage, NoFreeCells
from .fields import AnalysisField, FieldKind, GrayImage

FREE_THRESHOLD = 128  # pixel >= 128 loads as FREE; documented so fixtures are bit-exact


@dataclass(frozen=True)
class OccupancyGrid:
    """Binary floor-plan raster. ``free`` is (height, width) bool, True = FREE."""

    free: np.ndarray
    cell_size: float = 1.0

    def __post_init__(self):
        if self.free.ndim != 2 or self.free.dtype != np.bool_:
            raise ValueError("free must be a 2-D bool array")
        if self.free.shape[0] < 1 or self.free.shape[1] < 1:
            raise ValueError("grid must be at least 1x1")
        if not self.cell_size > 0:
            raise ValueError("cell_size must be positive")

    @property
    def height(self) -> int:
        return self.free.shape[0]

    @property
    def width(self) -> int:
        return self.free.shape[1]

    def free_count(self) -> int:
        return int(self.free.sum())

    def index(self, row: int, col: int) -> int:
        return row * self.width + col

    def __eq__(self, other) -> bool:
        if not isinstance(other, OccupancyGrid):
            return NotImplemented
        return self.cell_size == other.cell_size and np.array_equal(self.free, other.free)


def _read_pgm_tokens(raw: bytes, path) -> tuple[list[int], int]:
    """Parse the P5 header, returning (width, height, maxval) and data offset."""
    if raw[:2] != b"P5":
        raise MalformedImage(f"{path}: not a binary PGM (missing P5 magic)")
    fields = []
    pos = 2
    while len(fields) < 3:
        if pos >= len(raw):
            raise MalformedImage(f"{path}: truncated PGM header")
        c = raw[pos : pos + 1]
        if c == b"#":
            pos = raw.find(b"\n", pos)
            if pos < 0:
                raise MalformedImage(f"{path}: unterminated comment")
            continue
        if c.isspace():
            pos += 1
            continue
        end = pos
        while end < len(raw) and not raw[end : end + 1].isspace():
            end += 1
        token = raw[pos:end]
        if not token.isdigit():
            raise MalformedImage(f"{path}: bad header token {token!r}")
        fields.append(int(token))
        pos = end
    return fields, pos + 1  # single whitespace after maxval


def read_pgm(path) -> GrayImage:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    (width, height, maxval), offset = _read_pgm_tokens(raw, path)
    if width < 1 or height < 1:
        raise MalformedImage(f"{path}: bad dimensions {width}x{height}")
    if not 0 < maxval <= 255:
        raise MalformedImage(f"{path}: unsupported maxval {maxval}")
    data = raw[offset : offset + width * height]
    if len(data) != width * height:
        raise MalformedImage(f"{path}: expected {width * height} pixels, got {len(data)}")
    pixels = np.frombuffer(data, dtype=np.uint8).reshape(height, width)
    return GrayImage(pixels.copy())


def write_pgm(image: GrayImage, path) -> None:
    path = Path(path)
    header = f"P5\n{image.width} {image.height}\n255\n".encode("ascii")
    try:
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_bytes(header + image.pixels.tobytes())
        tmp.replace(path)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def load_occupancy(path, cell_size: float = 1.0) -> OccupancyGrid:
    """Load a plan from a binary PGM; pixel >= 128 is FREE, darker is BLOCKED."""
    image = read_pgm(path)
    return OccupancyGrid(image.pixels >= FREE_THRESHOLD, cell_size)


def save_occupancy(grid: OccupancyGrid, path) -> None:
    """Write a plan as binary PGM (FREE -> 255, BLOCKED -> 0)."""
    pixels = np.where(grid.free, 255, 0).astype(np.uint8)
    write_pgm(GrayImage(pixels), path)


# Under the no-corner-cut rule a diagonal step needs both shared orthogonal
# cells free, so any diagonal move can be replaced by two orthogonal ones:
# reachability is exactly 4-connected reachability.
_COMPONENT_STRUCTURE = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


def largest_component(grid: OccupancyGrid) -> OccupancyGrid:
    """Keep only the largest connected free region, blocking the rest.

    Ties go to the component containing the smallest row-major cell index.
    """
    if not grid.free.any():
        raise NoFreeCells("grid has no FREE cells")
    labels, count = ndimage.label(grid.free, structure=_COMPONENT_STRUCTURE)
    if count == 1:
        return grid
    sizes = np.bincount(labels.ravel())[1:]
    best = np.flatnonzero(sizes == sizes.max())[0] + 1  # first label wins ties:
    # labels are assigned in row-major scan order, so the first maximal label
    # is the one containing the smallest row-major index.
    return OccupancyGrid(labels == best, grid.cell_size)


def signed_distance_field(grid: OccupancyGrid) -> AnalysisField:
    """Exact Euclidean distance from each free cell centre to the nearest
    blocked cell centre, counting the virtual blocked ring outside the grid.

    Blocked cells get value 0 and are masked out. Distances are scaled by
    ``cell_size``.
    """
    padded = np.pad(grid.free, 1, constant_values=False)
    dist = ndimage.distance_transform_edt(padded)[1:-1, 1:-1]
    values = np.where(grid.free, dist * grid.cell_size, 0.0)
    return AnalysisField(values, grid.free.copy(), FieldKind.SDF)
