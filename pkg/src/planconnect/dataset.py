"""Turn analysis fields into paired grayscale training records.

Targets are per-image min-max remapped to 0..255 over defined cells only,
with blocked cells forced to 0 (black obstacles). Spatial distance fields are
inverted so that bright always means better connected.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DuplicateIds, EmptyField, IoFailure
from .farm.local import run_local
from .farm.manifest import Analysis, Task, TaskStatus, load_manifest, save_manifest
from .fields import AnalysisField, FieldKind, GrayImage, load_f32
from .grid import OccupancyGrid, load_occupancy, read_pgm, write_pgm


class RemapDirection(enum.Enum):
    DIRECT = "direct"
    INVERTED = "inverted"


class Split(str, enum.Enum):
    TRAIN = "TRAIN"
    VAL = "VAL"
    TEST = "TEST"


DEFAULT_DIRECTIONS = {
    Analysis.SPATIAL: RemapDirection.INVERTED,
    Analysis.VISUAL: RemapDirection.DIRECT,
    Analysis.VISUAL_DEPTH: RemapDirection.INVERTED,
    Analysis.SDF: RemapDirection.DIRECT,
}

_FIELD_KINDS = {
    Analysis.SPATIAL: FieldKind.SPATIAL_CONNECTIVITY,
    Analysis.VISUAL: FieldKind.VISUAL_CONNECTIVITY,
    Analysis.VISUAL_DEPTH: FieldKind.VISUAL_MEAN_DEPTH,
    Analysis.SDF: FieldKind.SDF,
}


@dataclass(frozen=True)
class SplitSpec:
    ratios: tuple[float, float, float] = (0.7, 0.2, 0.1)
    seed: int = 0

    def __post_init__(self):
        if any(r < 0 for r in self.ratios) or abs(sum(self.ratios) - 1.0) > 1e-9:
            raise ValueError("ratios must be non-negative and sum to 1")


@dataclass(frozen=True)
class DatasetRecord:
    id: str
    input_image: GrayImage
    target_image: GrayImage
    analysis: Analysis
    split: Split

    def __post_init__(self):
        if self.input_image.pixels.shape != self.target_image.pixels.shape:
            raise ValueError("input and target dimensions must match")


def remap_to_gray(field: AnalysisField, grid: OccupancyGrid,
                  direction: RemapDirection = RemapDirection.DIRECT) -> GrayImage:
    """Linear min-max remap of the defined cells to 0..255.

    Rounding is half-away-from-zero. A constant field maps to all-255; blocked
    cells are always 0.
    """
    if field.values.shape != grid.free.shape:
        raise ValueError("field and grid dimensions must match")
    if not field.mask.any():
        raise EmptyField("field has no defined values")
    defined = field.defined_values()
    lo, hi = defined.min(), defined.max()
    if hi == lo:
        scaled = np.full(field.values.shape, 255.0)
    elif direction is RemapDirection.DIRECT:
        scaled = 255.0 * (field.values - lo) / (hi - lo)
    else:
        scaled = 255.0 * (hi - field.values) / (hi - lo)
    pixels = np.floor(scaled + 0.5).astype(np.uint8)  # half away from zero (values >= 0)
    pixels[~field.mask] = 0
    return GrayImage(pixels)


def split_dataset(ids: list[str], spec: SplitSpec) -> dict[str, Split]:
    """Deterministic 70-20-10 style assignment by seeded shuffle.

    TRAIN gets floor(r_train * N), VAL floor(r_val * N), TEST the remainder.
    """
    if len(set(ids)) != len(ids):
        raise DuplicateIds("record ids must be unique")
    if not ids:
        raise ValueError("ids must be non-empty")
    order = np.random.default_rng(spec.seed).permutation(len(ids))
    n = len(ids)
    n_train = int(spec.ratios[0] * n)
    n_val = int(spec.ratios[1] * n)
    assignment = {}
    for rank, position in enumerate(order):
        if rank < n_train:
            split = Split.TRAIN
        elif rank < n_train + n_val:
            split = Split.VAL
        else:
            split = Split.TEST
        assignment[ids[position]] = split
    return assignment


def flip_pair(record: DatasetRecord, horizontal: bool = False, vertical: bool = False) -> DatasetRecord:
    """Flip input and target identically; the id gains a flip suffix."""
    def _flip(pixels: np.ndarray) -> np.ndarray:
        if horizontal:
            pixels = pixels[:, ::-1]
        if vertical:
            pixels = pixels[::-1, :]
        return np.ascontiguousarray(pixels)

    suffix = ("_fh" if horizontal else "") + ("_fv" if vertical else "")
    return DatasetRecord(
        id=record.id + suffix,
        input_image=GrayImage(_flip(record.input_image.pixels)),
        target_image=GrayImage(_flip(record.target_image.pixels)),
        analysis=record.analysis,
        split=record.split,
    )


def build_dataset(
    plans_dir,
    analyses: list[Analysis],
    spec: SplitSpec,
    out_dir,
    cell_size: float = 1.0,
    run_missing: bool = True,
    workers: int = 1,
) -> list[dict]:
    """Assemble input/target PGM pairs plus a JSON Lines manifest.

    Expects ``plan_*.pgm`` files in ``plans_dir`` with ``.f32`` analysis
    outputs alongside (``plan_00000.spatial.f32`` etc). Missing fields are
    computed through the local farm unless ``run_missing`` is False. The split
    is drawn once over plan ids, so every analysis of a plan lands in the same
    split.
    """
    plans_dir, out_dir = Path(plans_dir), Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    plan_paths = sorted(plans_dir.glob("plan_*.pgm"))
    if not plan_paths:
        raise IoFailure(f"no plan_*.pgm files in {plans_dir}")

    missing = []
    for plan_path in plan_paths:
        for analysis in analyses:
            field_path = plan_path.with_suffix(f".{analysis.value.lower()}.f32")
            if not field_path.exists():
                missing.append((plan_path, analysis, field_path))
    if missing:
        if not run_missing:
            names = ", ".join(p.stem for p, _, _ in missing[:5])
            raise IoFailure(f"missing analysis outputs for: {names}" + (" ..." if len(missing) > 5 else ""))
        tasks = [
            Task(
                id=f"{plan_path.stem}:{analysis.value}",
                input_path=str(plan_path),
                analysis=analysis,
                cell_size=cell_size,
                output_path=str(field_path),
            )
            for plan_path, analysis, field_path in missing
        ]
        manifest_path = out_dir / "farm_manifest.jsonl"
        save_manifest(tasks, manifest_path)
        run_local(manifest_path, workers)
        failed = [t for t in load_manifest(manifest_path) if t.status is not TaskStatus.DONE]
        if failed:
            raise EmptyField(f"analysis failed for records: {', '.join(t.id for t in failed)}")

    plan_ids = [p.stem for p in plan_paths]
    assignment = split_dataset(plan_ids, spec)

    records = []
    for plan_path in plan_paths:
        plan_id = plan_path.stem
        grid = load_occupancy(plan_path, cell_size)
        input_path = out_dir / f"{plan_id}.input.pgm"
        write_pgm(read_pgm(plan_path), input_path)
        for analysis in analyses:
            field_path = plan_path.with_suffix(f".{analysis.value.lower()}.f32")
            analysis_field = load_f32(field_path, _FIELD_KINDS[analysis])
            try:
                target = remap_to_gray(analysis_field, grid, DEFAULT_DIRECTIONS[analysis])
            except EmptyField as exc:
                raise EmptyField(f"{plan_id}:{analysis.value}: {exc}") from exc
            target_path = out_dir / f"{plan_id}.{analysis.value.lower()}.pgm"
            write_pgm(target, target_path)
            records.append(
                {
                    "id": f"{plan_id}:{analysis.value}",
                    "input_path": str(input_path),
                    "target_path": str(target_path),
                    "analysis": analysis.value,
                    "split": assignment[plan_id].value,
                }
            )

    manifest = out_dir / "dataset.jsonl"
    body = "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
    manifest.write_text(body)
    return records
