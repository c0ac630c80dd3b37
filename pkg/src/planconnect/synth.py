"""Seeded procedural floor plans: corridor layouts and open plans.

Two style grammars stand in for a CAD parametric model:

* CORRIDORS — a full-span corridor splits the plan into two strips of rooms;
  each room is walled off and opened to the corridor by a carved door, with a
  light sprinkle of furniture.
* OPEN_PLAN — a perimeter wall plus scattered rectangular furniture blocks
  and a few partial partitions at a requested density.

Generation is a pure function of the parameter set: the same params always
produce the same grid, byte for byte. Infeasible draws (disconnected or too
dense/sparse after pruning) are retried from a derived seed stream up to a
bounded budget.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InfeasibleParams
from .farm.manifest import Analysis, Task, TaskStatus
from .grid import OccupancyGrid, largest_component, save_occupancy

RETRY_BUDGET = 32
MIN_FREE_RATIO = 0.40
MAX_FREE_RATIO = 0.90
DENSITY_TOLERANCE = 0.05


class PlanStyle(enum.Enum):
    CORRIDORS = "corridors"
    OPEN_PLAN = "open"


@dataclass(frozen=True)
class PlanSynthParams:
    width: int = 100
    height: int = 100
    style: PlanStyle = PlanStyle.CORRIDORS
    seed: int = 0
    room_count_range: tuple[int, int] = (4, 8)
    corridor_width_range: tuple[int, int] = (3, 6)
    furniture_density: float = 0.15
    door_width: int = 2
    wall_thickness: int = 1
    cell_size: float = 1.0

    def __post_init__(self):
        if self.width < 16 or self.height < 16:
            raise ValueError("plans must be at least 16x16 cells")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        for lo, hi in (self.room_count_range, self.corridor_width_range):
            if lo > hi or lo < 1:
                raise ValueError("ranges must be non-empty and positive")
        if not 0.0 <= self.furniture_density <= 0.4:
            raise ValueError("furniture_density must be in [0, 0.4]")
        if self.door_width < 1 or self.wall_thickness < 1:
            raise ValueError("door_width and wall_thickness must be >= 1")


def _draw_int(rng: np.random.Generator, lo: int, hi: int) -> int:
    return int(rng.integers(lo, hi + 1))


def _sprinkle_furniture(free: np.ndarray, region, density: float, rng: np.random.Generator) -> None:
    """Scatter small blocks into ``region`` (r0, r1, c0, c1), keeping one free
    cell of clearance from the region border so doors stay reachable."""
    r0, r1, c0, c1 = region
    r0, r1, c0, c1 = r0 + 1, r1 - 1, c0 + 1, c1 - 1
    if r1 - r0 < 2 or c1 - c0 < 2 or density <= 0:
        return
    area = (r1 - r0) * (c1 - c0)
    target = int(density * area)
    placed = 0
    for _ in range(4 * area):
        if placed >= target:
            break
        bh = _draw_int(rng, 1, 2)
        bw = _draw_int(rng, 1, 3)
        if r1 - bh < r0 or c1 - bw < c0:
            continue
        rr = _draw_int(rng, r0, r1 - bh)
        cc = _draw_int(rng, c0, c1 - bw)
        patch = free[rr : rr + bh, cc : cc + bw]
        placed += int(patch.sum())
        patch[:] = False


def _generate_corridors(params: PlanSynthParams, rng: np.random.Generator) -> np.ndarray:
    h, w, t = params.height, params.width, params.wall_thickness
    free = np.ones((h, w), dtype=bool)
    free[:t, :] = free[-t:, :] = False
    free[:, :t] = free[:, -t:] = False

    horizontal = bool(rng.integers(0, 2))
    if not horizontal:
        # generate transposed, then flip back at the end
        h, w = w, h
        free = free.T

    cw = _draw_int(rng, *params.corridor_width_range)
    y0 = _draw_int(rng, h // 3, 2 * h // 3 - cw)
    free[y0 - t : y0, t : w - t] = False  # corridor walls
    free[y0 + cw : y0 + cw + t, t : w - t] = False

    strips = [(t, y0 - t), (y0 + cw + t, h - t)]  # row ranges above/below corridor
    n_rooms = _draw_int(rng, *params.room_count_range)
    n_top = max(1, min(n_rooms - 1, int(round(n_rooms * (strips[0][1] - strips[0][0]) / max(1, (strips[0][1] - strips[0][0]) + (strips[1][1] - strips[1][0]))))))
    counts = (n_top, n_rooms - n_top)

    for (r0, r1), count in zip(strips, counts):
        if r1 - r0 < 3:
            continue
        # split the strip into `count` rooms with jittered vertical walls
        edges = [t]
        span = (w - 2 * t - (count - 1) * t) / count
        pos = float(t)
        for k in range(count - 1):
            pos += span
            jitter = rng.uniform(-span / 4, span / 4)
            wall_c = int(round(pos + jitter))
            wall_c = max(t + 3, min(w - t - 3 - t, wall_c))
            free[r0:r1, wall_c : wall_c + t] = False
            edges.append(wall_c + t)
            pos = wall_c + t
        edges.append(w - t)
        # carve a door from each room into the corridor
        door_row = range(r1, r1 + t) if r0 < y0 else range(r0 - t, r0)
        for c_lo, c_hi in zip(edges[:-1], edges[1:]):
            if c_hi - c_lo < params.door_width + 2:
                continue
            door_c = _draw_int(rng, c_lo + 1, c_hi - 1 - params.door_width)
            free[min(door_row) : max(door_row) + 1, door_c : door_c + params.door_width] = True
            _sprinkle_furniture(free, (r0, r1, c_lo, c_hi), rng.uniform(0.04, 0.10), rng)

    return free if horizontal else free.T


def _generate_open_plan(params: PlanSynthParams, rng: np.random.Generator) -> np.ndarray:
    h, w, t = params.height, params.width, params.wall_thickness
    free = np.ones((h, w), dtype=bool)
    free[:t, :] = free[-t:, :] = False
    free[:, :t] = free[:, -t:] = False
    if params.furniture_density <= 0:
        return free

    interior = (h - 2 * t) * (w - 2 * t)
    target = int(params.furniture_density * interior)

    # a few partial partitions first, then furniture blocks up to the target
    for _ in range(_draw_int(rng, 1, 3)):
        if (~free[t:-t, t:-t]).sum() >= target:
            break
        length = _draw_int(rng, 10, max(11, min(h, w) // 3))
        if rng.integers(0, 2):
            r = _draw_int(rng, t + 2, h - t - 3)
            c = _draw_int(rng, t, w - t - length)
            free[r : r + t, c : c + length] = False
        else:
            r = _draw_int(rng, t, h - t - length)
            c = _draw_int(rng, t + 2, w - t - 3)
            free[r : r + length, c : c + t] = False

    for _ in range(8 * interior):
        blocked = int((~free[t:-t, t:-t]).sum())
        if blocked >= target:
            break
        bh = _draw_int(rng, 1, 3)
        bw = _draw_int(rng, 1, 4)
        r = _draw_int(rng, t, h - t - bh)
        c = _draw_int(rng, t, w - t - bw)
        free[r : r + bh, c : c + bw] = False
    return free


def _feasible(params: PlanSynthParams, free: np.ndarray) -> bool:
    ratio = free.sum() / free.size
    if ratio < MIN_FREE_RATIO:
        return False
    if params.style is PlanStyle.CORRIDORS and ratio > MAX_FREE_RATIO:
        return False
    if params.style is PlanStyle.OPEN_PLAN:
        t = params.wall_thickness
        interior = free[t:-t, t:-t]
        blocked_fraction = 1 - interior.sum() / interior.size
        if abs(blocked_fraction - params.furniture_density) > DENSITY_TOLERANCE:
            return False
    return True


def generate_plan(params: PlanSynthParams) -> OccupancyGrid:
    """Generate one plan; deterministic in params, pruned to one component."""
    for attempt in range(RETRY_BUDGET):
        rng = np.random.default_rng(np.random.SeedSequence([params.seed, attempt]))
        try:
            if params.style is PlanStyle.CORRIDORS:
                free = _generate_corridors(params, rng)
            else:
                free = _generate_open_plan(params, rng)
        except ValueError:
            # walls/doors do not fit the requested footprint; burn the attempt
            continue
        if not free.any():
            continue
        grid = largest_component(OccupancyGrid(free, params.cell_size))
        if _feasible(params, grid.free):
            return grid
    raise InfeasibleParams(
        f"no feasible {params.style.value} plan for seed {params.seed} "
        f"after {RETRY_BUDGET} attempts",
        attempts=RETRY_BUDGET,
    )


def generate_batch(
    params: PlanSynthParams,
    count: int,
    out_dir,
    analyses: tuple[Analysis, ...] = (Analysis.SPATIAL,),
) -> list[Task]:
    """Write ``plan_00000.pgm`` .. using per-index seeds; return PENDING tasks.

    Plan ``i`` uses seed ``params.seed + i``, so content never depends on
    generation order. Plans that cannot be generated get FAILED tasks.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tasks = []
    for index in range(count):
        name = f"plan_{index:05d}"
        plan_path = out_dir / f"{name}.pgm"
        seed = (params.seed + index) % 2**64
        indexed = PlanSynthParams(**{**params.__dict__, "seed": seed})
        try:
            save_occupancy(generate_plan(indexed), plan_path)
            status, error = TaskStatus.PENDING, None
        except InfeasibleParams as exc:
            status, error = TaskStatus.FAILED, str(exc)
        for analysis in analyses:
            task = Task(
                id=f"{name}:{analysis.value}",
                input_path=str(plan_path),
                analysis=analysis,
                cell_size=params.cell_size,
                output_path=str(out_dir / f"{name}.{analysis.value.lower()}.f32"),
                status=status,
            )
            if error:
                task.extra["error"] = error
            tasks.append(task)
    return tasks
