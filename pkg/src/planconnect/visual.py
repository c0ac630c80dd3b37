"""Cell-to-cell visibility and the visibility-graph measures built on it.

Two backends compute per-cell visibility:

* ``exact`` — a cell sees another iff the open segment between their centres
  misses the interior of every blocked cell. Touching a blocked cell's edge or
  corner does not block. Decided in exact integer arithmetic (coordinates are
  doubled so centres and cell borders are integers).
* ``shadowcast`` — symmetric recursive shadow-casting, quadrant by quadrant,
  scanning rows outward while narrowing the visible slope interval at walls.
  Shadow boundaries are the tangent lines through wall-run corners, kept as
  exact rationals, and a cell is reported visible only when its centre lies
  inside the interval (boundaries included, since grazing a corner does not
  block). This keeps the relation symmetric.

Blocked cells are obstacles, never targets; the visibility graph has free
cells only.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import DisconnectedVisibilityGraph, NoFreeCells
from .fields import AnalysisField, FieldKind
from .grid import OccupancyGrid
from .spatial import _check_free_cell

BACKENDS = ("shadowcast", "exact")

_BIG = 10**6  # stands in for +/- infinity in the integer slab test


@dataclass(frozen=True)
class VisibilitySet:
    origin: int
    visible: frozenset[int]

    def __post_init__(self):
        if self.origin in self.visible:
            raise ValueError("origin cannot see itself")


def _doubled_coords(rows: np.ndarray, cols: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cell centres on the doubled integer lattice (x = 2*col+1, y = 2*row+1)."""
    return 2 * cols + 1, 2 * rows + 1


def _blocked_mask_exact(
    ox: int, oy: int, tx: np.ndarray, ty: np.ndarray, bx: np.ndarray, by: np.ndarray
) -> np.ndarray:
    """For one origin, which targets have their open sight line cut by a box.

    ``tx, ty``: target centres, shape (T,). ``bx, by``: blocked cell top-left
    corners on the doubled lattice, shape (B,). Returns a bool (T,) array.
    All arithmetic is int64 and exact; a box blocks a target iff the open
    parameter interval where the segment is inside the open box is non-empty.
    """
    if bx.size == 0 or tx.size == 0:
        return np.zeros(tx.shape, dtype=bool)
    dx = (tx - ox)[:, None]  # (T, 1)
    dy = (ty - oy)[:, None]
    ax, aybot = bx[None, :], by[None, :]  # (1, B): box spans (ax, ax+2) x (ay, ay+2)
    bxr, aytop = ax + 2, aybot + 2

    # Per-axis open t-interval (lo/den, hi/den) with positive denominator.
    lo_x = np.where(dx > 0, ax - ox, ox - bxr)
    hi_x = np.where(dx > 0, bxr - ox, ox - ax)
    den_x = np.abs(dx)
    x_zero = dx == 0
    x_inside = (ax < ox) & (ox < bxr)
    lo_x = np.where(x_zero, -_BIG, lo_x)
    hi_x = np.where(x_zero, _BIG, hi_x)
    den_x = np.where(x_zero, 1, den_x)

    lo_y = np.where(dy > 0, aybot - oy, oy - aytop)
    hi_y = np.where(dy > 0, aytop - oy, oy - aybot)
    den_y = np.abs(dy)
    y_zero = dy == 0
    y_inside = (aybot < oy) & (oy < aytop)
    lo_y = np.where(y_zero, -_BIG, lo_y)
    hi_y = np.where(y_zero, _BIG, hi_y)
    den_y = np.where(y_zero, 1, den_y)

    # max(lo_x, lo_y, 0) < min(hi_x, hi_y, 1), strict, by cross-multiplication.
    hit = (
        (lo_x * den_y < hi_y * den_x)
        & (lo_y * den_x < hi_x * den_y)
        & (lo_x < den_x)
        & (lo_y < den_y)
        & (hi_x > 0)
        & (hi_y > 0)
    )
    hit &= ~(x_zero & ~x_inside)
    hit &= ~(y_zero & ~y_inside)
    return hit.any(axis=1)


def visible_set_exact(grid: OccupancyGrid, origin: int) -> VisibilitySet:
    """Exact centre-to-centre visibility from one free cell."""
    orow, ocol = _check_free_cell(grid, origin)
    frows, fcols = np.nonzero(grid.free)
    brows, bcols = np.nonzero(~grid.free)
    tx, ty = _doubled_coords(frows.astype(np.int64), fcols.astype(np.int64))
    bx, by = 2 * bcols.astype(np.int64), 2 * brows.astype(np.int64)
    ox, oy = 2 * ocol + 1, 2 * orow + 1
    blocked = _blocked_mask_exact(ox, oy, tx, ty, bx, by)
    indices = frows * grid.width + fcols
    visible = frozenset(int(i) for i in indices[~blocked] if i != origin)
    return VisibilitySet(origin, visible)


def _round_ties_up(num: int, den: int) -> int:
    """round(num/den) with .5 rounding up; den > 0."""
    return (2 * num + den) // (2 * den)


def _round_ties_down(num: int, den: int) -> int:
    """round(num/den) with .5 rounding down; den > 0."""
    return -((-(2 * num - den)) // (2 * den))


def _rat_le(a: int, b: int, c: int, d: int) -> bool:
    """a/b <= c/d with positive denominators."""
    return a * d <= c * b


# Quadrant transforms: (depth, col) -> (row, col) offset from the origin.
_QUADRANTS = (
    lambda d, c: (-d, c),  # north
    lambda d, c: (d, c),  # south
    lambda d, c: (c, d),  # east
    lambda d, c: (c, -d),  # west
)


def visible_set_shadowcast(grid: OccupancyGrid, origin: int) -> VisibilitySet:
    """Symmetric shadow-casting visibility from one free cell."""
    orow, ocol = _check_free_cell(grid, origin)
    free = grid.free
    h, w = free.shape
    visible: set[int] = set()

    for transform in _QUADRANTS:
        # rows of (depth, start_num, start_den, end_num, end_den); the slope
        # interval is [start, end] with slopes measured as col/depth.
        rows = [(1, -1, 1, 1, 1)]
        while rows:
            depth, sn, sd, en, ed = rows.pop()
            if depth > h + w:
                continue
            if sn * ed > en * sd:  # empty sector
                continue
            # widen the visited range so walls just outside the sector still
            # cast their shadows into it; reveals stay gated by the interval
            min_col = _round_ties_up(depth * sn, sd) - 2
            max_col = _round_ties_down(depth * en, ed) + 2
            prev_wall = None
            start_n, start_d = sn, sd
            for col in range(min_col, max_col + 1):
                rr, cc = transform(depth, col)
                r, c = orow + rr, ocol + cc
                in_bounds = 0 <= r < h and 0 <= c < w
                wall = not in_bounds or not free[r, c]
                if not wall:
                    # centre slope must be inside [start, end]; boundaries are
                    # visible because tangent lines only graze wall corners
                    if col * start_d >= depth * start_n and col * ed <= depth * en:
                        visible.add(r * w + c)
                num = 2 * col - 1
                if prev_wall is True and not wall:
                    # right tangent of the wall run that ended at col - 1
                    tn, td = (num, 2 * depth - 1) if num > 0 else (num, 2 * depth + 1)
                    if not _rat_le(tn, td, start_n, start_d):
                        start_n, start_d = tn, td
                if prev_wall is False and wall:
                    # left tangent of the wall starting at col
                    tn, td = (num, 2 * depth + 1) if num > 0 else (num, 2 * depth - 1)
                    if _rat_le(en, ed, tn, td):
                        rows.append((depth + 1, start_n, start_d, en, ed))
                    else:
                        rows.append((depth + 1, start_n, start_d, tn, td))
                prev_wall = wall
            if prev_wall is False:
                rows.append((depth + 1, start_n, start_d, en, ed))

    visible.discard(origin)
    return VisibilitySet(origin, frozenset(visible))


def _visible_set(grid: OccupancyGrid, origin: int, backend: str) -> VisibilitySet:
    if backend == "exact":
        return visible_set_exact(grid, origin)
    if backend == "shadowcast":
        return visible_set_shadowcast(grid, origin)
    raise ValueError(f"unknown visibility backend {backend!r}")


def visual_connectivity_field(grid: OccupancyGrid, backend: str = "shadowcast") -> AnalysisField:
    """Per-cell count of visible free cells."""
    if not grid.free.any():
        raise NoFreeCells("grid has no FREE cells")
    values = np.zeros(grid.free.shape, dtype=np.float64)
    for row, col in zip(*np.nonzero(grid.free)):
        origin = int(row) * grid.width + int(col)
        values[row, col] = len(_visible_set(grid, origin, backend).visible)
    return AnalysisField(values, grid.free.copy(), FieldKind.VISUAL_CONNECTIVITY)


def visibility_adjacency(grid: OccupancyGrid, backend: str = "shadowcast") -> dict[int, frozenset[int]]:
    """Full visibility graph: free cell index -> set of visible free cells."""
    adjacency = {}
    for row, col in zip(*np.nonzero(grid.free)):
        origin = int(row) * grid.width + int(col)
        adjacency[origin] = _visible_set(grid, origin, backend).visible
    return adjacency


def visual_mean_depth_field(grid: OccupancyGrid, backend: str = "shadowcast") -> AnalysisField:
    """Mean visibility-graph step count from each free cell to all others."""
    if not grid.free.any():
        raise NoFreeCells("grid has no FREE cells")
    adjacency = visibility_adjacency(grid, backend)
    nodes = list(adjacency)
    values = np.zeros(grid.free.shape, dtype=np.float64)
    n = len(nodes)
    for source in nodes:
        if n == 1:
            break
        depth = {source: 0}
        queue = deque([source])
        total = 0
        while queue:
            node = queue.popleft()
            for neighbor in adjacency[node]:
                if neighbor not in depth:
                    depth[neighbor] = depth[node] + 1
                    total += depth[neighbor]
                    queue.append(neighbor)
        if len(depth) != n:
            raise DisconnectedVisibilityGraph(
                f"cell {source} reaches only {len(depth)} of {n} free cells"
            )
        values[source // grid.width, source % grid.width] = total / (n - 1)
    return AnalysisField(values, grid.free.copy(), FieldKind.VISUAL_MEAN_DEPTH)
