"""8-connected weighted grid graph and mean geodesic distance fields.

Orthogonal steps cost ``cell_size``, diagonal steps ``cell_size * sqrt(2)``.
Diagonal moves are forbidden past a blocked corner: the diagonal neighbour is
adjacent only if it and both shared orthogonal cells are free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import BlockedCell, NoFreeCells, OutOfBounds, UnreachableCells
from .fields import AnalysisField, FieldKind
from .grid import OccupancyGrid

SQRT2 = math.sqrt(2.0)

# (dr, dc, diagonal?) for the 8 neighbours
_OFFSETS = [
    (-1, 0, False),
    (1, 0, False),
    (0, -1, False),
    (0, 1, False),
    (-1, -1, True),
    (-1, 1, True),
    (1, -1, True),
    (1, 1, True),
]


@dataclass(frozen=True)
class GridEdge:
    src: int
    dst: int
    weight: float


def _check_free_cell(grid: OccupancyGrid, cell: int) -> tuple[int, int]:
    if not 0 <= cell < grid.width * grid.height:
        raise OutOfBounds(f"cell {cell} outside {grid.width}x{grid.height} grid")
    row, col = divmod(cell, grid.width)
    if not grid.free[row, col]:
        raise BlockedCell(f"cell {cell} is BLOCKED")
    return row, col


def grid_neighbors(grid: OccupancyGrid, cell: int) -> list[GridEdge]:
    """Edges from a free cell to its admissible 8-neighbourhood."""
    row, col = _check_free_cell(grid, cell)
    free = grid.free
    h, w = free.shape
    edges = []
    for dr, dc, diagonal in _OFFSETS:
        r, c = row + dr, col + dc
        if not (0 <= r < h and 0 <= c < w) or not free[r, c]:
            continue
        if diagonal and not (free[row, c] and free[r, col]):
            continue
        weight = grid.cell_size * (SQRT2 if diagonal else 1.0)
        edges.append(GridEdge(cell, r * w + c, weight))
    return edges


@njit(cache=True)
def _dijkstra_grid(free, start_r, start_c, cell_size):  # pragma: no cover - jit
    h, w = free.shape
    n = h * w
    dist = np.full(n, np.inf)
    dist[start_r * w + start_c] = 0.0
    # binary heap of (distance, node), stored in parallel arrays
    heap_d = np.empty(8 * n + 1, dtype=np.float64)
    heap_n = np.empty(8 * n + 1, dtype=np.int64)
    heap_d[0] = 0.0
    heap_n[0] = start_r * w + start_c
    size = 1
    ortho = cell_size
    diag = cell_size * np.sqrt(2.0)
    while size > 0:
        d = heap_d[0]
        node = heap_n[0]
        size -= 1
        heap_d[0] = heap_d[size]
        heap_n[0] = heap_n[size]
        # sift down
        i = 0
        while True:
            left = 2 * i + 1
            if left >= size:
                break
            right = left + 1
            child = left
            if right < size and heap_d[right] < heap_d[left]:
                child = right
            if heap_d[child] < heap_d[i]:
                heap_d[i], heap_d[child] = heap_d[child], heap_d[i]
                heap_n[i], heap_n[child] = heap_n[child], heap_n[i]
                i = child
            else:
                break
        if d > dist[node]:
            continue
        r = node // w
        c = node % w
        for k in range(8):
            if k == 0:
                dr, dc = -1, 0
            elif k == 1:
                dr, dc = 1, 0
            elif k == 2:
                dr, dc = 0, -1
            elif k == 3:
                dr, dc = 0, 1
            elif k == 4:
                dr, dc = -1, -1
            elif k == 5:
                dr, dc = -1, 1
            elif k == 6:
                dr, dc = 1, -1
            else:
                dr, dc = 1, 1
            rr = r + dr
            cc = c + dc
            if rr < 0 or rr >= h or cc < 0 or cc >= w:
                continue
            if not free[rr, cc]:
                continue
            if k >= 4 and not (free[r, cc] and free[rr, c]):
                continue
            nd = d + (diag if k >= 4 else ortho)
            nxt = rr * w + cc
            if nd < dist[nxt]:
                dist[nxt] = nd
                # sift up
                heap_d[size] = nd
                heap_n[size] = nxt
                j = size
                size += 1
                while j > 0:
                    parent = (j - 1) // 2
                    if heap_d[j] < heap_d[parent]:
                        heap_d[j], heap_d[parent] = heap_d[parent], heap_d[j]
                        heap_n[j], heap_n[parent] = heap_n[parent], heap_n[j]
                        j = parent
                    else:
                        break
    return dist


@njit(cache=True)
def _mean_geodesic(free, cell_size):  # pragma: no cover - jit
    """Mean geodesic distance to all other free cells, per free cell.

    Returns (means, reachable_ok). Means are 0 on blocked cells. One Dijkstra
    per source; accumulation order is fixed per source, so the result does not
    depend on how sources are scheduled.
    """
    h, w = free.shape
    means = np.zeros((h, w))
    n_free = 0
    for r in range(h):
        for c in range(w):
            if free[r, c]:
                n_free += 1
    if n_free <= 1:
        return means, True
    ok = True
    for r in range(h):
        for c in range(w):
            if not free[r, c]:
                continue
            dist = _dijkstra_grid(free, r, c, cell_size)
            total = 0.0
            for rr in range(h):
                for cc in range(w):
                    if free[rr, cc] and not (rr == r and cc == c):
                        d = dist[rr * w + cc]
                        if not np.isfinite(d):
                            ok = False
                        total += d
            means[r, c] = total / (n_free - 1)
    return means, ok


def geodesic_distances(grid: OccupancyGrid, source: int) -> np.ndarray:
    """Shortest-path metric distances from ``source`` to every cell.

    Returns a (height, width) float array: 0 at the source, +inf on
    unreachable free cells, NaN on blocked cells.
    """
    row, col = _check_free_cell(grid, source)
    dist = _dijkstra_grid(grid.free, row, col, grid.cell_size)
    dist = dist.reshape(grid.height, grid.width)
    return np.where(grid.free, dist, np.nan)


def spatial_connectivity_field(grid: OccupancyGrid) -> AnalysisField:
    """Per-cell mean geodesic distance to every other free cell.

    The grid must be pruned to a single component first; unreachable pairs
    fail loudly rather than silently skewing the mean.
    """
    if not grid.free.any():
        raise NoFreeCells("grid has no FREE cells")
    means, ok = _mean_geodesic(grid.free, grid.cell_size)
    if not ok:
        raise UnreachableCells("grid has unreachable free cells; prune with largest_component first")
    return AnalysisField(means, grid.free.copy(), FieldKind.SPATIAL_CONNECTIVITY)
