import numpy as np
import pytest

from planconnect.grid import OccupancyGrid


def random_free_mask(rng, max_size=10, density=0.3, min_size=2):
    """Random occupancy mask with at least one free cell."""
    h = int(rng.integers(min_size, max_size + 1))
    w = int(rng.integers(min_size, max_size + 1))
    while True:
        free = rng.random((h, w)) > density
        if free.any():
            return free


def grid_from_rows(rows, cell_size=1.0):
    """Build a grid from strings: '.' is FREE, '#' is BLOCKED."""
    free = np.array([[ch == "." for ch in row] for row in rows])
    return OccupancyGrid(free, cell_size)


@pytest.fixture
def open3x3():
    return OccupancyGrid(np.ones((3, 3), dtype=bool))


@pytest.fixture
def ring3x3():
    """3x3 with the centre blocked."""
    free = np.ones((3, 3), dtype=bool)
    free[1, 1] = False
    return OccupancyGrid(free)
