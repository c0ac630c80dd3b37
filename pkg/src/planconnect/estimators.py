"""Scikit-learn style transformer wrappers around the analysis engine.

Each transformer maps an occupancy grid (or a 2-D boolean/0-1 array) to an
``AnalysisField``, so the analyses compose with sklearn pipelines and share
its ``get_params``/``set_params`` plumbing. Transformers are stateless;
``fit`` only validates input.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .fields import AnalysisField
from .grid import OccupancyGrid, largest_component, signed_distance_field
from .spatial import spatial_connectivity_field
from .visual import BACKENDS, visual_connectivity_field, visual_mean_depth_field


def as_grid(X, cell_size: float = 1.0) -> OccupancyGrid:
    """Coerce input into an OccupancyGrid; truthy cells are FREE."""
    if isinstance(X, OccupancyGrid):
        return X
    array = np.asarray(X)
    if array.ndim != 2:
        raise ValueError("expected a 2-D occupancy array or an OccupancyGrid")
    return OccupancyGrid(array.astype(bool), cell_size)


class _FieldTransformer(TransformerMixin, BaseEstimator):
    def __init__(self, cell_size: float = 1.0, prune: bool = True):
        self.cell_size = cell_size
        self.prune = prune

    def fit(self, X, y=None):
        as_grid(X, self.cell_size)
        return self

    def transform(self, X) -> AnalysisField:
        grid = as_grid(X, self.cell_size)
        if self.prune:
            grid = largest_component(grid)
        return self._compute(grid)

    def _compute(self, grid: OccupancyGrid) -> AnalysisField:
        raise NotImplementedError


class SpatialConnectivity(_FieldTransformer):
    """Mean geodesic walking distance from each free cell to all others."""

    def _compute(self, grid):
        return spatial_connectivity_field(grid)


class VisualConnectivity(_FieldTransformer):
    """Count of cells visible from each free cell."""

    def __init__(self, cell_size: float = 1.0, prune: bool = True, backend: str = "shadowcast"):
        super().__init__(cell_size=cell_size, prune=prune)
        self.backend = backend

    def fit(self, X, y=None):
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}")
        return super().fit(X, y)

    def _compute(self, grid):
        return visual_connectivity_field(grid, backend=self.backend)


class VisualMeanDepth(VisualConnectivity):
    """Mean visibility-graph depth from each free cell to all others."""

    def _compute(self, grid):
        return visual_mean_depth_field(grid, backend=self.backend)


class SignedDistance(_FieldTransformer):
    """Distance from each free cell to the nearest obstacle."""

    def __init__(self, cell_size: float = 1.0, prune: bool = False):
        super().__init__(cell_size=cell_size, prune=prune)

    def _compute(self, grid):
        return signed_distance_field(grid)
