"""Spatial and visual connectivity analysis for raster floor plans."""

from .fields import AnalysisField, FieldKind, GrayImage
from .grid import OccupancyGrid, largest_component, load_occupancy, save_occupancy, signed_distance_field
from .spatial import geodesic_distances, grid_neighbors, spatial_connectivity_field
from .visual import (
    visible_set_exact,
    visible_set_shadowcast,
    visual_connectivity_field,
    visual_mean_depth_field,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisField",
    "FieldKind",
    "GrayImage",
    "OccupancyGrid",
    "geodesic_distances",
    "grid_neighbors",
    "largest_component",
    "load_occupancy",
    "save_occupancy",
    "signed_distance_field",
    "spatial_connectivity_field",
    "visible_set_exact",
    "visible_set_shadowcast",
    "visual_connectivity_field",
    "visual_mean_depth_field",
]
