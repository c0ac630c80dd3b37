"""Single-task analysis execution shared by the local pool and TCP workers."""

from __future__ import annotations

import time

from .. import visual
from ..grid import largest_component, load_occupancy, signed_distance_field
from ..spatial import spatial_connectivity_field
from .manifest import Analysis, Task


def run_analysis(input_path, analysis: Analysis, cell_size: float, output_path,
                 visibility_backend: str = "shadowcast") -> None:
    """Load a plan, prune it, run one analysis, write the .f32 field atomically.

    Pure function of its file inputs; identical no matter which worker or
    process runs it, which is what makes farm retries and duplicates safe.
    """
    grid = largest_component(load_occupancy(input_path, cell_size))
    if analysis is Analysis.SPATIAL:
        result = spatial_connectivity_field(grid)
    elif analysis is Analysis.VISUAL:
        result = visual.visual_connectivity_field(grid, backend=visibility_backend)
    elif analysis is Analysis.VISUAL_DEPTH:
        result = visual.visual_mean_depth_field(grid, backend=visibility_backend)
    elif analysis is Analysis.SDF:
        result = signed_distance_field(grid)
    else:
        raise ValueError(f"unknown analysis {analysis!r}")
    result.save_f32(output_path)


def execute_task(task: Task) -> tuple[float, bool, str]:
    """Run one task, timing its CPU cost. Returns (cpu_seconds, ok, message)."""
    start = time.thread_time()
    try:
        run_analysis(task.input_path, task.analysis, task.cell_size, task.output_path)
    except Exception as exc:  # per-task isolation: failures never abort a batch
        return time.thread_time() - start, False, f"{type(exc).__name__}: {exc}"
    return time.thread_time() - start, True, ""
