"""Local multi-process execution of a task manifest with resume support."""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path

from .manifest import FarmStats, Task, TaskStatus, load_manifest, save_manifest
from .runner import execute_task


def _needs_run(task: Task) -> bool:
    return not (task.status is TaskStatus.DONE and Path(task.output_path).exists())


def _warmup():
    """Trigger jit compilation in the pool worker before any task is timed."""
    import numpy as np

    from ..grid import OccupancyGrid
    from ..spatial import spatial_connectivity_field

    spatial_connectivity_field(OccupancyGrid(np.ones((2, 2), dtype=bool)))


def _run_one(task_json: dict) -> tuple[str, float, bool, str]:
    task = Task.from_json(task_json)
    cpu, ok, message = execute_task(task)
    return task.id, cpu, ok, message


def run_local(manifest_path, workers: int, save: bool = True) -> FarmStats:
    """Execute every runnable task once over a pool of ``workers`` processes.

    Tasks already DONE with an existing output are skipped. Per-task failures
    are recorded as FAILED without aborting the batch. Returns stats over the
    tasks executed in this run; the manifest file is rewritten in place.
    """
    if workers < 1:
        raise ValueError("workers must be positive")
    manifest_path = Path(manifest_path)
    tasks = load_manifest(manifest_path)
    by_id = {t.id: t for t in tasks}
    to_run = [t for t in tasks if _needs_run(t)]

    start = time.monotonic()
    if to_run:
        with ProcessPoolExecutor(max_workers=workers, initializer=_warmup) as pool:
            futures = [pool.submit(_run_one, t.to_json()) for t in to_run]
            for future in as_completed(futures):
                task_id, cpu, ok, message = future.result()
                task = by_id[task_id]
                task.status = TaskStatus.DONE if ok else TaskStatus.FAILED
                task.cpu_seconds = cpu
                task.worker_id = f"local-{os.getpid()}"
                if not ok:
                    task.extra["error"] = message
    wall = max(time.monotonic() - start, 1e-9)

    if save:
        save_manifest(tasks, manifest_path)
    done = [t for t in to_run if t.status is TaskStatus.DONE]
    return FarmStats(
        sample_count=len(done),
        total_cpu_seconds=sum(t.cpu_seconds for t in done),
        wall_seconds=wall,
    )
