from .manifest import (
    Analysis,
    FarmStats,
    Task,
    TaskStatus,
    compute_stats,
    format_duration,
    load_manifest,
    parse_duration,
    save_manifest,
)
from .coordinator import Coordinator, serve_coordinator
from .local import run_local
from .runner import run_analysis
from .worker import run_worker

__all__ = [
    "Analysis",
    "Coordinator",
    "FarmStats",
    "Task",
    "TaskStatus",
    "compute_stats",
    "format_duration",
    "load_manifest",
    "parse_duration",
    "run_analysis",
    "run_local",
    "run_worker",
    "save_manifest",
    "serve_coordinator",
]
