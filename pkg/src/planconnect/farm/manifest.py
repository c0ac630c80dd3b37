"""Task manifests (JSON Lines) and CPU-vs-wall speed-up accounting."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import EmptyTaskList, ManifestIo


class Analysis(str, enum.Enum):
    SPATIAL = "SPATIAL"
    VISUAL = "VISUAL"
    VISUAL_DEPTH = "VISUAL_DEPTH"
    SDF = "SDF"


class TaskStatus(str, enum.Enum):
    PENDING = "PENDING"
    RUNNING = "RUNNING"
    DONE = "DONE"
    FAILED = "FAILED"


_CORE_FIELDS = ("id", "input_path", "analysis", "cell_size", "output_path", "status", "cpu_seconds", "worker_id")


@dataclass
class Task:
    id: str
    input_path: str
    analysis: Analysis
    cell_size: float
    output_path: str
    status: TaskStatus = TaskStatus.PENDING
    cpu_seconds: float = 0.0
    worker_id: str = ""
    extra: dict = field(default_factory=dict)  # unknown manifest fields, preserved

    def to_json(self) -> dict:
        record = {
            "id": self.id,
            "input_path": self.input_path,
            "analysis": self.analysis.value,
            "cell_size": self.cell_size,
            "output_path": self.output_path,
            "status": self.status.value,
            "cpu_seconds": self.cpu_seconds,
            "worker_id": self.worker_id,
        }
        record.update(self.extra)
        return record

    @classmethod
    def from_json(cls, record: dict) -> "Task":
        try:
            return cls(
                id=record["id"],
                input_path=record["input_path"],
                analysis=Analysis(record["analysis"]),
                cell_size=float(record["cell_size"]),
                output_path=record["output_path"],
                status=TaskStatus(record.get("status", "PENDING")),
                cpu_seconds=float(record.get("cpu_seconds", 0.0)),
                worker_id=record.get("worker_id", ""),
                extra={k: v for k, v in record.items() if k not in _CORE_FIELDS},
            )
        except (KeyError, ValueError) as exc:
            raise ManifestIo(f"bad task record {record!r}: {exc}") from exc


def load_manifest(path) -> list[Task]:
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise ManifestIo(f"cannot read manifest {path}: {exc}") from exc
    tasks = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ManifestIo(f"{path}:{lineno}: bad JSON: {exc}") from exc
        tasks.append(Task.from_json(record))
    ids = [t.id for t in tasks]
    if len(set(ids)) != len(ids):
        raise ManifestIo(f"{path}: duplicate task ids")
    return tasks


def save_manifest(tasks: list[Task], path) -> None:
    path = Path(path)
    body = "".join(json.dumps(t.to_json(), sort_keys=True) + "\n" for t in tasks)
    try:
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(body)
        tmp.replace(path)
    except OSError as exc:
        raise ManifestIo(f"cannot write manifest {path}: {exc}") from exc


@dataclass(frozen=True)
class FarmStats:
    sample_count: int
    total_cpu_seconds: float
    wall_seconds: float

    @property
    def speedup(self) -> float:
        return self.total_cpu_seconds / self.wall_seconds

    def to_json(self) -> dict:
        return {
            "sample_count": self.sample_count,
            "total_cpu_seconds": self.total_cpu_seconds,
            "wall_seconds": self.wall_seconds,
            "speedup": self.speedup,
        }

    def render_table(self) -> str:
        """Human-readable stats table with dd:hh:mm:ss durations."""
        rows = [
            ("No. of samples", str(self.sample_count)),
            ("Total CPU time [dd:hh:mm:ss]", format_duration(self.total_cpu_seconds)),
            ("Actual Evaluation Time [dd:hh:mm:ss]", format_duration(self.wall_seconds)),
            ("Speed-up", f"{self.speedup:.2f}"),
        ]
        width = max(len(label) for label, _ in rows)
        return "\n".join(f"{label:<{width}}  {value}" for label, value in rows)


def compute_stats(tasks: list[Task], wall_seconds: float) -> FarmStats:
    """Aggregate DONE tasks into run statistics (samples, CPU, wall, speed-up)."""
    if not tasks:
        raise EmptyTaskList("no completed tasks to aggregate")
    if not wall_seconds > 0:
        raise ValueError("wall_seconds must be positive")
    done = [t for t in tasks if t.status is TaskStatus.DONE]
    return FarmStats(
        sample_count=len(done),
        total_cpu_seconds=sum(t.cpu_seconds for t in done),
        wall_seconds=wall_seconds,
    )


def format_duration(seconds: float) -> str:
    total = int(round(seconds))
    days, rem = divmod(total, 86400)
    hours, rem = divmod(rem, 3600)
    minutes, secs = divmod(rem, 60)
    return f"{days:02d}:{hours:02d}:{minutes:02d}:{secs:02d}"


def parse_duration(text: str) -> int:
    """Parse dd:hh:mm:ss (or hh:mm:ss) into seconds."""
    parts = [int(p) for p in text.split(":")]
    if not 1 <= len(parts) <= 4:
        raise ValueError(f"bad duration {text!r}")
    seconds = 0
    for part in parts:
        seconds = seconds * 60 + part
    if len(parts) == 4:
        # dd:hh:mm:ss mixes a day field into base-60 math; redo explicitly
        days, hours, minutes, secs = parts
        seconds = ((days * 24 + hours) * 60 + minutes) * 60 + secs
    return seconds
