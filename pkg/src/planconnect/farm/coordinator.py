"""Task coordinator: dispatches manifest tasks to TCP workers.

Delivery is at-least-once with an idempotent sink: a task whose worker's
heartbeat lapses goes back to PENDING and may run twice, but only the first
RESULT for a task id is recorded, and output files are written atomically by
the (pure) analysis, so duplicates are harmless. Workers are assumed to share
the coordinator's filesystem, standing in for a render-farm network share.
"""

from __future__ import annotations

import socket
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import BindFailure
from .local import _needs_run
from .manifest import FarmStats, Task, TaskStatus, load_manifest, save_manifest
from .protocol import MessageStream, ProtocolViolation


@dataclass
class _Worker:
    worker_id: str
    slots: int
    stream: MessageStream
    last_heartbeat: float
    assigned: set = field(default_factory=set)


class Coordinator:
    def __init__(self, manifest_path, host: str, port: int, heartbeat_timeout: float = 10.0):
        self.manifest_path = Path(manifest_path)
        self.heartbeat_timeout = heartbeat_timeout
        self.tasks = load_manifest(self.manifest_path)
        self.by_id = {t.id: t for t in self.tasks}
        self.lock = threading.Condition()
        self.pending = [t.id for t in self.tasks if _needs_run(t)]
        for task_id in self.pending:
            self.by_id[task_id].status = TaskStatus.PENDING
        self.recorded: set[str] = set()  # task ids completed during this run
        self.workers: dict[str, _Worker] = {}
        self.finished = threading.Event()
        try:
            self.listener = socket.create_server((host, port))
        except OSError as exc:
            raise BindFailure(f"cannot bind {host}:{port}: {exc}") from exc
        self.address = self.listener.getsockname()

    # -- scheduling -------------------------------------------------------

    def _outstanding(self) -> bool:
        if self.pending:
            return True
        return any(worker.assigned for worker in self.workers.values())

    def _assign_locked(self, worker: _Worker) -> None:
        while self.pending and len(worker.assigned) < worker.slots:
            task_id = self.pending.pop(0)
            task = self.by_id[task_id]
            task.status = TaskStatus.RUNNING
            task.worker_id = worker.worker_id
            worker.assigned.add(task_id)
            try:
                worker.stream.send("TASK", task=task.to_json())
            except OSError:
                self._drop_worker_locked(worker)
                return

    def _drop_worker_locked(self, worker: _Worker) -> None:
        if self.workers.get(worker.worker_id) is not worker:
            return
        del self.workers[worker.worker_id]
        for task_id in worker.assigned:
            task = self.by_id[task_id]
            if task_id not in self.recorded:
                task.status = TaskStatus.PENDING
                self.pending.append(task_id)
        worker.assigned.clear()
        worker.stream.close()
        self.lock.notify_all()

    def _record_result_locked(self, worker: _Worker, message: dict) -> None:
        task_id = message["id"]
        worker.assigned.discard(task_id)
        if task_id in self.recorded or task_id not in self.by_id:
            return  # duplicate RESULT: acknowledged by ignoring it
        task = self.by_id[task_id]
        task.cpu_seconds = float(message["cpu_seconds"])
        task.worker_id = worker.worker_id
        task.status = TaskStatus.DONE if message.get("ok") else TaskStatus.FAILED
        if not message.get("ok"):
            task.extra["error"] = message.get("message", "")
        self.recorded.add(task_id)
        self.lock.notify_all()

    # -- connection handling ----------------------------------------------

    def _serve_connection(self, conn: socket.socket) -> None:
        stream = MessageStream(conn)
        worker = None
        try:
            hello = stream.recv()
            if hello is None:
                return
            if hello.get("kind") != "HELLO":
                raise ProtocolViolation(f"expected HELLO, got {hello.get('kind')!r}")
            worker = _Worker(
                worker_id=str(hello["worker_id"]),
                slots=max(1, int(hello.get("slots", 1))),
                stream=stream,
                last_heartbeat=time.monotonic(),
            )
            with self.lock:
                stale = self.workers.get(worker.worker_id)
                if stale is not None:
                    self._drop_worker_locked(stale)
                self.workers[worker.worker_id] = worker
                self._assign_locked(worker)
            while not self.finished.is_set():
                message = stream.recv()
                if message is None:
                    break
                kind = message["kind"]
                with self.lock:
                    worker.last_heartbeat = time.monotonic()
                    if kind == "RESULT":
                        self._record_result_locked(worker, message)
                        self._assign_locked(worker)
                    elif kind == "HEARTBEAT":
                        pass
                    else:
                        raise ProtocolViolation(f"unexpected {kind!r} from worker")
        except (ProtocolViolation, OSError, KeyError, ValueError):
            pass  # violating or vanished worker: tasks are requeued below
        finally:
            with self.lock:
                if worker is not None:
                    self._drop_worker_locked(worker)
                else:
                    stream.close()

    def _accept_loop(self) -> None:
        while not self.finished.is_set():
            try:
                conn, _ = self.listener.accept()
            except OSError:
                return
            threading.Thread(target=self._serve_connection, args=(conn,), daemon=True).start()

    def _monitor_loop(self) -> None:
        while not self.finished.is_set():
            time.sleep(min(0.5, self.heartbeat_timeout / 4))
            now = time.monotonic()
            with self.lock:
                for worker in list(self.workers.values()):
                    if now - worker.last_heartbeat > self.heartbeat_timeout:
                        self._drop_worker_locked(worker)
                for worker in list(self.workers.values()):
                    self._assign_locked(worker)

    # -- main entry --------------------------------------------------------

    def run(self) -> FarmStats:
        start = time.monotonic()
        threading.Thread(target=self._accept_loop, daemon=True).start()
        threading.Thread(target=self._monitor_loop, daemon=True).start()
        with self.lock:
            while self._outstanding():
                self.lock.wait(timeout=0.5)
                # idle workers may exist while tasks sit pending (e.g. after a
                # drop); keep nudging assignment
                for worker in list(self.workers.values()):
                    self._assign_locked(worker)
            self.finished.set()
            for worker in list(self.workers.values()):
                try:
                    worker.stream.send("DONE")
                except OSError:
                    pass
                worker.stream.close()
            self.workers.clear()
        self.listener.close()
        wall = max(time.monotonic() - start, 1e-9)
        save_manifest(self.tasks, self.manifest_path)
        done = [self.by_id[i] for i in self.recorded if self.by_id[i].status is TaskStatus.DONE]
        return FarmStats(
            sample_count=len(done),
            total_cpu_seconds=sum(t.cpu_seconds for t in done),
            wall_seconds=wall,
        )


def serve_coordinator(manifest_path, bind_address: str, heartbeat_timeout: float = 10.0) -> FarmStats:
    host, _, port = bind_address.rpartition(":")
    return Coordinator(manifest_path, host or "0.0.0.0", int(port), heartbeat_timeout).run()
