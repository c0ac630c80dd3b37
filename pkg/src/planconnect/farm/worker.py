"""Farm worker: pulls tasks over TCP, runs them in slot threads, heartbeats."""

from __future__ import annotations

import os
import socket
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor

from .manifest import Task
from .protocol import MessageStream, ProtocolViolation
from .runner import execute_task


def _connect(host: str, port: int, attempts: int, base_delay: float) -> socket.socket:
    delay = base_delay
    for attempt in range(attempts):
        try:
            return socket.create_connection((host, port), timeout=10)
        except OSError:
            if attempt == attempts - 1:
                raise
            time.sleep(delay)
            delay = min(delay * 2, 10.0)
    raise OSError("unreachable")


def run_worker(
    connect_address: str,
    slots: int,
    heartbeat_interval: float = 2.0,
    connect_attempts: int = 5,
    worker_id: str | None = None,
) -> int:
    """Serve tasks until the coordinator broadcasts DONE.

    Returns 0 on clean shutdown, 1 when the coordinator is unreachable (after
    bounded exponential-backoff retries) or the connection is lost for good.
    The worker id is stable across reconnects so the coordinator can attribute
    work consistently.
    """
    if slots < 1:
        raise ValueError("slots must be positive")
    host, _, port_text = connect_address.rpartition(":")
    port = int(port_text)
    worker_id = worker_id or f"{socket.gethostname()}-{os.getpid()}-{uuid.uuid4().hex[:6]}"

    done = False
    for _session in range(connect_attempts):
        try:
            sock = _connect(host or "127.0.0.1", port, connect_attempts, 0.2)
        except OSError:
            return 1
        stream = MessageStream(sock)
        stop_heartbeat = threading.Event()

        def heartbeat():
            while not stop_heartbeat.wait(heartbeat_interval):
                try:
                    stream.send("HEARTBEAT", worker_id=worker_id)
                except OSError:
                    return

        def run_task(task_json: dict):
            task = Task.from_json(task_json)
            cpu, ok, message = execute_task(task)
            try:
                stream.send("RESULT", id=task.id, cpu_seconds=cpu, ok=ok, message=message)
            except OSError:
                pass

        try:
            stream.send("HELLO", worker_id=worker_id, slots=slots)
            threading.Thread(target=heartbeat, daemon=True).start()
            with ThreadPoolExecutor(max_workers=slots) as pool:
                while True:
                    message = stream.recv()
                    if message is None:
                        break  # connection lost; retry a fresh session
                    kind = message["kind"]
                    if kind == "TASK":
                        pool.submit(run_task, message["task"])
                    elif kind == "DONE":
                        done = True
                        break
                    else:
                        raise ProtocolViolation(f"unexpected {kind!r} from coordinator")
        except (OSError, ProtocolViolation, KeyError):
            pass
        finally:
            stop_heartbeat.set()
            stream.close()
        if done:
            return 0
        time.sleep(0.2 * (2 ** _session))
    return 1
