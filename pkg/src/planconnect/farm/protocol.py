"""Newline-delimited JSON over TCP.

Every message is one line of UTF-8 JSON with a ``kind`` field:
HELLO{worker_id, slots}, TASK{task}, RESULT{id, cpu_seconds, ok, message},
HEARTBEAT{worker_id}, DONE{}.
"""

from __future__ import annotations

import json
import socket
import threading


class ProtocolViolation(Exception):
    pass


class MessageStream:
    """Thread-safe framed JSON messages over a connected socket."""

    def __init__(self, sock: socket.socket):
        self.sock = sock
        self._reader = sock.makefile("r", encoding="utf-8", newline="\n")
        self._send_lock = threading.Lock()

    def send(self, kind: str, **payload) -> None:
        line = json.dumps({"kind": kind, **payload}) + "\n"
        with self._send_lock:
            self.sock.sendall(line.encode("utf-8"))

    def recv(self) -> dict | None:
        """Next message, or None on clean EOF."""
        line = self._reader.readline()
        if not line:
            return None
        try:
            message = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolViolation(f"bad JSON frame: {exc}") from exc
        if not isinstance(message, dict) or "kind" not in message:
            raise ProtocolViolation(f"frame without kind: {message!r}")
        return message

    def close(self) -> None:
        try:
            self.sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        self.sock.close()
