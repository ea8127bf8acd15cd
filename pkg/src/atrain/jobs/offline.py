"""In-process network guard for pipeline runs.

Transcription must work with the cable unplugged, so the pipeline runs
under a guard that patches the socket layer, denies every outbound
connection attempt and records it. The run is judged afterwards: a
non-empty report fails the job even if the caller swallowed the error.

The patch is process-wide, hence the class-level lock: only one guard
can be active at a time, which matches the single-worker queue.
"""

from __future__ import annotations

import socket
import threading
from dataclasses import dataclass

from ..errors import NetworkAttemptDeniedError
from .records import utc_now_iso


@dataclass(frozen=True)
class NetworkAttempt:
    timestamp: str
    api: str
    destination: str


def _describe_address(address) -> str:
    if isinstance(address, tuple) and len(address) >= 2:
        return f"{address[0]}:{address[1]}"
    return repr(address)


class OfflineGuard:
    """Context manager that blocks INET sockets and name resolution."""

    _active_lock = threading.Lock()

    def __init__(self):
        self.attempts: list[NetworkAttempt] = []
        self._record_lock = threading.Lock()
        self._saved = None

    @property
    def report(self) -> list[NetworkAttempt]:
        with self._record_lock:
            return list(self.attempts)

    def _record(self, api: str, destination: str) -> NetworkAttempt:
        attempt = NetworkAttempt(timestamp=utc_now_iso(), api=api, destination=destination)
        with self._record_lock:
            self.attempts.append(attempt)
        return attempt

    def __enter__(self) -> "OfflineGuard":
        self._active_lock.acquire()
        self._saved = (
            socket.socket.connect,
            socket.socket.connect_ex,
            socket.getaddrinfo,
        )
        guard = self
        original_connect, original_connect_ex, _ = self._saved

        def guarded_connect(sock, address):
            if sock.family in (socket.AF_INET, socket.AF_INET6):
                attempt = guard._record("connect", _describe_address(address))
                raise NetworkAttemptDeniedError(
                    f"offline guard denied connect to {attempt.destination}"
                )
            return original_connect(sock, address)

        def guarded_connect_ex(sock, address):
            if sock.family in (socket.AF_INET, socket.AF_INET6):
                attempt = guard._record("connect_ex", _describe_address(address))
                raise NetworkAttemptDeniedError(
                    f"offline guard denied connect to {attempt.destination}"
                )
            return original_connect_ex(sock, address)

        def guarded_getaddrinfo(host, port, *args, **kwargs):
            attempt = guard._record("getaddrinfo", f"{host}:{port}")
            raise NetworkAttemptDeniedError(
                f"offline guard denied name lookup for {attempt.destination}"
            )

        socket.socket.connect = guarded_connect
        socket.socket.connect_ex = guarded_connect_ex
        socket.getaddrinfo = guarded_getaddrinfo
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        try:
            if self._saved is not None:
                (
                    socket.socket.connect,
                    socket.socket.connect_ex,
                    socket.getaddrinfo,
                ) = self._saved
                self._saved = None
        finally:
            self._active_lock.release()
