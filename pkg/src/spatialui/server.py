"""Frame-protocol endpoints: stdio loop and a local TCP socket server."""

from __future__ import annotations

import socket
import socketserver
import threading
from typing import Callable, TextIO

from .errors import FormatError, ProtocolError
from .protocol import encode_line, event_record, parse_frame_line, snapshot_record
from .runtime import World, tick


def _handle_line(world: World, line: str) -> list[str]:
    """One frame in, event lines plus a snapshot line out."""
    frame = parse_frame_line(line)
    events, snap = tick(world, frame)
    out = [encode_line(event_record(ev)) for ev in events]
    out.append(encode_line(snapshot_record(snap)))
    return out


def run_stdio_session(world: World, stdin: TextIO, stdout: TextIO) -> int:
    """Serve the frame protocol over text streams; returns an exit code."""
    for line in stdin:
        if not line.strip():
            continue
        try:
            for out in _handle_line(world, line):
                stdout.write(out)
            stdout.flush()
        except FormatError as exc:
            stdout.write(encode_line({"error": str(exc), "code": 2}))
            stdout.flush()
            return 2
        except ProtocolError as exc:
            stdout.write(encode_line({"error": str(exc), "code": 3}))
            stdout.flush()
            return 3
    return 0


class _SessionHandler(socketserver.StreamRequestHandler):
    def handle(self):
        world_factory: Callable[[], World] = self.server.world_factory  # type: ignore[attr-defined]
        world = world_factory()
        while True:
            raw = self.rfile.readline()
            if not raw:
                return
            line = raw.decode("utf-8").strip()
            if not line:
                continue
            try:
                for out in _handle_line(world, line):
                    self.wfile.write(out.encode("utf-8"))
            except FormatError as exc:
                self.wfile.write(encode_line({"error": str(exc), "code": 2}).encode("utf-8"))
            except ProtocolError as exc:
                self.wfile.write(encode_line({"error": str(exc), "code": 3}).encode("utf-8"))
            except (BrokenPipeError, ConnectionResetError):
                return


class SessionServer(socketserver.ThreadingTCPServer):
    """One deterministic session per connection, newline-delimited JSON."""

    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, host: str, port: int, world_factory: Callable[[], World]):
        super().__init__((host, port), _SessionHandler)
        self.world_factory = world_factory

    @property
    def port(self) -> int:
        return self.server_address[1]


def serve(world_factory: Callable[[], World], port: int, host: str = "127.0.0.1") -> SessionServer:
    """Start serving in a background thread; caller owns shutdown()."""
    server = SessionServer(host, port, world_factory)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server


def wait_for_port(port: int, host: str = "127.0.0.1", timeout: float = 5.0) -> bool:
    """Poll until the server accepts connections (test/tooling helper)."""
    import time

    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        try:
            with socket.create_connection((host, port), timeout=0.2):
                return True
        except OSError:
            time.sleep(0.02)
    return False
