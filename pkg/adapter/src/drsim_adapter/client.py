"""Line-delimited JSON client for a child env-server process."""
from __future__ import annotations

import json
import subprocess
from collections.abc import Sequence

__all__ = ["ProtocolError", "ServerDiedError", "ProtocolClient"]


class ProtocolError(RuntimeError):
    """The server answered with an error payload; the message is verbatim."""


class ServerDiedError(ConnectionError):
    """The child process exited or its pipe closed mid-conversation."""


class ProtocolClient:
    """Owns one child process speaking one JSON object per line over stdio."""

    def __init__(self, command: Sequence[str]):
        self._command = list(command)
        self._proc = subprocess.Popen(
            self._command,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            text=True,
            bufsize=1,
        )

    @property
    def alive(self) -> bool:
        return self._proc.poll() is None

    def _die(self, context: str) -> ServerDiedError:
        stderr = ""
        try:
            stderr = self._proc.stderr.read() if self._proc.stderr else ""
        except ValueError:
            pass
        code = self._proc.poll()
        detail = f"; stderr: {stderr.strip()}" if stderr.strip() else ""
        return ServerDiedError(f"env-server {context} (exit code {code}){detail}")

    def request(self, payload: dict) -> dict:
        if not self.alive:
            raise self._die("is not running")
        try:
            self._proc.stdin.write(json.dumps(payload) + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError, ValueError):
            raise self._die("closed its stdin") from None
        line = self._proc.stdout.readline()
        if not line:
            raise self._die("closed its stdout")
        response = json.loads(line)
        if isinstance(response, dict) and "error" in response:
            raise ProtocolError(response["error"])
        return response

    def close(self) -> None:
        """Ask the server to exit, then make sure the process is gone."""
        if self._proc.poll() is None:
            try:
                self._proc.stdin.write('{"cmd": "close"}\n')
                self._proc.stdin.flush()
            except (BrokenPipeError, OSError, ValueError):
                pass
            try:
                self._proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self._proc.kill()
                self._proc.wait()
        for pipe in (self._proc.stdin, self._proc.stdout, self._proc.stderr):
            if pipe:
                pipe.close()

    def __del__(self):
        try:
            self.close()
        except Exception:
            pass
