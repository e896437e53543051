"""Shared helpers for driving the env-server in adapter tests."""
import sys

from drsim_adapter import DemandResponseAdapter

# drive the server through the interpreter so the tests don't depend on PATH
SERVER_CMD = [sys.executable, "-m", "drsim"]


def make_adapter(**kwargs):
    kwargs.setdefault("binary", SERVER_CMD)
    return DemandResponseAdapter(**kwargs)
