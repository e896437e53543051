"""RL-style adapter for the drsim env-server stdio protocol."""
from .adapter import DemandResponseAdapter
from .client import ProtocolClient, ProtocolError, ServerDiedError
from .conformance import ConformanceError, check_adapter
from .spaces import Box

__all__ = [
    "DemandResponseAdapter",
    "ProtocolClient",
    "ProtocolError",
    "ServerDiedError",
    "ConformanceError",
    "check_adapter",
    "Box",
]

__version__ = "0.1.0"
