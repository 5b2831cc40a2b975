"""Reference author adapter: trains a causal LM on a training export and
serves pair-chunk generation over the wire protocol."""

from .config import AdapterConfig
from .echo import EchoAuthor
from .model import ModelAuthor, ModelLoadError, WhitespaceTokenizer
from .server import create_app, serve

__all__ = [
    "AdapterConfig",
    "EchoAuthor",
    "ModelAuthor",
    "ModelLoadError",
    "WhitespaceTokenizer",
    "create_app",
    "serve",
]
