"""Adapter configuration: training recipe, sampling and serving knobs."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union


@dataclass
class AdapterConfig:
    """Configuration loaded from JSON, with environment overrides for paths.

    ``model`` is a local model name/path for the full-size setup, or the
    sentinel ``"tiny"`` for the from-scratch smoke model used in tests.
    ``training_export`` points at a training file in the pair grammar;
    ``argument_corpus`` optionally adds one prior epoch on an argumentation
    corpus in the same format before the main fine-tune.
    """

    model: str = "tiny"
    training_export: Optional[str] = None
    argument_corpus: Optional[str] = None
    epochs: int = 3
    learning_rate: float = 2e-5
    batch_tokens: int = 1024
    nucleus_p: float = 0.9
    max_tokens: int = 128
    seed: int = 0
    device: str = "cpu"
    # tiny-model shape (ignored for named models)
    tiny_layers: int = 2
    tiny_dim: int = 64
    tiny_heads: int = 2
    tiny_context: int = 128

    def __post_init__(self):
        if not 0.0 < self.nucleus_p <= 1.0:
            raise ValueError("nucleus_p must be in (0, 1]")
        if self.epochs < 0 or self.batch_tokens < 2 or self.max_tokens < 1:
            raise ValueError("invalid training configuration")

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "AdapterConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        config = cls(**data)
        # environment overrides for paths, useful in containerized runs
        config.model = os.environ.get("CNLOOP_ADAPTER_MODEL", config.model)
        config.training_export = os.environ.get(
            "CNLOOP_ADAPTER_TRAINING_EXPORT", config.training_export
        )
        config.argument_corpus = os.environ.get(
            "CNLOOP_ADAPTER_ARGUMENT_CORPUS", config.argument_corpus
        )
        return config
