"""Sidecar configuration from environment variables.

SIDECAR_EMBED_MODEL  embedding model name; "hash-<dim>" selects the built-in
                     deterministic embedder, anything else is loaded with
                     sentence-transformers.
SIDECAR_NLI_MODEL    NLI model name; "lexical" selects the built-in
                     token-recall scorer, anything else is loaded as a
                     transformers NLI classifier.
SIDECAR_HOST / SIDECAR_PORT   bind address (default 127.0.0.1:8808).
SIDECAR_MAX_BATCH    maximum items per request (default 64).
"""

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class SidecarConfig:
    embed_model: str = "hash-64"
    nli_model: str = "lexical"
    host: str = "127.0.0.1"
    port: int = 8808
    max_batch: int = 64

    def __post_init__(self):
        if self.max_batch < 1:
            raise ValueError(f"max_batch must be >= 1, got {self.max_batch}")


def from_env() -> SidecarConfig:
    return SidecarConfig(
        embed_model=os.environ.get("SIDECAR_EMBED_MODEL", "hash-64"),
        nli_model=os.environ.get("SIDECAR_NLI_MODEL", "lexical"),
        host=os.environ.get("SIDECAR_HOST", "127.0.0.1"),
        port=int(os.environ.get("SIDECAR_PORT", "8808")),
        max_batch=int(os.environ.get("SIDECAR_MAX_BATCH", "64")),
    )
