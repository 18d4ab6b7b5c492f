"""Embedding and entailment providers.

Two implementations of each interface: a deterministic offline one (no
models, pure functions of the text) and an HTTP client speaking the sidecar
protocol (POST /embed, POST /entail). Both are safe to call concurrently.
"""

from __future__ import annotations

import hashlib
import re
import threading
from dataclasses import dataclass, field
from typing import Protocol, Sequence

import numpy as np
import requests

from .errors import InputError, ProviderUnavailableError

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokens(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


class EmbeddingProvider(Protocol):
    @property
    def dimension(self) -> int: ...

    def embed(self, text: str) -> np.ndarray: ...

    def embed_batch(self, texts: Sequence[str]) -> list[np.ndarray]: ...


class EntailmentProvider(Protocol):
    def prob_entail(self, premise: str, hypothesis: str) -> float: ...

    def prob_entail_batch(self, pairs: Sequence[tuple[str, str]]) -> list[float]: ...


def _check_text(text: str) -> str:
    if not text or not text.strip():
        raise InputError("empty text cannot be embedded or scored")
    return text


def _token_vector(token: str, dim: int) -> np.ndarray:
    # Stable across processes: seed the generator from a content hash.
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    rng = np.random.default_rng(int.from_bytes(digest, "big"))
    return rng.standard_normal(dim)


@dataclass
class HashEmbeddingProvider:
    """Token-hash embedder: per-token seeded Gaussian vectors, mean-pooled
    and L2-normalized. Shared tokens between texts raise cosine similarity,
    which is all the merge and alignment stages need."""

    dim: int = 64
    _cache: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def dimension(self) -> int:
        return self.dim

    def embed(self, text: str) -> np.ndarray:
        _check_text(text)
        toks = tokens(text) or [text.strip().lower()]
        acc = np.zeros(self.dim)
        for tok in toks:
            with self._lock:
                vec = self._cache.get(tok)
                if vec is None:
                    vec = _token_vector(tok, self.dim)
                    self._cache[tok] = vec
            acc += vec
        acc /= len(toks)
        norm = np.linalg.norm(acc)
        if norm == 0.0:
            # Practically unreachable for Gaussian token vectors.
            raise InputError(f"degenerate embedding for {text!r}")
        out = acc / norm
        out.setflags(write=False)
        return out

    def embed_batch(self, texts: Sequence[str]) -> list[np.ndarray]:
        return [self.embed(t) for t in texts]


class LexicalEntailmentProvider:
    """Token-recall heuristic: |tokens(premise) ∩ tokens(hypothesis)| divided
    by |tokens(hypothesis)|. Directional like NLI and bounded in [0, 1]."""

    def prob_entail(self, premise: str, hypothesis: str) -> float:
        _check_text(premise)
        _check_text(hypothesis)
        p = set(tokens(premise))
        h = set(tokens(hypothesis))
        if not h:
            return 1.0 if not p else 0.0
        return len(p & h) / len(h)

    def prob_entail_batch(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        return [self.prob_entail(p, h) for p, h in pairs]


@dataclass
class SidecarConfig:
    base_url: str
    timeout: float = 30.0
    retries: int = 3


class _SidecarClient:
    def __init__(self, cfg: SidecarConfig):
        self.cfg = cfg
        self._session = requests.Session()
        self._lock = threading.Lock()

    def post(self, endpoint: str, payload: dict) -> dict:
        url = self.cfg.base_url.rstrip("/") + endpoint
        last = None
        for attempt in range(self.cfg.retries):
            try:
                with self._lock:
                    resp = self._session.post(url, json=payload, timeout=self.cfg.timeout)
                resp.raise_for_status()
                return resp.json()
            except (requests.ConnectionError, requests.Timeout, requests.HTTPError) as exc:
                last = exc
        raise ProviderUnavailableError(
            f"sidecar unreachable at {url} after {self.cfg.retries} attempts: {last}",
            retries=self.cfg.retries)


class HttpEmbeddingProvider:
    """Client for the sidecar /embed endpoint."""

    def __init__(self, cfg: SidecarConfig):
        self._client = _SidecarClient(cfg)
        self._dim = None

    @property
    def dimension(self) -> int:
        if self._dim is None:
            self.embed("dimension probe")
        return self._dim

    def embed(self, text: str) -> np.ndarray:
        return self.embed_batch([text])[0]

    def embed_batch(self, texts: Sequence[str]) -> list[np.ndarray]:
        for t in texts:
            _check_text(t)
        if not texts:
            return []
        body = self._client.post("/embed", {"texts": list(texts)})
        self._dim = int(body["dim"])
        vectors = [np.asarray(v, dtype=float) for v in body["vectors"]]
        for v in vectors:
            if v.shape != (self._dim,):
                raise ProviderUnavailableError(
                    f"sidecar returned a vector of length {v.shape}, expected {self._dim}")
        return vectors


class HttpEntailmentProvider:
    """Client for the sidecar /entail endpoint."""

    def __init__(self, cfg: SidecarConfig):
        self._client = _SidecarClient(cfg)

    def prob_entail(self, premise: str, hypothesis: str) -> float:
        return self.prob_entail_batch([(premise, hypothesis)])[0]

    def prob_entail_batch(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        for p, h in pairs:
            _check_text(p)
            _check_text(h)
        if not pairs:
            return []
        body = self._client.post("/entail", {"pairs": [[p, h] for p, h in pairs]})
        probs = [float(x) for x in body["probs"]]
        for x in probs:
            if not (0.0 <= x <= 1.0):
                raise ProviderUnavailableError(f"sidecar returned probability {x} out of [0,1]")
        return probs
