"""Model backends.

Built-ins ("hash-<dim>" embeddings, "lexical" NLI) are deterministic and
dependency-free, so the service and its contract tests run without any
model downloads. Real pretrained models load once at startup when a model
name is configured and the optional dependencies are installed.
"""

from __future__ import annotations

import hashlib
import re
import threading

import numpy as np

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def _tokens(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


class HashEmbedder:
    """Per-token seeded Gaussian vectors, mean-pooled, L2-normalized."""

    def __init__(self, dim: int):
        self.dim = dim
        self.name = f"hash-{dim}"
        self._cache: dict[str, np.ndarray] = {}
        self._lock = threading.Lock()

    def _token_vector(self, token: str) -> np.ndarray:
        with self._lock:
            vec = self._cache.get(token)
            if vec is None:
                digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
                rng = np.random.default_rng(int.from_bytes(digest, "big"))
                vec = rng.standard_normal(self.dim)
                self._cache[token] = vec
        return vec

    def encode(self, texts: list[str]) -> np.ndarray:
        out = np.zeros((len(texts), self.dim))
        for row, text in enumerate(texts):
            toks = _tokens(text) or [text.strip().lower()]
            acc = np.zeros(self.dim)
            for tok in toks:
                acc += self._token_vector(tok)
            acc /= len(toks)
            out[row] = acc / np.linalg.norm(acc)
        return out


class LexicalNli:
    """Token recall of the hypothesis against the premise."""

    name = "lexical"

    def score(self, pairs: list[tuple[str, str]]) -> list[float]:
        probs = []
        for premise, hypothesis in pairs:
            p, h = set(_tokens(premise)), set(_tokens(hypothesis))
            if not h:
                probs.append(1.0 if not p else 0.0)
            else:
                probs.append(len(p & h) / len(h))
        return probs


class SentenceTransformerEmbedder:
    def __init__(self, model_name: str):
        from sentence_transformers import SentenceTransformer

        self.name = model_name
        self._model = SentenceTransformer(model_name)
        self.dim = int(self._model.get_sentence_embedding_dimension())
        self._lock = threading.Lock()

    def encode(self, texts: list[str]) -> np.ndarray:
        with self._lock:
            vecs = self._model.encode(texts, convert_to_numpy=True,
                                      normalize_embeddings=True)
        return np.asarray(vecs, dtype=float)


class TransformerNli:
    def __init__(self, model_name: str):
        import torch
        from transformers import (AutoModelForSequenceClassification,
                                  AutoTokenizer)

        self.name = model_name
        self._torch = torch
        self._tokenizer = AutoTokenizer.from_pretrained(model_name)
        self._model = AutoModelForSequenceClassification.from_pretrained(model_name)
        self._model.eval()
        labels = {v.lower(): k for k, v in self._model.config.id2label.items()}
        self._entail_idx = labels.get("entailment", 0)
        self._lock = threading.Lock()

    def score(self, pairs: list[tuple[str, str]]) -> list[float]:
        premises = [p for p, _ in pairs]
        hypotheses = [h for _, h in pairs]
        with self._lock, self._torch.no_grad():
            batch = self._tokenizer(premises, hypotheses, padding=True,
                                    truncation=True, return_tensors="pt")
            logits = self._model(**batch).logits
            probs = self._torch.softmax(logits, dim=-1)[:, self._entail_idx]
        return [float(x) for x in probs]


def load_embedder(model_name: str):
    m = re.fullmatch(r"hash-(\d+)", model_name)
    if m:
        return HashEmbedder(dim=int(m.group(1)))
    return SentenceTransformerEmbedder(model_name)


def load_nli(model_name: str):
    if model_name == "lexical":
        return LexicalNli()
    return TransformerNli(model_name)
