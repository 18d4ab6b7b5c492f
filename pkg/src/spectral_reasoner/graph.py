"""Reasoning-graph data model and matrix constructions.

Nodes are natural-language propositions with a belief in [0, 1]; directed
entailment edges carry optional classifier scores; structural edges are
undirected weighted links (KG imports, anchors). All types are immutable
after construction, so instances can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import StructuralIntegrityError

PROVENANCES = ("original", "merged", "external")


@dataclass(frozen=True)
class NodeRecord:
    id: str
    text: str
    belief: float
    embedding: Optional[tuple[float, ...]] = None
    provenance: str = "original"

    def __post_init__(self):
        if not (0.0 <= self.belief <= 1.0):
            raise ValueError(f"belief out of [0,1]: {self.belief!r}")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if self.embedding is not None and not isinstance(self.embedding, tuple):
            object.__setattr__(self, "embedding", tuple(float(v) for v in self.embedding))

    def with_embedding(self, vec) -> "NodeRecord":
        return replace(self, embedding=tuple(float(v) for v in vec))


@dataclass(frozen=True)
class EntailmentEdge:
    premise_id: str
    hypothesis_id: str
    score: Optional[float] = None

    def __post_init__(self):
        if self.premise_id == self.hypothesis_id:
            raise ValueError(f"self-entailment on {self.premise_id!r}")
        if self.score is not None and not (0.0 <= self.score <= 1.0):
            raise ValueError(f"score out of [0,1]: {self.score!r}")


@dataclass(frozen=True)
class StructuralEdge:
    a: str
    b: str
    weight: float = 1.0

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError(f"structural self-loop on {self.a!r}")
        if self.weight <= 0:
            raise ValueError(f"non-positive structural weight {self.weight!r}")
        # Canonical unordered orientation.
        if self.b < self.a:
            a, b = self.a, self.b
            object.__setattr__(self, "a", b)
            object.__setattr__(self, "b", a)

    @property
    def pair(self) -> tuple[str, str]:
        return (self.a, self.b)


@dataclass(frozen=True)
class ReasoningGraph:
    nodes: tuple[NodeRecord, ...]
    entailment_edges: tuple[EntailmentEdge, ...] = ()
    structural_edges: tuple[StructuralEdge, ...] = ()

    def __post_init__(self):
        # Canonicalize ordering so equal graphs compare equal regardless of
        # insertion order.
        nodes = tuple(sorted(self.nodes, key=lambda n: n.id))
        edges = tuple(sorted(self.entailment_edges,
                             key=lambda e: (e.premise_id, e.hypothesis_id)))
        sedges = tuple(sorted(self.structural_edges, key=lambda s: s.pair))
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "entailment_edges", edges)
        object.__setattr__(self, "structural_edges", sedges)

        ids = [n.id for n in nodes]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate node ids: {dupes}")
        idset = set(ids)
        for e in edges:
            if e.premise_id not in idset or e.hypothesis_id not in idset:
                raise StructuralIntegrityError(
                    f"entailment edge {e.premise_id}->{e.hypothesis_id} "
                    f"references a missing node")
        for s in sedges:
            if s.a not in idset or s.b not in idset:
                raise StructuralIntegrityError(
                    f"structural edge {s.a}--{s.b} references a missing node")
        seen = set()
        for e in edges:
            key = (e.premise_id, e.hypothesis_id)
            if key in seen:
                raise ValueError(f"duplicate entailment edge {key}")
            seen.add(key)
        seen = set()
        for s in sedges:
            if s.pair in seen:
                raise ValueError(f"duplicate structural edge {s.pair}")
            seen.add(s.pair)
        dims = {len(n.embedding) for n in nodes if n.embedding is not None}
        if len(dims) > 1:
            raise ValueError(f"inconsistent embedding dimensions: {sorted(dims)}")

    def node(self, node_id: str) -> NodeRecord:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def node_ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.nodes)

    def beliefs(self, node_order=None) -> np.ndarray:
        by_id = {n.id: n.belief for n in self.nodes}
        order = node_order if node_order is not None else self.node_ids()
        return np.array([by_id[i] for i in order], dtype=float)


@dataclass(frozen=True)
class GraphMatrices:
    adjacency: np.ndarray
    degree: np.ndarray
    node_order: tuple[str, ...]


def build_matrices(graph: ReasoningGraph) -> GraphMatrices:
    """Adjacency and degree matrices with a deterministic node order.

    Each directed entailment edge contributes unit weight to its unordered
    pair; when a structural edge also covers the pair the maximum wins.
    """
    order = graph.node_ids()
    index = {nid: i for i, nid in enumerate(order)}
    n = len(order)
    a = np.zeros((n, n), dtype=float)
    for e in graph.entailment_edges:
        i, j = index[e.premise_id], index[e.hypothesis_id]
        a[i, j] = a[j, i] = max(a[i, j], 1.0)
    for s in graph.structural_edges:
        i, j = index[s.a], index[s.b]
        a[i, j] = a[j, i] = max(a[i, j], s.weight)
    d = np.diag(a.sum(axis=1))
    a.setflags(write=False)
    d.setflags(write=False)
    return GraphMatrices(adjacency=a, degree=d, node_order=order)


def laplacian(m: GraphMatrices) -> np.ndarray:
    """Unnormalized combinatorial Laplacian D - A."""
    return m.degree - m.adjacency


def normalized_laplacian(m: GraphMatrices) -> np.ndarray:
    """Symmetric normalized Laplacian I - D^{-1/2} A D^{-1/2}.

    Degree-0 rows use the convention D^{-1/2} = 0, so isolated nodes get an
    all-zero row (eigenvalue 0) rather than an error.
    """
    deg = np.diag(m.degree)
    with np.errstate(divide="ignore"):
        inv_sqrt = np.where(deg > 0, 1.0 / np.sqrt(np.where(deg > 0, deg, 1.0)), 0.0)
    scaled = inv_sqrt[:, None] * m.adjacency * inv_sqrt[None, :]
    return np.diag((deg > 0).astype(float)) - scaled
