"""Semantic node merging: cosine similarity matrix, threshold clustering,
supernode construction with belief/embedding averaging.

Pairwise merging is order-dependent, so redundancy clusters are the
connected components of the "similarity strictly above delta" relation and
each whole cluster is averaged once. For a two-node cluster this reduces to
plain pairwise averaging.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateEmbeddingError, StageOrderError
from .graph import EntailmentEdge, NodeRecord, ReasoningGraph, StructuralEdge


@dataclass(frozen=True)
class SimilarityMatrix:
    values: np.ndarray
    node_order: tuple[str, ...]


@dataclass(frozen=True)
class MergePlan:
    clusters: tuple[tuple[str, ...], ...]
    threshold: float


def cosine(u, v) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise DegenerateEmbeddingError(f"dimension mismatch {u.shape} vs {v.shape}")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise DegenerateEmbeddingError("cosine of a zero-norm vector is undefined")
    return float(np.clip(u @ v / (nu * nv), -1.0, 1.0))


def similarity_matrix(graph: ReasoningGraph) -> SimilarityMatrix:
    order = graph.node_ids()
    missing = [n.id for n in graph.nodes if n.embedding is None]
    if missing:
        raise StageOrderError(f"nodes without embeddings (run embed first): {missing}")
    if not order:
        return SimilarityMatrix(values=np.zeros((0, 0)), node_order=order)
    embs = np.array([graph.node(i).embedding for i in order], dtype=float)
    norms = np.linalg.norm(embs, axis=1)
    if np.any(norms == 0.0):
        raise DegenerateEmbeddingError("zero-norm embedding in similarity matrix")
    unit = embs / norms[:, None]
    values = np.clip(unit @ unit.T, -1.0, 1.0)
    values = (values + values.T) / 2.0
    values.setflags(write=False)
    return SimilarityMatrix(values=values, node_order=order)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[rj] = ri


def plan_merge(sim: SimilarityMatrix, delta: float) -> MergePlan:
    """Clusters = connected components of the strict >delta similarity graph."""
    if not (0.0 <= delta <= 1.0):
        raise ValueError(f"delta out of [0,1]: {delta}")
    n = len(sim.node_order)
    uf = _UnionFind(n)
    for i in range(n):
        for j in range(i + 1, n):
            if sim.values[i, j] > delta:
                uf.union(i, j)
    groups: dict[int, list[str]] = {}
    for i, nid in enumerate(sim.node_order):
        groups.setdefault(uf.find(i), []).append(nid)
    clusters = tuple(sorted(tuple(sorted(g)) for g in groups.values()))
    return MergePlan(clusters=clusters, threshold=delta)


def apply_merge(graph: ReasoningGraph, plan: MergePlan) -> ReasoningGraph:
    """Collapse each multi-member cluster into a supernode.

    Supernode: id = smallest member id, belief = mean of member beliefs,
    embedding = renormalized mean of member embeddings, provenance "merged".
    Incident edges are reassigned; self-loops drop and parallel edges
    collapse (keeping the highest score/weight).
    """
    planned = sorted(nid for c in plan.clusters for nid in c)
    if planned != sorted(graph.node_ids()):
        raise ValueError("merge plan does not partition the graph's node ids")

    rep: dict[str, str] = {}
    new_nodes: list[NodeRecord] = []
    for cluster in plan.clusters:
        head = min(cluster)
        for nid in cluster:
            rep[nid] = head
        members = [graph.node(nid) for nid in cluster]
        if len(members) == 1:
            new_nodes.append(members[0])
            continue
        belief = float(np.mean([m.belief for m in members]))
        embedding = None
        if all(m.embedding is not None for m in members):
            mean = np.mean([m.embedding for m in members], axis=0)
            norm = np.linalg.norm(mean)
            if norm == 0.0:
                raise DegenerateEmbeddingError(
                    f"merged embedding of cluster {cluster} has zero norm")
            embedding = tuple(float(v) for v in mean / norm)
        new_nodes.append(NodeRecord(id=head, text=members[0].text, belief=belief,
                                    embedding=embedding, provenance="merged"))

    edges: dict[tuple[str, str], EntailmentEdge] = {}
    for e in graph.entailment_edges:
        p, h = rep[e.premise_id], rep[e.hypothesis_id]
        if p == h:
            continue
        prev = edges.get((p, h))
        score = e.score
        if prev is not None:
            candidates = [s for s in (prev.score, score) if s is not None]
            score = max(candidates) if candidates else None
        edges[(p, h)] = EntailmentEdge(premise_id=p, hypothesis_id=h, score=score)

    sedges: dict[tuple[str, str], StructuralEdge] = {}
    for s in graph.structural_edges:
        a, b = sorted((rep[s.a], rep[s.b]))
        if a == b:
            continue
        prev = sedges.get((a, b))
        weight = s.weight if prev is None else max(prev.weight, s.weight)
        sedges[(a, b)] = StructuralEdge(a=a, b=b, weight=weight)

    return ReasoningGraph(nodes=tuple(new_nodes),
                          entailment_edges=tuple(edges.values()),
                          structural_edges=tuple(sedges.values()))
