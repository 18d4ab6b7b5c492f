"""External knowledge-graph alignment and augmentation.

Internal nodes are matched to KG entities with a hybrid score mixing
embedding cosine and lexical Jaccard; each match pulls in the entity's
radius-r hop neighborhood as external nodes and structural edges, plus an
anchor edge from the internal node to its match (without the anchor the
import would be disconnected and could not influence propagation).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .errors import KGLookupError, StageOrderError
from .graph import NodeRecord, ReasoningGraph, StructuralEdge
from .merge import cosine
from .providers import EmbeddingProvider, tokens

EXTERNAL_BELIEF = 0.5  # neutral prior for imported facts


@dataclass(frozen=True)
class Entity:
    id: str
    label: str
    embedding: Optional[tuple[float, ...]] = None


@dataclass(frozen=True)
class Relation:
    a: str
    b: str
    type: str = "related"


@dataclass(frozen=True)
class KnowledgeGraph:
    entities: tuple[Entity, ...]
    relations: tuple[Relation, ...]

    def __post_init__(self):
        ids = [e.id for e in self.entities]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate entity ids")
        idset = set(ids)
        for r in self.relations:
            if r.a not in idset or r.b not in idset:
                raise ValueError(f"relation {r.a}--{r.b} references a missing entity")

    def entity(self, entity_id: str) -> Entity:
        for e in self.entities:
            if e.id == entity_id:
                return e
        raise KGLookupError(f"unknown entity id {entity_id!r}")


@dataclass(frozen=True)
class AlignConfig:
    lambda_mix: float = 0.5
    radius: int = 1
    min_match: float = 0.5

    def __post_init__(self):
        if not (0.0 <= self.lambda_mix <= 1.0):
            raise ValueError(f"lambda_mix out of [0,1]: {self.lambda_mix}")
        if self.radius < 0:
            raise ValueError(f"negative radius: {self.radius}")
        if not (0.0 <= self.min_match <= 1.0):
            raise ValueError(f"min_match out of [0,1]: {self.min_match}")


@dataclass(frozen=True)
class AlignmentMatch:
    node_id: str
    entity_id: str
    score: float


def jaccard(a: str, b: str) -> float:
    """Token-set Jaccard over lowercased alphanumeric tokens; 1.0 when both
    sets are empty."""
    ta, tb = set(tokens(a)), set(tokens(b))
    if not ta and not tb:
        return 1.0
    return len(ta & tb) / len(ta | tb)


def _entity_embedding(entity: Entity, provider: EmbeddingProvider, cache: dict):
    if entity.embedding is not None:
        return entity.embedding
    vec = cache.get(entity.id)
    if vec is None:
        vec = tuple(float(v) for v in provider.embed(entity.label))
        cache[entity.id] = vec
    return vec


def hybrid_sim(node: NodeRecord, entity: Entity, cfg: AlignConfig,
               provider: EmbeddingProvider, cache: Optional[dict] = None) -> float:
    if node.embedding is None:
        raise StageOrderError(f"node {node.id} has no embedding (run embed first)")
    emb = _entity_embedding(entity, provider, cache if cache is not None else {})
    lam = cfg.lambda_mix
    return lam * cosine(node.embedding, emb) + (1.0 - lam) * jaccard(node.text, entity.label)


def match_node(node: NodeRecord, kg: KnowledgeGraph, cfg: AlignConfig,
               provider: EmbeddingProvider, cache: Optional[dict] = None
               ) -> Optional[AlignmentMatch]:
    """Argmax of hybrid similarity; ties break to the smallest entity id and
    anything below min_match is a no-match."""
    if cache is None:
        cache = {}
    best: Optional[AlignmentMatch] = None
    for entity in sorted(kg.entities, key=lambda e: e.id):
        score = hybrid_sim(node, entity, cfg, provider, cache)
        if best is None or score > best.score:
            best = AlignmentMatch(node_id=node.id, entity_id=entity.id, score=score)
    if best is None or best.score < cfg.min_match:
        return None
    return best


def neighborhood(kg: KnowledgeGraph, root: str, r: int
                 ) -> tuple[tuple[Entity, ...], tuple[Relation, ...]]:
    """Entities within hop distance r of root (BFS over undirected
    relations) and every relation with both endpoints inside."""
    kg.entity(root)  # raises KGLookupError on unknown roots
    adj: dict[str, set[str]] = {}
    for rel in kg.relations:
        adj.setdefault(rel.a, set()).add(rel.b)
        adj.setdefault(rel.b, set()).add(rel.a)
    dist = {root: 0}
    queue = deque([root])
    while queue:
        cur = queue.popleft()
        if dist[cur] == r:
            continue
        for nxt in adj.get(cur, ()):
            if nxt not in dist:
                dist[nxt] = dist[cur] + 1
                queue.append(nxt)
    inside = set(dist)
    ents = tuple(e for e in kg.entities if e.id in inside)
    rels = tuple(rel for rel in kg.relations if rel.a in inside and rel.b in inside)
    return ents, rels


def augment(graph: ReasoningGraph, kg: KnowledgeGraph, cfg: AlignConfig,
            provider: EmbeddingProvider
            ) -> tuple[ReasoningGraph, tuple[AlignmentMatch, ...]]:
    """Union matched neighborhoods into the graph.

    Imports are deduplicated by entity id across alignments and across
    repeat invocations, so augmenting twice is a no-op the second time.
    Returns the augmented graph and the per-node matches for the report.
    """
    cache: dict[str, tuple[float, ...]] = {}
    matches = []
    for node in graph.nodes:
        if node.provenance == "external" or node.embedding is None:
            continue
        m = match_node(node, kg, cfg, provider, cache)
        if m is not None:
            matches.append(m)

    existing = set(graph.node_ids())
    new_nodes = list(graph.nodes)
    sedges = {s.pair: s for s in graph.structural_edges}
    for m in matches:
        ents, rels = neighborhood(kg, m.entity_id, cfg.radius)
        for ent in ents:
            if ent.id in existing:
                continue
            existing.add(ent.id)
            new_nodes.append(NodeRecord(
                id=ent.id, text=ent.label, belief=EXTERNAL_BELIEF,
                embedding=_entity_embedding(ent, provider, cache),
                provenance="external"))
        for rel in rels:
            if rel.a == rel.b:
                continue
            pair = tuple(sorted((rel.a, rel.b)))
            sedges.setdefault(pair, StructuralEdge(a=pair[0], b=pair[1], weight=1.0))
        if m.node_id != m.entity_id:
            anchor = tuple(sorted((m.node_id, m.entity_id)))
            sedges.setdefault(anchor, StructuralEdge(a=anchor[0], b=anchor[1], weight=1.0))

    out = ReasoningGraph(nodes=tuple(new_nodes),
                         entailment_edges=graph.entailment_edges,
                         structural_edges=tuple(sedges.values()))
    return out, tuple(matches)
