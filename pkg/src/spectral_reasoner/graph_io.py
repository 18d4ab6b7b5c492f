"""JSONL serialization for graphs and knowledge graphs.

Graph files carry one record per line:
  {"kind":"node","id":...,"text":...,"belief":...}
  {"kind":"edge","premise":...,"hypothesis":...}
  {"kind":"sedge","a":...,"b":...,"w":...}
Node records may additionally carry "embedding" and "provenance", and edge
records a "score"; stage outputs use these so stages compose through files.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import InputError
from .graph import EntailmentEdge, NodeRecord, ReasoningGraph, StructuralEdge
from .kg import Entity, KnowledgeGraph, Relation


def _records(path) -> list[dict]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        if not isinstance(rec, dict) or "kind" not in rec:
            raise InputError(f"{path}:{lineno}: record must be an object with a 'kind'")
        records.append(rec)
    return records


def load_graph(path) -> ReasoningGraph:
    nodes, edges, sedges = [], [], []
    for rec in _records(path):
        kind = rec["kind"]
        try:
            if kind == "node":
                emb = rec.get("embedding")
                nodes.append(NodeRecord(
                    id=rec["id"], text=rec["text"], belief=float(rec["belief"]),
                    embedding=tuple(emb) if emb is not None else None,
                    provenance=rec.get("provenance", "original")))
            elif kind == "edge":
                score = rec.get("score")
                edges.append(EntailmentEdge(
                    premise_id=rec["premise"], hypothesis_id=rec["hypothesis"],
                    score=float(score) if score is not None else None))
            elif kind == "sedge":
                sedges.append(StructuralEdge(a=rec["a"], b=rec["b"],
                                             weight=float(rec.get("w", 1.0))))
            else:
                raise InputError(f"{path}: unknown record kind {kind!r}")
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"{path}: bad {kind} record {rec!r}: {exc}") from exc
    return ReasoningGraph(nodes=tuple(nodes), entailment_edges=tuple(edges),
                          structural_edges=tuple(sedges))


def dump_graph(graph: ReasoningGraph) -> str:
    lines = []
    for n in graph.nodes:
        rec = {"kind": "node", "id": n.id, "text": n.text, "belief": n.belief}
        if n.embedding is not None:
            rec["embedding"] = list(n.embedding)
        if n.provenance != "original":
            rec["provenance"] = n.provenance
        lines.append(json.dumps(rec, sort_keys=True, ensure_ascii=False))
    for e in graph.entailment_edges:
        rec = {"kind": "edge", "premise": e.premise_id, "hypothesis": e.hypothesis_id}
        if e.score is not None:
            rec["score"] = e.score
        lines.append(json.dumps(rec, sort_keys=True, ensure_ascii=False))
    for s in graph.structural_edges:
        lines.append(json.dumps({"kind": "sedge", "a": s.a, "b": s.b, "w": s.weight},
                                sort_keys=True, ensure_ascii=False))
    return "\n".join(lines) + ("\n" if lines else "")


def save_graph(graph: ReasoningGraph, path) -> None:
    Path(path).write_text(dump_graph(graph), encoding="utf-8")


def load_kg(path) -> KnowledgeGraph:
    """KG JSONL: {"kind":"entity","id","label"} and {"kind":"rel","a","b","type"}.

    ConceptNet CSV exports map onto this by using the concept URI as the
    entity id, the surface form as the label, and one "rel" record per
    assertion with the relation name as "type".
    """
    entities, relations = [], []
    for rec in _records(path):
        kind = rec["kind"]
        try:
            if kind == "entity":
                emb = rec.get("embedding")
                entities.append(Entity(id=rec["id"], label=rec["label"],
                                       embedding=tuple(emb) if emb is not None else None))
            elif kind == "rel":
                relations.append(Relation(a=rec["a"], b=rec["b"],
                                          type=rec.get("type", "related")))
            else:
                raise InputError(f"{path}: unknown record kind {kind!r}")
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"{path}: bad {kind} record {rec!r}: {exc}") from exc
    return KnowledgeGraph(entities=tuple(entities), relations=tuple(relations))


def dump_matrix(matrix) -> str:
    """Dense matrix artifact: one JSON array of rows (desk scale)."""
    rows = [[float(v) for v in row] for row in matrix]
    return json.dumps(rows, sort_keys=True) + "\n"
