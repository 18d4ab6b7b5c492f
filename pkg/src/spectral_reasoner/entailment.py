"""Entailment edge scoring and strict-threshold filtering."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import StageOrderError
from .graph import ReasoningGraph
from .providers import EntailmentProvider


@dataclass(frozen=True)
class FilterConfig:
    tau_nli: float

    def __post_init__(self):
        if not (0.0 <= self.tau_nli <= 1.0):
            raise ValueError(f"tau_nli out of [0,1]: {self.tau_nli}")


def score_edges(graph: ReasoningGraph, provider: EntailmentProvider) -> ReasoningGraph:
    """Attach a classifier probability to every entailment edge.

    Topology and nodes are untouched; a provider failure propagates before
    any edge is rewritten.
    """
    if not graph.entailment_edges:
        return graph
    texts = {n.id: n.text for n in graph.nodes}
    pairs = [(texts[e.premise_id], texts[e.hypothesis_id])
             for e in graph.entailment_edges]
    probs = provider.prob_entail_batch(pairs)
    edges = tuple(replace(e, score=float(p))
                  for e, p in zip(graph.entailment_edges, probs))
    return replace(graph, entailment_edges=edges)


def filter_edges(graph: ReasoningGraph, cfg: FilterConfig) -> ReasoningGraph:
    """Keep exactly the edges whose score strictly exceeds tau_nli.

    A score equal to the threshold is dropped; with tau_nli = 1 nothing
    survives. Nodes and structural edges pass through unchanged, so
    filtering may leave isolated nodes.
    """
    unscored = [e for e in graph.entailment_edges if e.score is None]
    if unscored:
        raise StageOrderError(
            f"{len(unscored)} unscored entailment edges (run score first)")
    kept = tuple(e for e in graph.entailment_edges if e.score > cfg.tau_nli)
    return replace(graph, entailment_edges=kept)
