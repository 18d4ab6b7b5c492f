import numpy as np
import pytest

from spectral_reasoner.graph import (EntailmentEdge, NodeRecord,
                                     ReasoningGraph, StructuralEdge)

FIXTURES = __import__("pathlib").Path(__file__).resolve().parent.parent / "fixtures"


def make_graph(n_nodes, edge_pairs=(), sedge_triples=(), beliefs=None):
    """Small graph builder: integer-indexed ids n00, n01, ..."""
    ids = [f"n{i:02d}" for i in range(n_nodes)]
    beliefs = beliefs if beliefs is not None else [0.5] * n_nodes
    nodes = tuple(NodeRecord(id=i, text=f"statement {i}", belief=b)
                  for i, b in zip(ids, beliefs))
    edges = tuple(EntailmentEdge(premise_id=ids[a], hypothesis_id=ids[b])
                  for a, b in edge_pairs)
    sedges = tuple(StructuralEdge(a=ids[a], b=ids[b], weight=w)
                   for a, b, w in sedge_triples)
    return ReasoningGraph(nodes=nodes, entailment_edges=edges, structural_edges=sedges)


def random_graph(rng, max_nodes=64, p=0.15):
    """Random undirected unit-weight graph as a ReasoningGraph."""
    n = int(rng.integers(1, max_nodes + 1))
    sedges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                sedges.append((i, j, 1.0))
    return make_graph(n, sedge_triples=sedges)


def bfs_components(adjacency) -> int:
    n = adjacency.shape[0]
    seen = [False] * n
    comps = 0
    for start in range(n):
        if seen[start]:
            continue
        comps += 1
        stack = [start]
        seen[start] = True
        while stack:
            cur = stack.pop()
            for nxt in np.nonzero(adjacency[cur] > 0)[0]:
                if not seen[nxt]:
                    seen[nxt] = True
                    stack.append(int(nxt))
    return comps


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
