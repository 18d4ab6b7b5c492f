import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_reasoner.errors import DegenerateEmbeddingError, StageOrderError
from spectral_reasoner.graph import EntailmentEdge, NodeRecord, ReasoningGraph
from spectral_reasoner.merge import (SimilarityMatrix, apply_merge, cosine,
                                     plan_merge, similarity_matrix)


def graph_with_embeddings(embs, beliefs=None, edges=()):
    beliefs = beliefs or [0.5] * len(embs)
    nodes = tuple(NodeRecord(id=f"n{i}", text=f"t{i}", belief=b,
                             embedding=tuple(e))
                  for i, (e, b) in enumerate(zip(embs, beliefs)))
    return ReasoningGraph(nodes=nodes, entailment_edges=tuple(edges))


def sim_from(values, ids):
    return SimilarityMatrix(values=np.array(values, dtype=float),
                            node_order=tuple(ids))


class TestCosine:
    def test_self_similarity(self):
        assert cosine([1.0, 2.0, -1.0], [1.0, 2.0, -1.0]) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert cosine([1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_by_hand(self):
        assert cosine([1.0, 1.0], [1.0, 0.0]) == pytest.approx(1 / math.sqrt(2))

    def test_zero_norm_rejected(self):
        with pytest.raises(DegenerateEmbeddingError):
            cosine([0.0, 0.0], [1.0, 0.0])

    def test_clamped_to_range(self):
        assert -1.0 <= cosine([1e-8, 1.0], [0.0, 1.0]) <= 1.0


class TestSimilarityMatrix:
    def test_single_node(self):
        sim = similarity_matrix(graph_with_embeddings([[0.0, 1.0]]))
        assert np.allclose(sim.values, [[1.0]])

    def test_duplicate_embeddings_off_diagonal_one(self):
        sim = similarity_matrix(graph_with_embeddings([[1.0, 0.0], [1.0, 0.0]]))
        assert sim.values[0, 1] == pytest.approx(1.0)

    def test_symmetric(self):
        rng = np.random.default_rng(0)
        sim = similarity_matrix(graph_with_embeddings(rng.standard_normal((6, 4))))
        assert np.array_equal(sim.values, sim.values.T)

    def test_missing_embedding_is_stage_order_error(self):
        g = ReasoningGraph(nodes=(NodeRecord(id="a", text="t", belief=0.5),))
        with pytest.raises(StageOrderError):
            similarity_matrix(g)


class TestPlanMerge:
    def test_delta_one_all_singletons(self):
        sim = sim_from([[1.0, 0.9], [0.9, 1.0]], ["a", "b"])
        plan = plan_merge(sim, 1.0)
        assert plan.clusters == (("a",), ("b",))

    def test_transitive_chain_clusters_together(self):
        values = [[1.0, 0.95, 0.2], [0.95, 1.0, 0.95], [0.2, 0.95, 1.0]]
        plan = plan_merge(sim_from(values, ["a", "b", "c"]), 0.9)
        assert plan.clusters == (("a", "b", "c"),)

    def test_identical_pair_clusters(self):
        plan = plan_merge(sim_from([[1.0, 1.0], [1.0, 1.0]], ["a", "b"]), 0.9)
        assert plan.clusters == (("a", "b"),)

    def test_tie_at_delta_does_not_merge(self):
        plan = plan_merge(sim_from([[1.0, 0.9], [0.9, 1.0]], ["a", "b"]), 0.9)
        assert plan.clusters == (("a",), ("b",))

    @given(st.integers(0, 100), st.integers(0, 100))
    @settings(max_examples=50, deadline=None)
    def test_monotone_in_delta(self, seed, _):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 10))
        m = rng.uniform(-1, 1, (n, n))
        m = (m + m.T) / 2
        np.fill_diagonal(m, 1.0)
        sim = sim_from(m, [f"n{i}" for i in range(n)])
        deltas = sorted(rng.uniform(0, 1, 5))
        counts = [len(plan_merge(sim, d).clusters) for d in deltas]
        assert counts == sorted(counts)


class TestApplyMerge:
    def test_all_singleton_plan_is_identity(self):
        g = graph_with_embeddings([[1.0, 0.0], [0.0, 1.0]],
                                  edges=[EntailmentEdge("n0", "n1")])
        plan = plan_merge(similarity_matrix(g), 1.0)
        assert apply_merge(g, plan) == g

    def test_pairwise_belief_average(self):
        g = graph_with_embeddings([[1.0, 0.0], [1.0, 0.0]], beliefs=[0.4, 0.8])
        plan = plan_merge(similarity_matrix(g), 0.9)
        merged = apply_merge(g, plan)
        assert len(merged.nodes) == 1
        assert merged.nodes[0].belief == pytest.approx(0.6)
        assert merged.nodes[0].id == "n0"
        assert merged.nodes[0].provenance == "merged"

    def test_parallel_edges_collapse(self):
        g = graph_with_embeddings(
            [[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            edges=[EntailmentEdge("n2", "n0"), EntailmentEdge("n2", "n1")])
        plan = plan_merge(similarity_matrix(g), 0.9)
        merged = apply_merge(g, plan)
        assert len(merged.entailment_edges) == 1
        assert merged.entailment_edges[0].premise_id == "n2"
        assert merged.entailment_edges[0].hypothesis_id == "n0"

    def test_node_count_equals_cluster_count(self):
        rng = np.random.default_rng(3)
        g = graph_with_embeddings(rng.standard_normal((12, 6)))
        plan = plan_merge(similarity_matrix(g), 0.3)
        assert len(apply_merge(g, plan).nodes) == len(plan.clusters)

    def test_belief_sum_conservation(self):
        rng = np.random.default_rng(4)
        g = graph_with_embeddings(rng.standard_normal((10, 3)),
                                  beliefs=list(rng.uniform(0, 1, 10)))
        plan = plan_merge(similarity_matrix(g), 0.2)
        merged = apply_merge(g, plan)
        sizes = {min(c): len(c) for c in plan.clusters}
        weighted = sum(n.belief * sizes[n.id] for n in merged.nodes)
        original = sum(n.belief for n in g.nodes)
        assert weighted == pytest.approx(original, abs=1e-12)

    def test_merged_embedding_renormalized(self):
        g = graph_with_embeddings([[2.0, 0.0], [2.0, 0.0]])
        merged = apply_merge(g, plan_merge(similarity_matrix(g), 0.9))
        assert np.linalg.norm(merged.nodes[0].embedding) == pytest.approx(1.0)
