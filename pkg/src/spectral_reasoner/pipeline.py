"""End-to-end pipeline: load → embed → merge → score → filter → align →
Laplacian → spectral filter → threshold, with every stage also callable on
its own so file artifacts compose.

All artifacts are rendered to strings here; writing them is the CLI's job.
With offline providers the whole run is a pure function of its inputs, so
repeated runs produce byte-identical artifacts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import entailment, kg, merge, spectral
from .errors import ConfigError, EngineError, InputError
from .graph import ReasoningGraph, build_matrices, laplacian, normalized_laplacian
from .graph_io import dump_graph, dump_matrix, load_graph, load_kg
from .inference import dump_conclusions, threshold
from .providers import (HashEmbeddingProvider, HttpEmbeddingProvider,
                        HttpEntailmentProvider, LexicalEntailmentProvider,
                        SidecarConfig)

STAGE_ORDER = ("embed", "merge", "score", "filter", "align",
               "laplacian", "spectral", "threshold")

STAGE_ARTIFACTS = {
    "embed": "graph_embedded.jsonl",
    "merge": "graph_merged.jsonl",
    "score": "graph_scored.jsonl",
    "filter": "graph_filtered.jsonl",
    "align": "graph_refined.jsonl",
    "laplacian": "laplacian.json",
    "spectral": "signal.json",
    "threshold": "conclusions.jsonl",
}


@dataclass(frozen=True)
class PipelineConfig:
    merge_threshold: float = 0.85
    entail_threshold: float = 0.5
    align_lambda: float = 0.5
    align_radius: int = 1
    align_min_match: float = 0.5
    cheb_order: int = 8
    filter_file: Optional[str] = None
    fit_labels: Optional[str] = None
    tau_out: float = 0.5
    laplacian: str = "unnorm"
    provider: str = "offline"
    provider_url: Optional[str] = None
    embed_dim: int = 64
    fit_steps: int = 2000
    fit_lr: float = 1.0

    def __post_init__(self):
        for name in ("merge_threshold", "entail_threshold", "align_lambda",
                     "align_min_match"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ConfigError(f"{name} out of [0,1]: {v}")
        if self.align_radius < 0:
            raise ConfigError(f"align_radius must be >= 0, got {self.align_radius}")
        if self.cheb_order < 0:
            raise ConfigError(f"cheb_order must be >= 0, got {self.cheb_order}")
        if self.laplacian not in ("unnorm", "norm"):
            raise ConfigError(f"laplacian must be 'unnorm' or 'norm', got {self.laplacian!r}")
        if self.provider not in ("offline", "http"):
            raise ConfigError(f"provider must be 'offline' or 'http', got {self.provider!r}")
        if self.provider == "http" and not self.provider_url:
            raise ConfigError("provider 'http' requires provider_url")
        if self.filter_file and self.fit_labels:
            raise ConfigError("filter_file and fit_labels are mutually exclusive")


def make_providers(cfg: PipelineConfig):
    if cfg.provider == "offline":
        return HashEmbeddingProvider(dim=cfg.embed_dim), LexicalEntailmentProvider()
    sidecar = SidecarConfig(base_url=cfg.provider_url)
    return HttpEmbeddingProvider(sidecar), HttpEntailmentProvider(sidecar)


@dataclass
class PipelineResult:
    artifacts: dict[str, str] = field(default_factory=dict)
    report: dict = field(default_factory=dict)


def _counts(graph: ReasoningGraph) -> dict:
    return {"nodes": len(graph.nodes),
            "entailment_edges": len(graph.entailment_edges),
            "structural_edges": len(graph.structural_edges)}


def embed_stage(graph: ReasoningGraph, provider) -> ReasoningGraph:
    nodes = tuple(n if n.embedding is not None else n.with_embedding(provider.embed(n.text))
                  for n in graph.nodes)
    return ReasoningGraph(nodes=nodes, entailment_edges=graph.entailment_edges,
                          structural_edges=graph.structural_edges)


def merge_stage(graph: ReasoningGraph, delta: float):
    sim = merge.similarity_matrix(graph)
    plan = merge.plan_merge(sim, delta)
    return merge.apply_merge(graph, plan), plan


def align_stage(graph: ReasoningGraph, knowledge: Optional[kg.KnowledgeGraph],
                cfg: PipelineConfig, embedder):
    if knowledge is None:
        return graph, ()
    acfg = kg.AlignConfig(lambda_mix=cfg.align_lambda, radius=cfg.align_radius,
                          min_match=cfg.align_min_match)
    return kg.augment(graph, knowledge, acfg, embedder)


def laplacian_for(graph: ReasoningGraph, variant: str) -> tuple[np.ndarray, tuple[str, ...]]:
    m = build_matrices(graph)
    mat = laplacian(m) if variant == "unnorm" else normalized_laplacian(m)
    return mat, m.node_order


def choose_filter(cfg: PipelineConfig, basis: spectral.SpectralBasis,
                  x: np.ndarray, node_order) -> spectral.ChebFilter:
    lmax = basis.lambda_max if basis.lambda_max > 0 else 1.0
    if cfg.filter_file:
        try:
            text = open(cfg.filter_file, encoding="utf-8").read()
        except OSError as exc:
            raise InputError(f"cannot read filter file {cfg.filter_file}: {exc}") from exc
        return spectral.ChebFilter.from_json(text)
    if cfg.fit_labels:
        try:
            labels = json.loads(open(cfg.fit_labels, encoding="utf-8").read())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read labels file {cfg.fit_labels}: {exc}") from exc
        missing = [nid for nid in node_order if nid not in labels]
        if missing:
            raise ConfigError(f"fit labels missing for nodes: {missing}")
        targets = np.array([float(bool(labels[nid])) for nid in node_order])
        return spectral.fit_filter(basis, x, targets, order=cfg.cheb_order,
                                   steps=cfg.fit_steps, lr=cfg.fit_lr)
    return spectral.lowpass_filter(lmax, order=cfg.cheb_order)


def run_pipeline(cfg: PipelineConfig, graph_path, kg_path=None) -> PipelineResult:
    embedder, entailer = make_providers(cfg)
    result = PipelineResult()
    stages = []

    def record(name, graph):
        stages.append({"stage": name, **_counts(graph)})

    graph = load_graph(graph_path)
    record("load", graph)

    graph = embed_stage(graph, embedder)
    record("embed", graph)

    nodes_before = len(graph.nodes)
    graph, plan = merge_stage(graph, cfg.merge_threshold)
    record("merge", graph)
    merge_report = {
        "threshold": cfg.merge_threshold,
        "clusters": [list(c) for c in plan.clusters if len(c) > 1],
        "nodes_before": nodes_before,
        "nodes_after": len(graph.nodes),
    }

    graph = entailment.score_edges(graph, entailer)
    record("score", graph)

    scored = {(e.premise_id, e.hypothesis_id): e.score for e in graph.entailment_edges}
    graph = entailment.filter_edges(graph, entailment.FilterConfig(cfg.entail_threshold))
    record("filter", graph)
    kept = {(e.premise_id, e.hypothesis_id) for e in graph.entailment_edges}
    filter_report = {
        "tau_nli": cfg.entail_threshold,
        "dropped": [{"premise": p, "hypothesis": h, "score": s}
                    for (p, h), s in sorted(scored.items()) if (p, h) not in kept],
    }

    knowledge = load_kg(kg_path) if kg_path else None
    graph, matches = align_stage(graph, knowledge, cfg, embedder)
    record("align", graph)
    align_report = {
        "matches": [{"node": m.node_id, "entity": m.entity_id, "score": m.score}
                    for m in matches],
    }

    lap, node_order = laplacian_for(graph, cfg.laplacian)
    basis = spectral.eigendecompose(lap)
    x = graph.beliefs(node_order)
    filt = choose_filter(cfg, basis, x, node_order)
    y = spectral.filter_exact(basis, filt, x)

    texts = {n.id: n.text for n in graph.nodes}
    conclusions = threshold(y, node_order, texts, x, cfg.tau_out)

    result.report = {
        "stages": stages,
        "merge": merge_report,
        "filter": filter_report,
        "alignment": align_report,
        "spectral": {"n": basis.n, "lambda_max": basis.lambda_max,
                     "order": filt.order, "laplacian": cfg.laplacian},
        "tau_out": cfg.tau_out,
        "asserted": sum(c.asserted for c in conclusions),
    }
    result.artifacts["graph_refined.jsonl"] = dump_graph(graph)
    result.artifacts["filter.json"] = filt.to_json()
    result.artifacts["conclusions.jsonl"] = dump_conclusions(conclusions, cfg.tau_out)
    result.artifacts["report.json"] = json.dumps(result.report, sort_keys=True,
                                                 ensure_ascii=False, indent=2) + "\n"
    return result


def run_stage(stage: str, cfg: PipelineConfig, graph_path, kg_path=None,
              signal_path=None) -> dict[str, str]:
    """Run one stage against file artifacts; returns {filename: content}."""
    if stage not in STAGE_ORDER:
        raise ConfigError(f"unknown stage {stage!r}; expected one of {STAGE_ORDER}")
    embedder, entailer = make_providers(cfg)
    name = STAGE_ARTIFACTS[stage]

    if stage == "threshold":
        graph = load_graph(graph_path)
        if not signal_path:
            raise ConfigError("threshold stage needs --signal from the spectral stage")
        try:
            sig = json.loads(open(signal_path, encoding="utf-8").read())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read signal file {signal_path}: {exc}") from exc
        node_order = tuple(sig["node_order"])
        y = np.array(sig["y"], dtype=float)
        texts = {n.id: n.text for n in graph.nodes}
        x = graph.beliefs(node_order)
        conclusions = threshold(y, node_order, texts, x, cfg.tau_out)
        return {name: dump_conclusions(conclusions, cfg.tau_out)}

    graph = load_graph(graph_path)
    if stage == "embed":
        return {name: dump_graph(embed_stage(graph, embedder))}
    if stage == "merge":
        out, _ = merge_stage(graph, cfg.merge_threshold)
        return {name: dump_graph(out)}
    if stage == "score":
        return {name: dump_graph(entailment.score_edges(graph, entailer))}
    if stage == "filter":
        out = entailment.filter_edges(graph, entailment.FilterConfig(cfg.entail_threshold))
        return {name: dump_graph(out)}
    if stage == "align":
        knowledge = load_kg(kg_path) if kg_path else None
        out, _ = align_stage(graph, knowledge, cfg, embedder)
        return {name: dump_graph(out)}
    if stage == "laplacian":
        lap, _ = laplacian_for(graph, cfg.laplacian)
        return {name: dump_matrix(lap)}
    if stage == "spectral":
        lap, node_order = laplacian_for(graph, cfg.laplacian)
        basis = spectral.eigendecompose(lap)
        x = graph.beliefs(node_order)
        filt = choose_filter(cfg, basis, x, node_order)
        y = spectral.filter_exact(basis, filt, x)
        payload = {"node_order": list(node_order), "y": [float(v) for v in y],
                   "filter": {"coeffs": list(filt.coeffs), "lambda_max": filt.lambda_max}}
        return {name: json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n"}
    raise EngineError(f"unhandled stage {stage!r}")  # pragma: no cover
