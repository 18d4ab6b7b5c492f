"""Belief propagation over natural-language fact graphs via spectral
filters on the graph Laplacian."""

from .graph import (EntailmentEdge, GraphMatrices, NodeRecord, ReasoningGraph,
                    StructuralEdge, build_matrices, laplacian,
                    normalized_laplacian)
from .spectral import (ChebFilter, SpectralBasis, TemplateBank, apply_bank,
                       cheb_eval, eigendecompose, filter_exact, filter_fast,
                       fit_filter, lowpass_filter, rescale)

__all__ = [
    "NodeRecord", "EntailmentEdge", "StructuralEdge", "ReasoningGraph",
    "GraphMatrices", "build_matrices", "laplacian", "normalized_laplacian",
    "SpectralBasis", "ChebFilter", "TemplateBank", "eigendecompose",
    "rescale", "cheb_eval", "filter_exact", "filter_fast", "apply_bank",
    "fit_filter", "lowpass_filter",
]
