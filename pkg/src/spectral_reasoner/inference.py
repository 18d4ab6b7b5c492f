"""Thresholded symbolic inference over filtered belief signals."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ShapeError


@dataclass(frozen=True)
class Conclusion:
    node_id: str
    text: str
    belief_in: float
    belief_out: float
    asserted: bool


def threshold(y, node_order, texts, beliefs_in, tau_out: float) -> list[Conclusion]:
    """One conclusion per node; asserted iff the filtered belief strictly
    exceeds tau_out."""
    y = np.asarray(y, dtype=float)
    if y.shape != (len(node_order),):
        raise ShapeError(f"signal length {y.shape} does not match {len(node_order)} nodes")
    out = []
    for i, nid in enumerate(node_order):
        out.append(Conclusion(node_id=nid, text=texts[nid],
                              belief_in=float(beliefs_in[i]),
                              belief_out=float(y[i]),
                              asserted=bool(y[i] > tau_out)))
    return out


def select_tau(y, labels) -> float:
    """Accuracy-maximizing threshold from an exhaustive sweep.

    Candidates are the midpoints between consecutive distinct sorted values
    of y; ties go to the smallest candidate. Requires both classes present.
    """
    y = np.asarray(y, dtype=float)
    labels = np.asarray(labels, dtype=bool)
    if y.shape != labels.shape:
        raise ShapeError(f"labels shape {labels.shape} does not match y {y.shape}")
    if labels.all() or not labels.any():
        raise ConfigError("tau selection needs at least one positive and one negative label")
    values = np.unique(y)
    candidates = (values[:-1] + values[1:]) / 2.0
    if candidates.size == 0:
        raise ConfigError("tau selection needs at least two distinct y values")
    best_tau, best_acc = None, -1.0
    for tau in candidates:
        acc = float(np.mean((y > tau) == labels))
        if acc > best_acc:
            best_tau, best_acc = float(tau), acc
    return best_tau


def dump_conclusions(conclusions: list[Conclusion], tau_out: float) -> str:
    """JSONL: one record per conclusion plus a trailing summary record."""
    lines = []
    for c in conclusions:
        lines.append(json.dumps({
            "kind": "conclusion", "id": c.node_id, "text": c.text,
            "belief_in": c.belief_in, "belief_out": c.belief_out,
            "asserted": c.asserted}, sort_keys=True, ensure_ascii=False))
    lines.append(json.dumps({
        "kind": "summary", "nodes": len(conclusions),
        "asserted": sum(c.asserted for c in conclusions),
        "tau_out": tau_out}, sort_keys=True, ensure_ascii=False))
    return "\n".join(lines) + "\n"
