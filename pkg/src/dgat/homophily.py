"""Homophily and label-informativeness metrics for labeled graphs.

Self-loops never enter the neighbor-based counts; the aggregation metric
adds the identity to the adjacency explicitly, as its definition states.
Degenerate denominators (single effective class, no edges) are rejected
rather than mapped to sentinels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, degrees
from .spectral import adjacency_dense


@dataclass(frozen=True)
class LabeledGraph:
    graph: Graph
    labels: np.ndarray     # (n,) int64 in [0, num_classes)
    num_classes: int

    def onehot(self) -> np.ndarray:
        z = np.zeros((self.graph.n, self.num_classes))
        z[np.arange(self.graph.n), self.labels] = 1.0
        return z


@dataclass(frozen=True)
class MetricReport:
    h_node: float
    h_edge: float
    h_edge_adjusted: float
    h_class: float
    h_agg: float
    label_informativeness: float

    def to_json_dict(self) -> dict:
        return {
            "h_node": self.h_node,
            "h_edge": self.h_edge,
            "h_edge_adjusted": self.h_edge_adjusted,
            "h_class": self.h_class,
            "h_agg": self.h_agg,
            "label_informativeness": self.label_informativeness,
        }


def labeled_graph(graph: Graph, labels, num_classes: int | None = None) -> LabeledGraph:
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (graph.n,):
        raise ValueError(f"labels have shape {labels.shape}, expected ({graph.n},)")
    if labels.size and labels.min() < 0:
        raise ValueError("labels must be non-negative")
    if num_classes is None:
        num_classes = int(labels.max()) + 1 if labels.size else 0
    if labels.size and labels.max() >= num_classes:
        raise ValueError(f"label {labels.max()} outside [0, {num_classes})")
    labels = labels.copy()
    labels.setflags(write=False)
    return LabeledGraph(graph=graph, labels=labels, num_classes=num_classes)


def _simple_degrees(g: Graph) -> np.ndarray:
    """Degrees with self-loops excluded, as the neighbor-count metrics use."""
    return degrees(g) - g.has_self_loops.astype(np.int64)


def _require_edges(lg: LabeledGraph) -> np.ndarray:
    edges = lg.graph.edges
    if edges.shape[0] == 0:
        raise ValueError("metric needs at least one (non-loop) edge")
    return edges


def node_homophily(lg: LabeledGraph) -> float:
    """Mean over nodes of the same-label fraction of their neighborhood.

    Isolated nodes contribute zero to the average.
    """
    g, z = lg.graph, lg.labels
    fractions = np.zeros(g.n)
    for i in range(g.n):
        nbrs = g.neighbors(i)
        nbrs = nbrs[nbrs != i]
        if nbrs.size:
            fractions[i] = np.mean(z[nbrs] == z[i])
    return float(fractions.mean())


def edge_homophily(lg: LabeledGraph) -> float:
    """Fraction of edges joining same-label endpoints."""
    edges = _require_edges(lg)
    z = lg.labels
    return float(np.mean(z[edges[:, 0]] == z[edges[:, 1]]))


def _degree_class_distribution(lg: LabeledGraph) -> np.ndarray:
    """p(c) = (sum of degrees over class-c nodes) / (2 |E|)."""
    d = _simple_degrees(lg.graph)
    mass = np.bincount(lg.labels, weights=d.astype(np.float64),
                       minlength=lg.num_classes)
    return mass / (2.0 * lg.graph.num_edges)


def adjusted_edge_homophily(lg: LabeledGraph) -> float:
    """Edge homophily recentred by the degree-weighted class distribution;
    can be negative. Rejects single-class inputs (zero denominator)."""
    _require_edges(lg)
    p = _degree_class_distribution(lg)
    chance = float(np.sum(p * p))
    if 1.0 - chance == 0.0:
        raise ValueError("all edge mass in one class: adjusted homophily undefined")
    return (edge_homophily(lg) - chance) / (1.0 - chance)


def class_homophily(lg: LabeledGraph) -> float:
    """Per-class intra-edge incidence rate, clamped above the class share
    and averaged over C - 1.

    Each undirected intra-class edge counts once per endpoint, matching the
    degree-sum denominator.
    """
    if lg.num_classes < 2:
        raise ValueError("class homophily needs at least two classes")
    edges = _require_edges(lg)
    z = lg.labels
    intra = z[edges[:, 0]] == z[edges[:, 1]]
    intra_incidence = np.bincount(z[edges[:, 0]][intra], minlength=lg.num_classes).astype(float)
    intra_incidence += np.bincount(z[edges[:, 1]][intra], minlength=lg.num_classes)
    degree_sum = np.bincount(z, weights=_simple_degrees(lg.graph).astype(np.float64),
                             minlength=lg.num_classes)
    h_c = np.divide(intra_incidence, degree_sum,
                    out=np.zeros(lg.num_classes), where=degree_sum > 0)
    share = np.bincount(z, minlength=lg.num_classes) / lg.graph.n
    return float(np.sum(np.clip(h_c - share, 0.0, None)) / (lg.num_classes - 1))


def label_informativeness(lg: LabeledGraph) -> float:
    """2 minus the ratio of the edge-endpoint label-pair entropy to the
    degree-weighted label entropy, with 0 log 0 = 0."""
    edges = _require_edges(lg)
    z = lg.labels
    c = lg.num_classes
    pair_counts = np.zeros((c, c))
    np.add.at(pair_counts, (z[edges[:, 0]], z[edges[:, 1]]), 1.0)
    np.add.at(pair_counts, (z[edges[:, 1]], z[edges[:, 0]]), 1.0)
    p_pair = pair_counts / (2.0 * lg.graph.num_edges)
    p_class = _degree_class_distribution(lg)

    def entropy_sum(p: np.ndarray) -> float:
        nz = p[p > 0]
        return float(np.sum(nz * np.log(nz)))

    denom = entropy_sum(p_class)
    if denom == 0.0:
        raise ValueError("single effective class: label informativeness undefined")
    return 2.0 - entropy_sum(p_pair) / denom


def aggregation_homophily(lg: LabeledGraph) -> float:
    """Fraction of nodes whose post-aggregation similarity to same-label
    nodes is at least its mean similarity to different-label nodes.

    Similarity is S = (A_hat Z)(A_hat Z)^T with A_hat = A + I. A node with
    no different-label nodes counts as satisfying the comparison.
    """
    a_hat = adjacency_dense(lg.graph) + np.eye(lg.graph.n)
    az = a_hat @ lg.onehot()
    sim = az @ az.T
    z = lg.labels
    satisfied = 0
    for i in range(lg.graph.n):
        same = z == z[i]
        if same.all():
            satisfied += 1
            continue
        if sim[i, same].mean() >= sim[i, ~same].mean():
            satisfied += 1
    return satisfied / lg.graph.n


def metric_report(lg: LabeledGraph) -> MetricReport:
    return MetricReport(
        h_node=node_homophily(lg),
        h_edge=edge_homophily(lg),
        h_edge_adjusted=adjusted_edge_homophily(lg),
        h_class=class_homophily(lg),
        h_agg=aggregation_homophily(lg),
        label_informativeness=label_informativeness(lg),
    )
