"""Topology-guided neighbor pruning and edge adding.

Pruning thresholds per-edge spectral distances along the direction field;
edge adding links each node on one side of the field's midpoint to the
opposite extreme node. The rewired graph always carries self-loops so that
downstream attention stays well-defined even for nodes pruned bare.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .graph import Graph, add_self_loops, build_graph
from .spectral import SpectralBundle

logger = logging.getLogger(__name__)

MODES = ("homophily_prune", "heterophily_prune", "heterophily_prune_and_add", "none")
PRUNE_RULES = ("homophily", "heterophily")


@dataclass(frozen=True)
class ExtremeNodes:
    """Locations of the signal extremes and their midpoint.

    Ties go to the lowest node index.
    """

    vmin: int
    vmax: int
    midpoint: float


@dataclass(frozen=True)
class RewirePlan:
    mode: str
    epsilon: float
    pruned: np.ndarray   # (k, 2) subset of the original edges
    added: np.ndarray    # (k, 2) disjoint from the original edges
    extremes: ExtremeNodes
    result: Graph        # rewired graph, self-loops on every node


def extreme_nodes(phi: np.ndarray) -> ExtremeNodes:
    phi = np.asarray(phi, dtype=np.float64)
    vmin = int(np.argmin(phi))
    vmax = int(np.argmax(phi))
    return ExtremeNodes(vmin=vmin, vmax=vmax,
                        midpoint=float(0.5 * (phi[vmin] + phi[vmax])))


def prune_edges(g: Graph, phi1: np.ndarray, epsilon: float, mode: str) -> np.ndarray:
    """Edges to remove: spectral distance strictly below epsilon in homophily
    mode, strictly above it in heterophily mode."""
    if mode not in PRUNE_RULES:
        raise ValueError(f"prune mode must be one of {PRUNE_RULES}, got {mode!r}")
    if epsilon < 0:
        raise ValueError(f"epsilon must be non-negative, got {epsilon}")
    phi1 = np.asarray(phi1, dtype=np.float64)
    if phi1.shape != (g.n,):
        raise ValueError(f"signal has shape {phi1.shape}, expected ({g.n},)")
    if g.num_edges == 0:
        return np.empty((0, 2), dtype=np.int64)
    dist = np.abs(phi1[g.edges[:, 0]] - phi1[g.edges[:, 1]])
    mask = dist < epsilon if mode == "homophily" else dist > epsilon
    return g.edges[mask].copy()


def add_edges(g: Graph, phi1: np.ndarray) -> np.ndarray:
    """New edges linking below-midpoint nodes to the maximum node and
    above-midpoint nodes to the minimum node.

    Pairs already present, self-pairs, and exact-midpoint nodes are skipped.
    A constant signal has no usable direction and yields no edges.
    """
    phi1 = np.asarray(phi1, dtype=np.float64)
    if phi1.shape != (g.n,):
        raise ValueError(f"signal has shape {phi1.shape}, expected ({g.n},)")
    ext = extreme_nodes(phi1)
    if phi1[ext.vmin] == phi1[ext.vmax]:
        logger.warning("constant direction signal: no edges to add")
        return np.empty((0, 2), dtype=np.int64)
    proposals = set()
    for i in np.flatnonzero(phi1 < ext.midpoint):
        proposals.add((min(int(i), ext.vmax), max(int(i), ext.vmax)))
    for i in np.flatnonzero(phi1 > ext.midpoint):
        proposals.add((min(int(i), ext.vmin), max(int(i), ext.vmin)))
    kept = [(u, v) for (u, v) in sorted(proposals)
            if u != v and not g.has_edge(u, v)]
    if not kept:
        return np.empty((0, 2), dtype=np.int64)
    return np.array(kept, dtype=np.int64)


def rewire(g: Graph, bundle: SpectralBundle, mode: str, epsilon: float) -> RewirePlan:
    """Compose pruning and (in heterophily_prune_and_add mode) edge adding,
    then add self-loops everywhere. The direction field is the bundle's
    smallest-positive eigenvector, computed once on the original graph."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if bundle.params.alpha != 1.0:
        raise ValueError(
            f"rewiring uses the alpha=1 family; bundle has alpha={bundle.params.alpha}")
    if bundle.n != g.n:
        raise ValueError(f"bundle is over {bundle.n} nodes, graph has {g.n}")
    phi = bundle.phi1
    empty = np.empty((0, 2), dtype=np.int64)
    if mode == "none":
        pruned, added = empty, empty
    elif mode == "homophily_prune":
        pruned, added = prune_edges(g, phi, epsilon, "homophily"), empty
    elif mode == "heterophily_prune":
        pruned, added = prune_edges(g, phi, epsilon, "heterophily"), empty
    else:
        pruned = prune_edges(g, phi, epsilon, "heterophily")
        added = add_edges(g, phi)
    pruned_keys = {(int(u), int(v)) for u, v in pruned}
    survivors = [e for e in g.edges.tolist() if tuple(e) not in pruned_keys]
    result = add_self_loops(build_graph(g.n, survivors + added.tolist()))
    return RewirePlan(mode=mode, epsilon=float(epsilon), pruned=pruned,
                      added=added, extremes=extreme_nodes(phi), result=result)
