"""Undirected simple graphs in CSR form, with validation, BFS, and file IO."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph.

    ``edges`` holds non-loop pairs (u, v) with u < v, lexicographically
    sorted. Self-loops are tracked in ``has_self_loops`` (one bit per node),
    never as edge-list entries. The CSR view includes a node in its own
    neighbor list exactly when its self-loop bit is set, so
    ``csr_offsets[i+1] - csr_offsets[i]`` is the degree convention used by
    every Laplacian in this package.
    """

    n: int
    edges: np.ndarray          # (m, 2) int64, u < v, sorted
    csr_offsets: np.ndarray    # (n + 1,) int64
    csr_targets: np.ndarray    # (csr_offsets[-1],) int64, sorted per row
    has_self_loops: np.ndarray  # (n,) bool

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    @property
    def num_self_loops(self) -> int:
        return int(self.has_self_loops.sum())

    def neighbors(self, i: int) -> np.ndarray:
        return self.csr_targets[self.csr_offsets[i]:self.csr_offsets[i + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        k = np.searchsorted(row, v)
        return bool(k < row.size and row[k] == v)

    def to_json_dict(self) -> dict:
        return {"n": self.n, "edges": self.edges.tolist()}


@dataclass(frozen=True)
class ConnectivityReport:
    component_count: int
    component_of: np.ndarray   # (n,) int64


def _assemble(n: int, edges: np.ndarray, loops: np.ndarray) -> Graph:
    """Build the CSR view from a clean (deduplicated, sorted) edge array."""
    counts = np.zeros(n, dtype=np.int64)
    if edges.size:
        np.add.at(counts, edges[:, 0], 1)
        np.add.at(counts, edges[:, 1], 1)
    counts += loops.astype(np.int64)
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    targets = np.empty(offsets[-1], dtype=np.int64)
    cursor = offsets[:-1].copy()
    for i in np.flatnonzero(loops):
        targets[cursor[i]] = i
        cursor[i] += 1
    for u, v in edges:
        targets[cursor[u]] = v
        cursor[u] += 1
        targets[cursor[v]] = u
        cursor[v] += 1
    for i in range(n):
        targets[offsets[i]:offsets[i + 1]].sort()
    for arr in (edges, offsets, targets, loops):
        arr.setflags(write=False)
    return Graph(n=n, edges=edges, csr_offsets=offsets, csr_targets=targets,
                 has_self_loops=loops)


def build_graph(n: int, raw_edges) -> Graph:
    """Normalize a raw edge list into a simple undirected graph.

    Duplicate edges (in either orientation) collapse to one, self-loops are
    stripped, and the result is deterministic regardless of input order.
    Raises ValueError for n == 0 or endpoints outside [0, n).
    """
    if n <= 0:
        raise ValueError(f"node count must be positive, got {n}")
    raw = np.asarray(list(raw_edges), dtype=np.int64).reshape(-1, 2)
    bad = np.flatnonzero((raw < 0).any(axis=1) | (raw >= n).any(axis=1))
    if bad.size:
        k = int(bad[0])
        raise ValueError(
            f"edge {k} = ({raw[k, 0]}, {raw[k, 1]}) has an endpoint outside [0, {n})")
    raw = raw[raw[:, 0] != raw[:, 1]]
    lo = np.minimum(raw[:, 0], raw[:, 1])
    hi = np.maximum(raw[:, 0], raw[:, 1])
    edges = np.unique(np.stack([lo, hi], axis=1), axis=0) if raw.size else \
        np.empty((0, 2), dtype=np.int64)
    return _assemble(n, edges, np.zeros(n, dtype=bool))


def degrees(g: Graph) -> np.ndarray:
    """Per-node degree: neighbor count, plus one where the self-loop bit is set."""
    return np.diff(g.csr_offsets)


def add_self_loops(g: Graph) -> Graph:
    """Return a copy with every node's self-loop bit set. Idempotent."""
    return _assemble(g.n, g.edges.copy(), np.ones(g.n, dtype=bool))


def connectivity(g: Graph) -> ConnectivityReport:
    """Label connected components by BFS, starting from node 0."""
    comp = np.full(g.n, -1, dtype=np.int64)
    count = 0
    for start in range(g.n):
        if comp[start] >= 0:
            continue
        comp[start] = count
        queue = [start]
        while queue:
            u = queue.pop()
            for v in g.neighbors(u):
                if comp[v] < 0:
                    comp[v] = count
                    queue.append(int(v))
        count += 1
    comp.setflags(write=False)
    return ConnectivityReport(component_count=count, component_of=comp)


def is_connected(g: Graph) -> bool:
    return connectivity(g).component_count == 1


def largest_component(g: Graph) -> tuple[Graph, np.ndarray]:
    """Extract the largest connected component (ties: lowest component id).

    Returns the sub-graph and the array of original node ids it keeps,
    in ascending order (new id = position in that array).
    """
    report = connectivity(g)
    sizes = np.bincount(report.component_of, minlength=report.component_count)
    keep = np.flatnonzero(report.component_of == int(np.argmax(sizes)))
    new_id = np.full(g.n, -1, dtype=np.int64)
    new_id[keep] = np.arange(keep.size)
    mask = (new_id[g.edges[:, 0]] >= 0) & (new_id[g.edges[:, 1]] >= 0)
    sub_edges = new_id[g.edges[mask]]
    sub = build_graph(int(keep.size), sub_edges)
    if g.has_self_loops[keep].any():
        sub = add_self_loops(sub) if g.has_self_loops[keep].all() else \
            _assemble(sub.n, sub.edges.copy(), g.has_self_loops[keep].copy())
    return sub, keep


def directed_edges(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Expand the CSR view into aligned (source, target) arrays.

    Each undirected edge appears in both orientations; a self-loop appears
    once. Sources are non-decreasing, matching ``csr_offsets`` segments.
    """
    src = np.repeat(np.arange(g.n, dtype=np.int64), degrees(g))
    return src, g.csr_targets


def graph_from_json_dict(payload: dict) -> Graph:
    if not isinstance(payload, dict) or "n" not in payload or "edges" not in payload:
        raise ValueError('graph JSON must be an object with "n" and "edges"')
    return build_graph(int(payload["n"]), payload["edges"])


def read_graph_json(path) -> Graph:
    with open(path, "r", encoding="utf-8") as f:
        return graph_from_json_dict(json.load(f))


def read_graph_tsv(path) -> Graph:
    """Read an edge list with one "u<TAB>v" per line; '#' starts a comment."""
    edges = []
    max_node = -1
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'u<TAB>v', got {line!r}")
        u, v = int(parts[0]), int(parts[1])
        edges.append((u, v))
        max_node = max(max_node, u, v)
    return build_graph(max_node + 1, edges)


def write_graph_json(path, g: Graph) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(g.to_json_dict(), f, indent=2, sort_keys=True)
        f.write("\n")
