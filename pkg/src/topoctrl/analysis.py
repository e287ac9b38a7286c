"""Cover graphs, path search and span-based interference.

Path energy counts the broadcast cost of every transmitting node (all but
the last vertex). Ties are resolved deterministically: min-hop paths by
(hops, energy, vertex sequence), min-energy paths by (energy, vertex
sequence), vertex sequences compared lexicographically.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NoPath
from .netmodel import TAU, DirectedGraph, LinkTable, NodeId, is_connected
from .algorithms.base import Topology

HOPS = "hops"
ENERGY = "energy"


@dataclass(frozen=True)
class CoverGraph:
    graph: DirectedGraph
    power: tuple[float, ...]

    @property
    def cost(self) -> tuple[float, ...]:
        return tuple(p * TAU for p in self.power)

    @property
    def n(self) -> int:
        return len(self.graph.nodes)


def broadcast_powers(g: DirectedGraph, links: LinkTable) -> list[float]:
    """Power each node needs to reach all of its successors in ``g`` (0 if none)."""
    thr = links.thr
    return [max((thr[u][v] for v in g.succ[u]), default=0.0) for u in g.nodes]


def cover_graph(topo: Topology | DirectedGraph, gmax: DirectedGraph, links: LinkTable) -> CoverGraph:
    """Graph induced by omni-directional broadcasts at each node's post-control power.

    (u, v) in G_max joins the cover graph when either endpoint's broadcast
    already reaches the other. The comparison is non-strict so every kept
    edge survives.
    """
    g = topo.graph if isinstance(topo, Topology) else topo
    if not g.edges <= gmax.edges:
        raise ValueError("topology is not a subgraph of G_max")
    c_prime = broadcast_powers(g, links)
    thr = links.thr
    edges = frozenset(
        (u, v) for u, v in gmax.edges if c_prime[u] >= thr[u][v] or c_prime[v] >= thr[v][u]
    )
    t = DirectedGraph(gmax.nodes, edges)
    return CoverGraph(t, tuple(broadcast_powers(t, links)))


def initial_cover(h: DirectedGraph, p_h: float) -> CoverGraph:
    """The baseline graph H, where every node broadcasts at the common power P_H."""
    return CoverGraph(h, tuple(p_h for _ in h.nodes))


@dataclass(frozen=True)
class PathResult:
    vertices: tuple[NodeId, ...]
    energy: float
    interference: int

    @property
    def hops(self) -> int:
        return len(self.vertices) - 1


def span(e: tuple[NodeId, NodeId], g: DirectedGraph) -> int:
    """Third-party nodes adjacent to either endpoint of ``e``."""
    a, b = e
    nb = g.neighbors
    return len((nb[a] | nb[b]) - {a, b})


def path_interference(T: CoverGraph | DirectedGraph, path: PathResult | Sequence[NodeId]) -> int:
    g = T.graph if isinstance(T, CoverGraph) else T
    verts = path.vertices if isinstance(path, PathResult) else tuple(path)
    return sum(span(e, g) for e in zip(verts, verts[1:]))


def path_energy(T: CoverGraph, verts: Sequence[NodeId]) -> float:
    cost = T.cost
    total = 0.0
    for x in verts[:-1]:
        total += cost[x]
    return total


class _SpanCache:
    def __init__(self, g: DirectedGraph):
        self.g = g
        self.cache: dict = {}

    def __call__(self, a, b):
        key = (a, b) if a < b else (b, a)
        s = self.cache.get(key)
        if s is None:
            s = self.cache[key] = span(key, self.g)
        return s


@dataclass
class SourceTree:
    """Chosen paths from one source to every reachable node."""

    source: NodeId
    energy: dict
    hops: dict
    path: dict
    interference: dict


def _min_hop_tree(T: CoverGraph, s: NodeId, spans) -> SourceTree:
    succ = T.graph.succ
    cost = T.cost
    energy = {s: 0.0}
    hops = {s: 0}
    path = {s: (s,)}
    interf = {s: 0}
    level = [s]
    depth = 0
    while level:
        depth += 1
        best: dict = {}
        for p in level:
            cand_e = energy[p] + cost[p]
            pp = path[p]
            for v in succ[p]:
                if v in hops:
                    continue
                cur = best.get(v)
                if cur is None or cand_e < cur[0] or (cand_e == cur[0] and pp < path[cur[1]]):
                    best[v] = (cand_e, p)
        level = sorted(best)
        for v in level:
            e, p = best[v]
            energy[v] = e
            hops[v] = depth
            path[v] = path[p] + (v,)
            interf[v] = interf[p] + spans(p, v)
    return SourceTree(s, energy, hops, path, interf)


def _min_energy_tree(T: CoverGraph, s: NodeId, spans) -> SourceTree:
    succ = T.graph.succ
    cost = T.cost
    energy = {s: 0.0}
    parent = {s: None}
    path = {}
    interf = {}
    hops = {}
    heap = [(0.0, s)]
    while heap:
        e, x = heapq.heappop(heap)
        if x in path:
            continue
        par = parent[x]
        if par is None:
            path[x], interf[x], hops[x] = (x,), 0, 0
        else:
            path[x] = path[par] + (x,)
            interf[x] = interf[par] + spans(par, x)
            hops[x] = hops[par] + 1
        cand = e + cost[x]
        px = path[x]
        for v in succ[x]:
            if v in path:
                continue
            cur = energy.get(v)
            if cur is None or cand < cur:
                energy[v] = cand
                parent[v] = x
                heapq.heappush(heap, (cand, v))
            elif cand == cur and px < path[parent[v]]:
                parent[v] = x
    return SourceTree(s, energy, hops, path, interf)


def source_tree(T: CoverGraph, s: NodeId, kind: str = ENERGY, spans=None) -> SourceTree:
    spans = spans or _SpanCache(T.graph)
    if kind == HOPS:
        return _min_hop_tree(T, s, spans)
    if kind == ENERGY:
        return _min_energy_tree(T, s, spans)
    raise ValueError(f"unknown path kind {kind!r}")


def _single(T: CoverGraph, s, t, kind) -> PathResult:
    if s == t:
        return PathResult((s,), 0.0, 0)
    tree = source_tree(T, s, kind)
    if t not in tree.path:
        raise NoPath(f"no path from {s} to {t}")
    return PathResult(tree.path[t], tree.energy[t], tree.interference[t])


def min_hop_path(T: CoverGraph, s: NodeId, t: NodeId) -> PathResult:
    return _single(T, s, t, HOPS)


def min_energy_path(T: CoverGraph, s: NodeId, t: NodeId) -> PathResult:
    return _single(T, s, t, ENERGY)


@dataclass
class AllPairs:
    """Per ordered pair energy and interference of the chosen paths, as n x n arrays."""

    energy: np.ndarray
    interference: np.ndarray
    hops: np.ndarray


def all_pairs(T: CoverGraph, kind: str) -> AllPairs:
    n = T.n
    energy = np.full((n, n), np.nan)
    interf = np.full((n, n), np.nan)
    hops = np.full((n, n), np.nan)
    spans = _SpanCache(T.graph)
    for s in T.graph.nodes:
        tree = source_tree(T, s, kind, spans)
        idx = list(tree.energy)
        energy[s, idx] = [tree.energy[v] for v in idx]
        interf[s, idx] = [tree.interference[v] for v in idx]
        hops[s, idx] = [tree.hops[v] for v in idx]
    return AllPairs(energy, interf, hops)


def degree_stats(g: DirectedGraph) -> float:
    """Mean undirected degree."""
    return 2 * len(g.undirected_edges()) / max(len(g.nodes), 1)


__all__ = [
    "CoverGraph",
    "PathResult",
    "cover_graph",
    "initial_cover",
    "is_connected",
    "min_hop_path",
    "min_energy_path",
    "span",
    "path_interference",
    "path_energy",
    "all_pairs",
    "source_tree",
]
