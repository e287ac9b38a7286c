"""Comparison algorithms: DRNG, DLSS, SMECN, the global MST and MinReach."""
from __future__ import annotations

import heapq

from scipy.cluster.hierarchy import DisjointSet

from ..errors import DisconnectedInput, NoPath
from ..netmodel import DirectedGraph, LinkTable, NodeId
from .base import Topology, make_topology


def _require_symmetric(gmax: DirectedGraph):
    if not gmax.is_symmetric():
        raise ValueError("G_max must be symmetric")


def _drop_if_both(gmax: DirectedGraph, rule) -> set:
    """Remove an edge only when the rule fires for both of its directions."""
    removed = set()
    for u, v in gmax.edges:
        if u < v and rule(u, v) and rule(v, u):
            removed.add((u, v))
            removed.add((v, u))
    return gmax.edges - removed


def run_drng(gmax: DirectedGraph, links: LinkTable) -> Topology:
    """Drop (u, v) when some neighbor n has t(u,n) < t(u,v) and t(n,v) < t(u,v)."""
    _require_symmetric(gmax)
    tup = links.tuple

    def rule(u, v):
        t_uv = tup(u, v)
        for n in gmax.succ[u]:
            if n != v and v in gmax.succ[n] and tup(u, n) < t_uv and tup(n, v) < t_uv:
                return True
        return False

    return make_topology(gmax, _drop_if_both(gmax, rule), "drng")


def run_smecn(gmax: DirectedGraph, links: LinkTable) -> Topology:
    """Drop (u, v) when some neighbor n gives C(u,n) + C(n,v) < C(u,v). Single pass."""
    _require_symmetric(gmax)
    c = links.thr

    def rule(u, v):
        direct = c[u][v]
        cu = c[u]
        for n in gmax.succ[u]:
            if n != v and v in gmax.succ[n] and cu[n] + c[n][v] < direct:
                return True
        return False

    return make_topology(gmax, _drop_if_both(gmax, rule), "smecn")


def local_spanning_tree(u: NodeId, gmax: DirectedGraph, links: LinkTable) -> set[frozenset]:
    """Kruskal tree on the subgraph induced by u and its G_max neighbors."""
    local = {u} | set(gmax.succ[u])
    edges = []
    for a in local:
        for b in gmax.succ[a]:
            if a < b and b in local:
                edges.append((links.symmetric_weight(a, b), a, b))
    edges.sort()
    ds = DisjointSet(local)
    tree = set()
    for _, a, b in edges:
        if ds.merge(a, b):
            tree.add(frozenset((a, b)))
            if len(tree) == len(local) - 1:
                break
    return tree


def run_dlss(gmax: DirectedGraph, links: LinkTable) -> Topology:
    """Keep (u, v) iff {u, v} is an edge of u's local spanning tree."""
    _require_symmetric(gmax)
    edges = set()
    for u in gmax.nodes:
        tree = local_spanning_tree(u, gmax, links)
        edges.update((u, v) for v in gmax.succ[u] if frozenset((u, v)) in tree)
    return make_topology(gmax, edges, "dlss")


def run_mst(gmax: DirectedGraph, links: LinkTable) -> Topology:
    _require_symmetric(gmax)
    edges = sorted((links.symmetric_weight(u, v), u, v) for u, v in gmax.edges if u < v)
    ds = DisjointSet(gmax.nodes)
    kept = set()
    for _, u, v in edges:
        if ds.merge(u, v):
            kept.add((u, v))
            kept.add((v, u))
    if len(gmax.nodes) > 1 and ds.n_subsets != 1:
        raise DisconnectedInput("G_max is not connected; no spanning tree")
    return make_topology(gmax, kept, "mst")


def minreach_costs(gmax: DirectedGraph, links: LinkTable, s: NodeId) -> dict[NodeId, float]:
    """Per-link minimum-energy shortest-path cost from ``s`` to every reachable node."""
    c = links.thr
    dist = {s: 0.0}
    done = set()
    heap = [(0.0, s)]
    while heap:
        d, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        cx = c[x]
        for y in gmax.succ[x]:
            nd = d + cx[y]
            if nd < dist.get(y, float("inf")):
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return dist


def minreach_cost(gmax: DirectedGraph, links: LinkTable, s: NodeId, t: NodeId) -> float:
    if s == t:
        return 0.0
    dist = minreach_costs(gmax, links, s)
    if t not in dist:
        raise NoPath(f"no path from {s} to {t} in G_max")
    return dist[t]
