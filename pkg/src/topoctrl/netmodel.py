"""Nodes, pairwise radio links, transmission tuples and the graphs built from them.

Powers are linear units. The energy cost of a link equals its power
threshold (unit transmission time), so ``LinkTable.cost`` is an alias of
``LinkTable.threshold``.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .errors import NetworkFormatError, UnconnectableNetwork

NodeId = int

# Transmission time used to turn a power into an energy cost.
TAU = 1.0


@dataclass(frozen=True)
class Node:
    id: NodeId
    x: float
    y: float
    max_power: float

    def __post_init__(self):
        if self.id < 0:
            raise ValueError(f"node id must be non-negative, got {self.id}")
        if not self.max_power > 0:
            raise ValueError(f"max_power must be positive, got {self.max_power}")

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


class TransmissionTuple(NamedTuple):
    """``t(u, v) = (P_min(u, v), u, v)``; NamedTuple ordering is the lexicographic rule."""

    power: float
    sender: NodeId
    receiver: NodeId


def self_tuple(u: NodeId) -> TransmissionTuple:
    # zero power sorts below every real link since thresholds are positive
    return TransmissionTuple(0.0, u, u)


def compare_tuples(a: TransmissionTuple, b: TransmissionTuple) -> int:
    """Return -1, 0 or 1. Zero only for identical triples."""
    a, b = tuple(a), tuple(b)
    if a == b:
        return 0
    return -1 if a < b else 1


class LinkTable:
    """Per ordered pair threshold, exponent and distance, stored as n x n arrays."""

    def __init__(self, threshold, gamma, distance):
        threshold = np.array(threshold, dtype=float)
        gamma = np.array(gamma, dtype=float)
        distance = np.array(distance, dtype=float)
        n = threshold.shape[0]
        for name, arr in (("threshold", threshold), ("gamma", gamma), ("distance", distance)):
            if arr.shape != (n, n):
                raise ValueError(f"{name} must be a square {n}x{n} array, got {arr.shape}")
        off = ~np.eye(n, dtype=bool)
        if n > 1 and not np.all(threshold[off] > 0):
            raise ValueError("all link thresholds must be positive")
        np.fill_diagonal(threshold, 0.0)
        for arr in (threshold, gamma, distance):
            arr.setflags(write=False)
        self.threshold = threshold
        self.gamma = gamma
        self.distance = distance

    @property
    def n(self) -> int:
        return self.threshold.shape[0]

    @property
    def cost(self) -> np.ndarray:
        return self.threshold * TAU if TAU != 1.0 else self.threshold

    @cached_property
    def thr(self) -> list[list[float]]:
        """Nested-list copy of the thresholds for fast scalar access."""
        return self.threshold.tolist()

    def tuple(self, u: NodeId, v: NodeId) -> TransmissionTuple:
        if u == v:
            return self_tuple(u)
        return TransmissionTuple(self.thr[u][v], u, v)

    def symmetric_weight(self, u: NodeId, v: NodeId) -> TransmissionTuple:
        """Canonical undirected weight: the smaller of the two directed tuples."""
        return min(self.tuple(u, v), self.tuple(v, u))

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.threshold, self.threshold.T))

    def has_uniform_exponent(self, rtol: float = 1e-12) -> bool:
        n = self.n
        if n < 2:
            return True
        g = self.gamma[~np.eye(n, dtype=bool)]
        return bool(np.allclose(g, g[0], rtol=rtol, atol=0.0))

    def __eq__(self, other):
        if not isinstance(other, LinkTable):
            return NotImplemented
        return (
            np.array_equal(self.threshold, other.threshold)
            and np.array_equal(self.gamma, other.gamma)
            and np.array_equal(self.distance, other.distance)
        )

    def __repr__(self):
        return f"LinkTable(n={self.n})"


@dataclass(frozen=True)
class DirectedGraph:
    nodes: tuple[NodeId, ...]
    edges: frozenset[tuple[NodeId, NodeId]]

    def __post_init__(self):
        nodes = tuple(self.nodes)
        edges = frozenset((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        vs = set(nodes)
        if len(vs) != len(nodes):
            raise ValueError("duplicate node ids")
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if u not in vs or v not in vs:
                raise ValueError(f"edge {(u, v)} references a missing vertex")

    @classmethod
    def complete(cls, nodes: Iterable[NodeId]) -> DirectedGraph:
        nodes = tuple(nodes)
        return cls(nodes, frozenset((u, v) for u in nodes for v in nodes if u != v))

    @cached_property
    def succ(self) -> dict[NodeId, frozenset[NodeId]]:
        out: dict[NodeId, set] = {u: set() for u in self.nodes}
        for u, v in self.edges:
            out[u].add(v)
        return {u: frozenset(s) for u, s in out.items()}

    @cached_property
    def pred(self) -> dict[NodeId, frozenset[NodeId]]:
        inc: dict[NodeId, set] = {u: set() for u in self.nodes}
        for u, v in self.edges:
            inc[v].add(u)
        return {u: frozenset(s) for u, s in inc.items()}

    @cached_property
    def neighbors(self) -> dict[NodeId, frozenset[NodeId]]:
        """Undirected adjacency (successors plus predecessors)."""
        return {u: self.succ[u] | self.pred[u] for u in self.nodes}

    def has_edge(self, u: NodeId, v: NodeId) -> bool:
        return (u, v) in self.edges

    def is_symmetric(self) -> bool:
        return all((v, u) in self.edges for u, v in self.edges)

    def undirected_edges(self) -> set[tuple[NodeId, NodeId]]:
        return {(min(u, v), max(u, v)) for u, v in self.edges}

    def degree(self, u: NodeId) -> int:
        return len(self.succ[u])

    def max_degree(self) -> int:
        return max((len(s) for s in self.succ.values()), default=0)

    def __len__(self):
        return len(self.nodes)


class TupleLists(NamedTuple):
    out_list: tuple[TransmissionTuple, ...]
    in_list: tuple[TransmissionTuple, ...]


@dataclass(frozen=True)
class Network:
    nodes: tuple[Node, ...]
    links: LinkTable
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        ids = [nd.id for nd in self.nodes]
        if ids != list(range(len(ids))):
            raise ValueError("node ids must be dense 0..n-1 in order")
        if self.links.n != len(self.nodes):
            raise ValueError("link table size does not match node count")

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def ids(self) -> tuple[NodeId, ...]:
        return tuple(range(self.n))

    @cached_property
    def positions(self) -> np.ndarray:
        return np.array([[nd.x, nd.y] for nd in self.nodes], dtype=float)

    @cached_property
    def gmax(self) -> DirectedGraph:
        return build_gmax(self.nodes, self.links)


def build_gmax(nodes: Iterable[Node], links: LinkTable) -> DirectedGraph:
    """Edge (u, v) iff each endpoint reaches the other at its own maximum power."""
    nodes = tuple(nodes)
    ids = tuple(nd.id for nd in nodes)
    pmax = np.array([nd.max_power for nd in nodes], dtype=float)
    thr = links.threshold[np.ix_(ids, ids)]
    reach = thr <= pmax[:, None]
    mutual = reach & reach.T
    np.fill_diagonal(mutual, False)
    us, vs = np.nonzero(mutual)
    return DirectedGraph(ids, frozenset(zip((ids[i] for i in us), (ids[j] for j in vs))))


def _symmetric_weights(links: LinkTable) -> np.ndarray:
    return np.maximum(links.threshold, links.threshold.T)


def compute_ph(nodes: Iterable[Node], links: LinkTable) -> float:
    """Smallest common power at which the bidirectional graph is connected.

    Equal to the bottleneck edge of a minimum spanning tree over
    ``max(P_min(u, v), P_min(v, u))``; computed with a dense Prim sweep.
    Node max powers are ignored.
    """
    n = len(tuple(nodes))
    if n < 2:
        return 0.0
    w = _symmetric_weights(links)
    if not np.all(np.isfinite(w)):
        raise UnconnectableNetwork("non-finite link threshold")
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = w[0].copy()
    best[0] = np.inf
    bottleneck = 0.0
    for _ in range(n - 1):
        cand = np.where(in_tree, np.inf, best)
        j = int(np.argmin(cand))
        if not np.isfinite(cand[j]):
            raise UnconnectableNetwork("graph cannot be connected at any power")
        bottleneck = max(bottleneck, float(cand[j]))
        in_tree[j] = True
        best = np.minimum(best, w[j])
    return bottleneck


def build_initial_graph(links: LinkTable, p: float) -> DirectedGraph:
    """Bidirectional graph when every node transmits at power ``p``."""
    if not p > 0:
        raise ValueError("power must be positive")
    w = _symmetric_weights(links)
    ok = w <= p
    np.fill_diagonal(ok, False)
    us, vs = np.nonzero(ok)
    return DirectedGraph(tuple(range(links.n)), frozenset(zip(us.tolist(), vs.tolist())))


def compile_tuple_lists(u: NodeId, gmax: DirectedGraph, links: LinkTable) -> TupleLists:
    if u not in gmax.succ:
        raise KeyError(f"node {u} not in graph")
    out = tuple(sorted(links.tuple(u, v) for v in gmax.succ[u]))
    inc = tuple(sorted(links.tuple(v, u) for v in gmax.pred[u]))
    return TupleLists(out, inc)


def is_connected(g: DirectedGraph) -> bool:
    """Single component over the undirected adjacency (graphs here are symmetric)."""
    if len(g.nodes) <= 1:
        return True
    adj = g.neighbors
    start = g.nodes[0]
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == len(g.nodes)


# -- serialization ---------------------------------------------------------


def threshold_formula(d, gamma, d0, theta):
    return theta * (np.maximum(d, d0) / d0) ** gamma


def network_to_dict(net: Network) -> dict:
    links = net.links
    rows = []
    thr, gam = links.thr, links.gamma.tolist()
    for u in range(net.n):
        for v in range(u + 1, net.n):
            row = {
                "u": u,
                "v": v,
                "threshold_uv": thr[u][v],
                "threshold_vu": thr[v][u],
                "gamma": gam[u][v],
            }
            if gam[v][u] != gam[u][v]:
                row["gamma_vu"] = gam[v][u]
            rows.append(row)
    meta = {k: net.meta.get(k) for k in ("seed", "scale_m", "d0_m", "theta")}
    meta.update({k: v for k, v in net.meta.items() if k not in meta})
    return {
        "nodes": [
            {"id": nd.id, "x": nd.x, "y": nd.y, "max_power": nd.max_power} for nd in net.nodes
        ],
        "links": rows,
        "meta": meta,
    }


def network_from_dict(doc: dict, rtol: float = 1e-9) -> Network:
    try:
        raw_nodes = sorted(doc["nodes"], key=lambda r: r["id"])
        nodes = tuple(
            Node(int(r["id"]), float(r["x"]), float(r["y"]), float(r["max_power"]))
            for r in raw_nodes
        )
        meta = dict(doc.get("meta", {}))
        d0 = float(meta["d0_m"])
        theta = float(meta["theta"])
    except (KeyError, TypeError, ValueError) as exc:
        raise NetworkFormatError(f"malformed network document: {exc}") from exc
    n = len(nodes)
    if [nd.id for nd in nodes] != list(range(n)):
        raise NetworkFormatError("node ids must be 0..n-1")
    pos = np.array([[nd.x, nd.y] for nd in nodes], dtype=float)
    dist = np.hypot(pos[:, None, 0] - pos[None, :, 0], pos[:, None, 1] - pos[None, :, 1])
    thr = np.zeros((n, n))
    gam = np.zeros((n, n))
    seen = np.eye(n, dtype=bool)
    for r in doc["links"]:
        u, v = int(r["u"]), int(r["v"])
        g_uv = float(r["gamma"])
        g_vu = float(r.get("gamma_vu", g_uv))
        thr[u, v], thr[v, u] = float(r["threshold_uv"]), float(r["threshold_vu"])
        gam[u, v], gam[v, u] = g_uv, g_vu
        seen[u, v] = seen[v, u] = True
    if not seen.all():
        raise NetworkFormatError("link list does not cover every node pair")
    expected = threshold_formula(dist, gam, d0, theta)
    off = ~np.eye(n, dtype=bool)
    if not np.allclose(thr[off], expected[off], rtol=rtol, atol=0.0):
        bad = np.argwhere(~np.isclose(thr, expected, rtol=rtol, atol=0.0) & off)[0]
        raise NetworkFormatError(
            f"stored threshold for pair {tuple(bad.tolist())} disagrees with positions"
        )
    return Network(nodes, LinkTable(thr, gam, dist), meta)


def save_network(net: Network, path) -> None:
    Path(path).write_text(json.dumps(network_to_dict(net), indent=1))


def load_network(path) -> Network:
    return network_from_dict(json.loads(Path(path).read_text()))


def angle(p, q) -> float:
    """Azimuth of q as seen from p, in [0, 2*pi)."""
    a = math.atan2(q[1] - p[1], q[0] - p[0])
    return a % (2 * math.pi)
