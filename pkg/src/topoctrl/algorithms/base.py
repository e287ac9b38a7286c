from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..netmodel import DirectedGraph


@dataclass(frozen=True)
class Topology:
    """Edge set kept by a topology-control algorithm (always a subset of G_max)."""

    graph: DirectedGraph
    algorithm: str
    params: dict = field(default_factory=dict, compare=False)

    @property
    def edges(self):
        return self.graph.edges

    def removed_from(self, gmax: DirectedGraph) -> frozenset:
        return gmax.edges - self.graph.edges


def make_topology(gmax: DirectedGraph, edges, algorithm: str, **params) -> Topology:
    edges = frozenset(edges)
    if not edges <= gmax.edges:
        raise ValueError(f"{algorithm} produced edges outside G_max")
    return Topology(DirectedGraph(gmax.nodes, edges), algorithm, params)


def sidecar_path(csv_path) -> Path:
    return Path(csv_path).with_suffix(".json")


def save_topology(topo: Topology, path, seed=None) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["u", "v"])
        w.writerows(sorted(topo.edges))
    meta = {"algorithm": topo.algorithm, "params": topo.params, "seed": seed}
    sidecar_path(path).write_text(json.dumps(meta, indent=1, sort_keys=True))


def load_topology(path, nodes) -> Topology:
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["u", "v"]:
        raise ValueError(f"{path}: expected header 'u,v'")
    edges = frozenset((int(u), int(v)) for u, v in rows[1:])
    side = sidecar_path(path)
    meta = json.loads(side.read_text()) if side.exists() else {}
    return Topology(
        DirectedGraph(tuple(nodes), edges),
        meta.get("algorithm", "unknown"),
        meta.get("params", {}),
    )
