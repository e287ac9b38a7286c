"""Topology-control algorithms and a name-based registry used by the CLI and experiments."""
from __future__ import annotations

import math

from ..netmodel import Network
from .base import Topology, load_topology, make_topology, save_topology
from .baselines import (
    local_spanning_tree,
    minreach_cost,
    minreach_costs,
    run_dlss,
    run_drng,
    run_mst,
    run_smecn,
)
from .cbtc import run_cbtc, run_opt_cbtc
from .stc import (
    LocalView,
    PairOfPaths,
    build_local_view,
    build_pair_of_paths,
    run_khop,
    run_stc,
    stc_local,
)

ALGORITHMS = ("stc", "khop", "drng", "dlss", "smecn", "cbtc", "opt-cbtc", "mst")
DEFAULT_ALPHA = 5 * math.pi / 6


def run_algorithm(name: str, net: Network, *, k: int = 3, alpha: float = DEFAULT_ALPHA) -> Topology:
    gmax, links = net.gmax, net.links
    if name == "stc":
        return run_stc(gmax, links)
    if name == "khop":
        return run_khop(gmax, links, k)
    if name == "drng":
        return run_drng(gmax, links)
    if name == "dlss":
        return run_dlss(gmax, links)
    if name == "smecn":
        return run_smecn(gmax, links)
    if name == "mst":
        return run_mst(gmax, links)
    if name == "cbtc":
        return run_cbtc(gmax, links, net.nodes, alpha)
    if name == "opt-cbtc":
        return run_opt_cbtc(gmax, links, net.nodes, alpha)
    raise ValueError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}")


__all__ = [
    "ALGORITHMS",
    "LocalView",
    "PairOfPaths",
    "Topology",
    "build_local_view",
    "build_pair_of_paths",
    "load_topology",
    "local_spanning_tree",
    "make_topology",
    "minreach_cost",
    "minreach_costs",
    "run_algorithm",
    "run_cbtc",
    "run_dlss",
    "run_drng",
    "run_khop",
    "run_mst",
    "run_opt_cbtc",
    "run_smecn",
    "run_stc",
    "save_topology",
    "stc_local",
]
