"""Per-network ratios of a cover graph against the initial graph H."""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields

import numpy as np

from .analysis import ENERGY, HOPS, AllPairs, CoverGraph, all_pairs, degree_stats
from .errors import DisconnectedCover
from .netmodel import LinkTable, is_connected


@dataclass(frozen=True)
class MetricsReport:
    avg_power_ratio: float
    avg_energy_ratio_hops: float
    avg_energy_ratio_energy: float
    avg_interference_ratio_hops: float
    avg_interference_ratio_energy: float
    avg_node_degree: float

    @classmethod
    def names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def as_dict(self) -> dict:
        return asdict(self)


def _ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    # a zero-interference baseline only occurs for an isolated edge, where both sides are 0
    with np.errstate(divide="ignore", invalid="ignore"):
        r = num / den
    both_zero = (num == 0) & (den == 0)
    r[both_zero] = 1.0
    return r


def _off_diagonal_mean(a: np.ndarray) -> float:
    n = a.shape[0]
    if n < 2:
        return float("nan")
    return float(a[~np.eye(n, dtype=bool)].mean())


class BaselinePaths:
    """All-pairs path data for H, computed once per network and reused per algorithm."""

    def __init__(self, H: CoverGraph):
        self.H = H
        self.hops = all_pairs(H, HOPS)
        if len(set(H.power)) <= 1:
            # uniform broadcast cost: the energy order is the hop order
            self.energy = self.hops
        else:
            self.energy = all_pairs(H, ENERGY)


def power_ratio(T: CoverGraph, H: CoverGraph) -> float:
    return float(np.mean(np.asarray(T.power) / np.asarray(H.power)))


def network_metrics(T: CoverGraph, H: CoverGraph | BaselinePaths, links: LinkTable | None = None) -> MetricsReport:
    """Average every per-node and per-ordered-pair ratio of ``T`` against ``H``.

    ``links`` is accepted for symmetry with the other entry points; the cover
    graphs already carry every cost the ratios need.
    """
    base = H if isinstance(H, BaselinePaths) else BaselinePaths(H)
    H = base.H
    if T.graph.nodes != H.graph.nodes:
        raise ValueError("T and H must share a vertex set")
    if not is_connected(T.graph):
        raise DisconnectedCover("cover graph is disconnected")
    if not is_connected(H.graph):
        raise DisconnectedCover("initial graph is disconnected")
    t_hops = all_pairs(T, HOPS)
    t_energy = all_pairs(T, ENERGY)
    return MetricsReport(
        avg_power_ratio=power_ratio(T, H),
        avg_energy_ratio_hops=_off_diagonal_mean(_ratio(t_hops.energy, base.hops.energy)),
        avg_energy_ratio_energy=_off_diagonal_mean(_ratio(t_energy.energy, base.energy.energy)),
        avg_interference_ratio_hops=_off_diagonal_mean(
            _ratio(t_hops.interference, base.hops.interference)
        ),
        avg_interference_ratio_energy=_off_diagonal_mean(
            _ratio(t_energy.interference, base.energy.interference)
        ),
        avg_node_degree=degree_stats(T.graph),
    )


def power_only_metrics(T: CoverGraph, H: CoverGraph) -> MetricsReport:
    """Node-level metrics only; path columns are NaN."""
    if not is_connected(T.graph):
        raise DisconnectedCover("cover graph is disconnected")
    nan = float("nan")
    return MetricsReport(power_ratio(T, H), nan, nan, nan, nan, degree_stats(T.graph))


def minreach_energy_ratio(minreach: np.ndarray, base: BaselinePaths) -> float:
    return _off_diagonal_mean(_ratio(minreach, base.energy.energy))


__all__ = [
    "AllPairs",
    "BaselinePaths",
    "MetricsReport",
    "minreach_energy_ratio",
    "network_metrics",
    "power_only_metrics",
    "power_ratio",
]
