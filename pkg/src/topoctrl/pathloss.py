"""Seeded random networks under a log-distance path-loss model.

The minimum transmit power for a link of length ``d`` is
``theta * (d / d0) ** gamma``: the received power after a loss of
``10 * gamma * log10(d / d0)`` dB beyond the reference distance must meet
the receiver sensitivity ``theta``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from .errors import ConfigError, DegenerateGeometry
from .netmodel import LinkTable, Network, Node, compute_ph

UNIFORM = "uniform"
GAUSSIAN = "gaussian"
_MODE_ALIASES = {
    "uniform": UNIFORM,
    "uniform-exponent": UNIFORM,
    "gaussian": GAUSSIAN,
    "gaussian-exponent": GAUSSIAN,
}

MAX_RESAMPLE = 100
MIN_SEPARATION_M = 1e-9


@dataclass(frozen=True)
class PropagationConfig:
    mode: str = GAUSSIAN
    gamma_mean: float = 3.1
    gamma_sigma: float = 0.16
    gamma_min: float = 2.7
    gamma_max: float = 3.5
    d0: float = 1.0
    theta: float = 1.0
    scale: float = 1000.0

    def __post_init__(self):
        mode = _MODE_ALIASES.get(self.mode)
        if mode is None:
            raise ConfigError(f"unknown gamma mode {self.mode!r}")
        object.__setattr__(self, "mode", mode)
        if not self.gamma_min <= self.gamma_mean <= self.gamma_max:
            raise ConfigError("gamma bounds must satisfy min <= mean <= max")
        if self.gamma_sigma < 0:
            raise ConfigError("gamma sigma must be >= 0")
        if not self.d0 > 0:
            raise ConfigError("d0_m must be > 0")
        if not self.theta > 0:
            raise ConfigError("theta must be > 0")
        if not self.scale > self.d0:
            raise ConfigError("scale_m must exceed d0_m")

    @classmethod
    def uniform(cls, gamma: float, **kw) -> PropagationConfig:
        return cls(mode=UNIFORM, gamma_mean=gamma, gamma_sigma=0.0,
                   gamma_min=gamma, gamma_max=gamma, **kw)


@dataclass(frozen=True)
class GenConfig:
    n_nodes: int = 200
    seed: int = 0
    propagation: PropagationConfig = field(default_factory=PropagationConfig)
    symmetric_costs: bool = True

    def __post_init__(self):
        if int(self.n_nodes) != self.n_nodes or self.n_nodes < 2:
            raise ConfigError("n_nodes >= 2 required")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")

    def with_seed(self, seed: int) -> GenConfig:
        return replace(self, seed=seed)

    def to_dict(self) -> dict:
        p = self.propagation
        return {
            "n_nodes": self.n_nodes,
            "seed": self.seed,
            "scale_m": p.scale,
            "d0_m": p.d0,
            "theta": p.theta,
            "gamma": {
                "mode": p.mode,
                "mean": p.gamma_mean,
                "sigma": p.gamma_sigma,
                "min": p.gamma_min,
                "max": p.gamma_max,
            },
            "symmetric_costs": self.symmetric_costs,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> GenConfig:
        def need(d, key, where=""):
            if key not in d:
                raise ConfigError(f"missing config field {where}{key}")
            return d[key]

        g = need(doc, "gamma")
        if not isinstance(g, dict):
            raise ConfigError("config field gamma must be an object")
        try:
            prop = PropagationConfig(
                mode=str(need(g, "mode", "gamma.")),
                gamma_mean=float(need(g, "mean", "gamma.")),
                gamma_sigma=float(need(g, "sigma", "gamma.")),
                gamma_min=float(need(g, "min", "gamma.")),
                gamma_max=float(need(g, "max", "gamma.")),
                d0=float(need(doc, "d0_m")),
                theta=float(need(doc, "theta")),
                scale=float(need(doc, "scale_m")),
            )
            return cls(
                n_nodes=int(need(doc, "n_nodes")),
                seed=int(need(doc, "seed")),
                propagation=prop,
                symmetric_costs=bool(need(doc, "symmetric_costs")),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc


def load_gen_config(path) -> GenConfig:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    return GenConfig.from_dict(doc)


def _streams(seed: int):
    # independent child streams so exponent draws never shift node positions
    children = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(children[0]), np.random.default_rng(children[1])


def place_nodes(n: int, seed: int, scale: float) -> np.ndarray:
    """``n`` i.i.d. uniform points on ``[0, scale]^2``, shape (n, 2)."""
    if n < 2:
        raise ConfigError("n_nodes >= 2 required")
    rng, _ = _streams(seed)
    return _place(rng, n, scale)


def _place(rng, n, scale):
    pts = rng.uniform(0.0, scale, size=(n, 2))
    for _ in range(MAX_RESAMPLE):
        clash = _coincident(pts)
        if clash is None:
            return pts
        pts[clash] = rng.uniform(0.0, scale, size=2)
    if _coincident(pts) is not None:
        raise DegenerateGeometry(f"could not separate nodes after {MAX_RESAMPLE} resamples")
    return pts


def _coincident(pts):
    pairs = cKDTree(pts).query_pairs(MIN_SEPARATION_M, output_type="ndarray")
    return int(pairs.max()) if len(pairs) else None


def _distances(pts):
    diff = pts[:, None, :] - pts[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


def sample_exponents(rng, cfg: PropagationConfig, size: int) -> np.ndarray:
    """Draw ``size`` exponents; truncation by resampling out-of-range draws."""
    if cfg.mode == UNIFORM or cfg.gamma_sigma == 0.0:
        return np.full(size, cfg.gamma_mean)
    out = rng.normal(cfg.gamma_mean, cfg.gamma_sigma, size=size)
    bad = (out < cfg.gamma_min) | (out > cfg.gamma_max)
    while bad.any():
        out[bad] = rng.normal(cfg.gamma_mean, cfg.gamma_sigma, size=int(bad.sum()))
        bad = (out < cfg.gamma_min) | (out > cfg.gamma_max)
    return out


def sample_exponent(rng, cfg: PropagationConfig) -> float:
    return float(sample_exponents(rng, cfg, 1)[0])


def threshold_from_distance(d, gamma, cfg: PropagationConfig):
    """Minimum transmit power reaching distance ``d``; clamps to ``theta`` below ``d0``."""
    ratio = np.maximum(d, cfg.d0) / cfg.d0
    out = cfg.theta * ratio ** gamma
    return float(out) if np.ndim(out) == 0 else out


def build_network(cfg: GenConfig) -> Network:
    """Generate positions, exponents and thresholds; every ``max_power`` is P_H."""
    prop = cfg.propagation
    n = cfg.n_nodes
    pos_rng, gamma_rng = _streams(cfg.seed)
    pts = _place(pos_rng, n, prop.scale)
    dist = _distances(pts)

    gamma = np.zeros((n, n))
    if cfg.symmetric_costs:
        iu = np.triu_indices(n, k=1)
        g = sample_exponents(gamma_rng, prop, len(iu[0]))
        gamma[iu] = g
        gamma.T[iu] = g
    else:
        off = ~np.eye(n, dtype=bool)
        gamma[off] = sample_exponents(gamma_rng, prop, n * (n - 1))

    thr = threshold_from_distance(dist, gamma, prop)
    np.fill_diagonal(thr, 0.0)
    links = LinkTable(thr, gamma, dist)
    pts_l = pts.tolist()
    # max power is only needed to fix G_max = H; P_H ignores it
    probe = tuple(Node(i, pts_l[i][0], pts_l[i][1], 1.0) for i in range(n))
    p_h = compute_ph(probe, links)
    nodes = tuple(Node(i, pts_l[i][0], pts_l[i][1], p_h) for i in range(n))
    meta = {
        "seed": cfg.seed,
        "scale_m": prop.scale,
        "d0_m": prop.d0,
        "theta": prop.theta,
        "p_h": p_h,
        "gamma_mode": prop.mode,
        "symmetric_costs": cfg.symmetric_costs,
    }
    return Network(nodes, links, meta)


def truncated_normal_mean(mean: float, sigma: float, lo: float, hi: float) -> float:
    """Closed-form mean of a normal truncated to ``[lo, hi]``."""
    if sigma == 0:
        return mean
    a, b = (lo - mean) / sigma, (hi - mean) / sigma
    phi = lambda z: math.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)  # noqa: E731
    Phi = lambda z: 0.5 * (1 + math.erf(z / math.sqrt(2)))  # noqa: E731
    return mean + sigma * (phi(a) - phi(b)) / (Phi(b) - Phi(a))


__all__ = [
    "PropagationConfig",
    "GenConfig",
    "load_gen_config",
    "place_nodes",
    "sample_exponent",
    "sample_exponents",
    "threshold_from_distance",
    "build_network",
]
