"""Monte-Carlo experiment presets, the trial runner and the results CSV.

Trial ``i`` of every sweep point uses the network seed ``master_seed ^ i``,
so all sweep points share geometry trial-by-trial and the table depends
only on the spec, never on worker count or completion order.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .algorithms import DEFAULT_ALPHA, run_algorithm
from .analysis import cover_graph, initial_cover
from .errors import ConfigError, TopoCtrlError, TrialError
from .metrics import BaselinePaths, MetricsReport, minreach_energy_ratio, network_metrics, power_only_metrics
from .netmodel import Network, build_initial_graph
from .pathloss import GenConfig, PropagationConfig, build_network

MINREACH = "minreach"
SWEEP_PARAMS = ("gamma", "sigma", "n_nodes", "k")

CSV_COLUMNS = [
    "experiment",
    "sweep_param",
    "sweep_value",
    "algorithm",
    "trials",
    "avg_power_ratio",
    "se_power_ratio",
    "avg_energy_ratio_hops",
    "se_energy_ratio_hops",
    "avg_energy_ratio_energy",
    "se_energy_ratio_energy",
    "avg_interference_ratio_hops",
    "se_interference_ratio_hops",
    "avg_interference_ratio_energy",
    "se_interference_ratio_energy",
    "avg_node_degree",
    "se_node_degree",
]
METRICS = MetricsReport.names()


@dataclass(frozen=True)
class ExperimentSpec:
    experiment_id: int
    sweep_param: str
    sweep_values: tuple
    trials: int
    base: GenConfig
    algorithms: tuple[str, ...]
    alpha: float = DEFAULT_ALPHA
    path_metrics: bool = True
    notes: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.sweep_values:
            raise ConfigError("sweep values must be non-empty")
        if self.sweep_param not in SWEEP_PARAMS:
            raise ConfigError(f"unknown sweep parameter {self.sweep_param!r}")

    def with_trials(self, trials: int) -> ExperimentSpec:
        return replace(self, trials=trials)

    def with_seed(self, seed: int) -> ExperimentSpec:
        return replace(self, base=self.base.with_seed(seed))

    def config_for(self, value, trial: int) -> GenConfig:
        cfg = self.base.with_seed(self.base.seed ^ trial)
        prop = cfg.propagation
        if self.sweep_param == "gamma":
            cfg = replace(cfg, propagation=PropagationConfig.uniform(
                float(value), d0=prop.d0, theta=prop.theta, scale=prop.scale))
        elif self.sweep_param == "sigma":
            cfg = replace(cfg, propagation=replace(prop, gamma_sigma=float(value)))
        elif self.sweep_param == "n_nodes":
            cfg = replace(cfg, n_nodes=int(value))
        return cfg


def _base(n=200, seed=0, prop=None):
    return GenConfig(n_nodes=n, seed=seed, propagation=prop or PropagationConfig(), symmetric_costs=True)


def experiment1(trials=100, seed=0) -> ExperimentSpec:
    """Uniform exponent swept over 1.5..3.5, including cone-based control."""
    return ExperimentSpec(
        1, "gamma", (1.5, 2.0, 2.5, 3.0, 3.5), trials,
        _base(seed=seed, prop=PropagationConfig.uniform(3.1)),
        ("stc", "opt-cbtc", "smecn", "drng", "dlss", "mst", MINREACH),
        notes={"grid": "0.5 step over the stated 1.5-3.5 range"},
    )


def experiment2(trials=100, seed=0) -> ExperimentSpec:
    """Truncated-Gaussian exponent on [2.7, 3.5], mean 3.1, sigma swept over 0..0.4."""
    return ExperimentSpec(
        2, "sigma", (0.0, 0.08, 0.16, 0.24, 0.32, 0.40), trials, _base(seed=seed),
        ("stc", "smecn", "drng", "dlss", "mst", MINREACH),
        notes={"grid": "0.08 step over the stated 0-0.4 range"},
    )


def experiment3(trials=100, seed=0) -> ExperimentSpec:
    return ExperimentSpec(
        3, "n_nodes", (100, 200, 300, 400, 500), trials, _base(seed=seed),
        ("stc", "smecn", "drng", "dlss", "mst", MINREACH),
    )


def experiment4(trials=100, seed=0) -> ExperimentSpec:
    return ExperimentSpec(4, "k", (2, 3, 4, 5, 6), trials, _base(seed=seed), ("khop",))


PRESETS = {1: experiment1, 2: experiment2, 3: experiment3, 4: experiment4}


def get_experiment(exp_id: int, trials: int = 100, seed: int = 0) -> ExperimentSpec:
    if exp_id not in PRESETS:
        raise ConfigError(f"experiment id must be one of 1-4, got {exp_id}")
    return PRESETS[exp_id](trials=trials, seed=seed)


def minreach_matrix(net: Network) -> np.ndarray:
    """All-pairs per-link minimum-energy costs on G_max."""
    g = net.gmax
    rows, cols = zip(*sorted(g.edges)) if g.edges else ((), ())
    w = net.links.threshold[list(rows), list(cols)]
    mat = csr_matrix((w, (rows, cols)), shape=(net.n, net.n))
    return dijkstra(mat, directed=True)


@dataclass(frozen=True)
class _Unit:
    spec: ExperimentSpec
    point: int
    trial: int


def evaluate_network(net: Network, algorithms, *, k=3, alpha=DEFAULT_ALPHA, path_metrics=True) -> dict:
    """Metrics for each algorithm on one network, keyed by algorithm label."""
    p_h = net.meta.get("p_h") or max(nd.max_power for nd in net.nodes)
    H = initial_cover(build_initial_graph(net.links, p_h), p_h)
    base = BaselinePaths(H) if path_metrics else None
    out = {}
    for name in algorithms:
        if name == MINREACH:
            nan = float("nan")
            ratio = minreach_energy_ratio(minreach_matrix(net), base) if path_metrics else nan
            out[name] = MetricsReport(nan, nan, ratio, nan, nan, nan)
            continue
        topo = run_algorithm(name, net, k=k, alpha=alpha)
        T = cover_graph(topo, net.gmax, net.links)
        out[name] = network_metrics(T, base) if path_metrics else power_only_metrics(T, H)
    return out


def _run_unit(unit: _Unit):
    spec = unit.spec
    value = spec.sweep_values[unit.point]
    cfg = spec.config_for(value, unit.trial)
    try:
        net = build_network(cfg)
        k = int(value) if spec.sweep_param == "k" else 3
        res = evaluate_network(net, spec.algorithms, k=k, alpha=spec.alpha,
                               path_metrics=spec.path_metrics)
    except TopoCtrlError as exc:
        raise TrialError(str(exc), cfg.seed, unit.trial) from exc
    return {name: [getattr(r, m) for m in METRICS] for name, r in res.items()}


def _mean_se(values: np.ndarray):
    n = len(values)
    if np.all(np.isnan(values)):
        return float("nan"), float("nan")
    mean = float(np.mean(values))
    se = float(np.std(values, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return mean, se


def run_trials(spec: ExperimentSpec, jobs: int = 1) -> list[dict]:
    """One row per (sweep value, algorithm) with the mean and standard error of each metric."""
    units = [_Unit(spec, p, i) for p in range(len(spec.sweep_values)) for i in range(spec.trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_unit, units, chunksize=max(1, len(units) // (4 * jobs))))
    else:
        results = [_run_unit(u) for u in units]

    rows = []
    for p, value in enumerate(spec.sweep_values):
        block = results[p * spec.trials:(p + 1) * spec.trials]
        for name in spec.algorithms:
            data = np.array([r[name] for r in block], dtype=float)
            row = {
                "experiment": spec.experiment_id,
                "sweep_param": spec.sweep_param,
                "sweep_value": value,
                "algorithm": f"khop-{value}" if name == "khop" else name,
                "trials": spec.trials,
            }
            for j, m in enumerate(METRICS):
                mean, se = _mean_se(data[:, j])
                row[m] = mean
                row["se_" + m[len("avg_"):]] = se
            rows.append(row)
    return rows


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(x)
    if isinstance(x, str):
        return x
    return f"{float(x):.6g}"


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def write_results(rows, path) -> None:
    Path(path).write_text(rows_to_csv(rows))


def read_results(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
