"""Executable property suites: subset chains, connectivity, oracle equivalence, cone subset.

Each property runs on freshly generated networks (trial ``i`` uses seed
``seed ^ i``) and records the first failing seed as a witness.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algorithms import run_algorithm, run_dlss, run_drng, run_khop, run_mst, run_opt_cbtc, run_smecn, run_stc
from .analysis import cover_graph, initial_cover, min_energy_path
from .algorithms.baselines import minreach_costs
from .metrics import power_ratio
from .netmodel import DirectedGraph, LinkTable, build_initial_graph, is_connected
from .pathloss import GenConfig, PropagationConfig, build_network

MUTATIONS = ("skip-backward",)


def step_walk_exists(gmax: DirectedGraph, links: LinkTable, src, dst, k: int) -> bool:
    """Exhaustive search for a src -> dst walk of <= k hops, each hop tuple < t(src, dst)."""
    limit = links.tuple(src, dst)

    def extend(x, hops_left):
        for y in gmax.succ[x]:
            if links.tuple(x, y) < limit:
                if y == dst or (hops_left > 1 and extend(y, hops_left - 1)):
                    return True
        return False

    return extend(src, k)


def brute_force_removed(gmax: DirectedGraph, links: LinkTable, k: int = 3) -> frozenset:
    """Edges the centralized <= k-hop rule drops (forward and backward walks both exist)."""
    return frozenset(
        (u, v)
        for u, v in gmax.edges
        if step_walk_exists(gmax, links, u, v, k) and step_walk_exists(gmax, links, v, u, k)
    )


@dataclass
class PropertyResult:
    name: str
    checked: int = 0
    failed: int = 0
    witness_seed: int | None = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, ok: bool, seed: int, detail: str = ""):
        self.checked += 1
        if not ok:
            self.failed += 1
            if self.witness_seed is None:
                self.witness_seed = seed
                self.detail = detail


@dataclass
class VerifyReport:
    results: list[PropertyResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            status = "PASS" if r.ok else "FAIL"
            line = f"{status} {r.name}: {r.checked - r.failed}/{r.checked}"
            if not r.ok:
                line += f" (witness seed {r.witness_seed}: {r.detail})"
            out.append(line)
        return out


def _gen(n, seed, prop=None, symmetric=True):
    return build_network(GenConfig(n, seed, prop or PropagationConfig(), symmetric))


def check_subset_chain(net) -> list[str]:
    """Violated relations between removed-edge sets, empty when all hold."""
    g, links = net.gmax, net.links
    rem = lambda topo: g.edges - topo.edges  # noqa: E731
    stc, drng, dlss, smecn = run_stc(g, links), run_drng(g, links), run_dlss(g, links), run_smecn(g, links)
    bad = []
    if not rem(smecn) <= rem(stc):
        bad.append("removed(smecn) not within removed(stc)")
    if not rem(drng) <= rem(stc):
        bad.append("removed(drng) not within removed(stc)")
    if not rem(drng) <= rem(dlss):
        bad.append("removed(drng) not within removed(dlss)")
    khop = {k: run_khop(g, links, k) for k in range(2, 7)}
    for k in range(2, 6):
        if not khop[k + 1].edges <= khop[k].edges:
            bad.append(f"E_{k + 1} not within E_{k}")
    if khop[2].edges != drng.edges:
        bad.append("khop(2) differs from drng")
    if khop[3].edges != stc.edges:
        bad.append("khop(3) differs from stc")
    return bad


CONNECTIVITY_ALGOS = ("stc", "drng", "dlss", "smecn", "mst")


def check_connectivity(net) -> list[str]:
    bad = []
    runs = [(a, run_algorithm(a, net)) for a in CONNECTIVITY_ALGOS]
    runs += [(f"khop-{k}", run_khop(net.gmax, net.links, k)) for k in range(2, 7)]
    for name, topo in runs:
        if not is_connected(cover_graph(topo, net.gmax, net.links).graph):
            bad.append(f"{name} cover graph disconnected")
    return bad


def check_oracle(net, mutation=None) -> list[str]:
    stc = run_stc(net.gmax, net.links, check_backward=mutation != "skip-backward")
    expected = brute_force_removed(net.gmax, net.links, 3)
    got = net.gmax.edges - stc.edges
    if got != expected:
        diff = sorted(got ^ expected)[:3]
        return [f"stc differs from the brute-force rule on {diff}"]
    return []


def check_cbtc_subset(net) -> list[str]:
    opt = run_opt_cbtc(net.gmax, net.links, net.nodes)
    stc = run_stc(net.gmax, net.links)
    extra = (net.gmax.edges - opt.edges) - (net.gmax.edges - stc.edges)
    return [f"opt-cbtc removes {sorted(extra)[:3]} which stc keeps"] if extra else []


def check_lower_bounds(net, pairs: int = 200, seed: int = 0) -> list[str]:
    g, links = net.gmax, net.links
    p_h = net.meta["p_h"]
    H = initial_cover(build_initial_graph(links, p_h), p_h)
    covers = {a: cover_graph(run_algorithm(a, net), g, links) for a in CONNECTIVITY_ALGOS}
    bad = []
    mst_ratio = power_ratio(covers["mst"], H)
    for a, T in covers.items():
        if power_ratio(T, H) < mst_ratio:
            bad.append(f"{a} power ratio below mst")
    rng = random.Random(seed)
    sample = [tuple(rng.sample(range(net.n), 2)) for _ in range(pairs)]
    reach = {}
    for s, t in sample:
        if s not in reach:
            reach[s] = minreach_costs(g, links, s)
        for a, T in covers.items():
            if min_energy_path(T, s, t).energy < reach[s][t] * (1 - 1e-12):
                bad.append(f"{a} path {s}->{t} cheaper than minreach")
    return bad


def run_verify(trials: int = 20, seed: int = 0, mutation: str | None = None,
               n_nodes: int = 60, oracle_nodes: int = 30, cbtc_nodes: int = 100) -> VerifyReport:
    if mutation is not None and mutation not in MUTATIONS:
        raise ValueError(f"unknown mutation {mutation!r}")
    props = {
        name: PropertyResult(name)
        for name in ("subset-chain", "connectivity", "oracle-equivalence", "cbtc-subset", "lower-bounds")
    }
    for i in range(trials):
        s = seed ^ i
        net = _gen(n_nodes, s)
        bad = check_subset_chain(net)
        props["subset-chain"].record(not bad, s, "; ".join(bad))
        bad = check_connectivity(net)
        props["connectivity"].record(not bad, s, "; ".join(bad))
        bad = check_lower_bounds(net, seed=s)
        props["lower-bounds"].record(not bad, s, "; ".join(bad[:3]))
        # alternate asymmetric and symmetric costs
        onet = _gen(oracle_nodes, s, symmetric=bool(i % 2))
        bad = check_oracle(onet, mutation)
        props["oracle-equivalence"].record(not bad, s, "; ".join(bad))
        cnet = _gen(cbtc_nodes, s, PropagationConfig.uniform(3.1))
        bad = check_cbtc_subset(cnet)
        props["cbtc-subset"].record(not bad, s, "; ".join(bad))
    return VerifyReport(list(props.values()))
