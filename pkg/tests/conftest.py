import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from topoctrl.netmodel import LinkTable, Network, Node
from topoctrl.pathloss import GenConfig, PropagationConfig, build_network

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ABSENT = 1e6


def network_from_costs(n, costs, *, symmetric=True, max_power=None, positions=None):
    """Hand-built network: listed pairs get the given threshold, all others are unreachable."""
    thr = np.full((n, n), ABSENT)
    for (u, v), c in costs.items():
        thr[u, v] = c
        if symmetric:
            thr[v, u] = c
    np.fill_diagonal(thr, 0.0)
    if max_power is None:
        max_power = max(costs.values())
    pos = np.zeros((n, 2)) if positions is None else np.asarray(positions, dtype=float)
    dist = np.hypot(pos[:, None, 0] - pos[None, :, 0], pos[:, None, 1] - pos[None, :, 1])
    links = LinkTable(thr, np.full((n, n), 3.0), dist)
    nodes = tuple(Node(i, float(pos[i, 0]), float(pos[i, 1]), float(max_power)) for i in range(n))
    return Network(nodes, links, {"p_h": float(max_power)})


def simple_paths(succ, s, t, max_hops=None):
    """Every simple path s -> t (as vertex tuples), by plain DFS."""
    out = []
    stack = [(s, (s,))]
    while stack:
        x, path = stack.pop()
        if x == t:
            out.append(path)
            continue
        if max_hops is not None and len(path) - 1 >= max_hops:
            continue
        for y in succ[x]:
            if y not in path:
                stack.append((y, path + (y,)))
    return out


def enumerate_step_removed(gmax, links, k):
    """Edges dropped by the <=k-hop rule, found by enumerating intermediate node sequences."""
    nodes = gmax.nodes
    edges = gmax.edges

    def exists(src, dst):
        limit = links.tuple(src, dst)
        others = [x for x in nodes if x not in (src, dst)]
        for m in range(1, k):
            for mids in itertools.permutations(others, m):
                seq = (src,) + mids + (dst,)
                if all((a, b) in edges and links.tuple(a, b) < limit for a, b in zip(seq, seq[1:])):
                    return True
        return False

    return frozenset((u, v) for u, v in edges if exists(u, v) and exists(v, u))


@pytest.fixture
def gaussian_net():
    return build_network(GenConfig(40, 7))


@pytest.fixture
def uniform_net():
    return build_network(GenConfig(40, 7, PropagationConfig.uniform(3.1)))


def small_networks(count, n=30, seed=100, symmetric=True, prop=None):
    for i in range(count):
        yield build_network(GenConfig(n, seed + i, prop or PropagationConfig(), symmetric))


ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = []


@pytest.fixture
def acceptance_log(request):
    """Record one pass/fail line per criterion; printed again in the terminal summary."""
    lines = request.config.stash[ACCEPTANCE_KEY]

    def log(name, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
        lines.append(line)
        print(line)
        return ok

    return log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
