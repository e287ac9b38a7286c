import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from topoctrl.errors import NetworkFormatError
from topoctrl.netmodel import (
    DirectedGraph,
    LinkTable,
    Node,
    TransmissionTuple,
    build_gmax,
    build_initial_graph,
    compare_tuples,
    compile_tuple_lists,
    compute_ph,
    is_connected,
    network_from_dict,
    network_to_dict,
    self_tuple,
)
from topoctrl.pathloss import GenConfig, build_network

from .conftest import network_from_costs

T = TransmissionTuple


@pytest.mark.parametrize(
    "a, b",
    [
        (T(2.0, 1, 5), T(3.0, 0, 0)),
        (T(2.0, 1, 5), T(2.0, 2, 3)),
        (T(2.0, 1, 5), T(2.0, 1, 7)),
    ],
)
def test_tuple_order_examples(a, b):
    assert compare_tuples(a, b) == -1
    assert compare_tuples(b, a) == 1


def test_self_tuple_is_below_every_link():
    assert self_tuple(9) < T(1e-300, 0, 1)
    assert compare_tuples(self_tuple(3), self_tuple(3)) == 0


tuples = st.builds(
    T,
    st.floats(min_value=0.5, max_value=4.0).map(lambda x: round(x, 1)),
    st.integers(0, 4),
    st.integers(0, 4),
)


@given(tuples, tuples, tuples)
def test_tuple_order_is_strict_total(a, b, c):
    ab, ba = compare_tuples(a, b), compare_tuples(b, a)
    assert ab == -ba
    assert (ab == 0) == (tuple(a) == tuple(b))
    if compare_tuples(a, b) < 0 and compare_tuples(b, c) < 0:
        assert compare_tuples(a, c) < 0


def _two_nodes(thr_uv, thr_vu, pu, pv):
    links = LinkTable([[0, thr_uv], [thr_vu, 0]], np.full((2, 2), 3.0), [[0, 1], [1, 0]])
    return (Node(0, 0, 0, pu), Node(1, 1, 0, pv)), links


def test_gmax_two_nodes_both_reach():
    nodes, links = _two_nodes(1, 1, 2, 2)
    assert build_gmax(nodes, links).edges == {(0, 1), (1, 0)}


def test_gmax_requires_bidirectional_reach():
    nodes, links = _two_nodes(1, 3, 2, 2)
    assert build_gmax(nodes, links).edges == frozenset()


def test_gmax_matches_pairwise_brute_force():
    rng = np.random.default_rng(5)
    thr = rng.uniform(1, 10, size=(5, 5))
    np.fill_diagonal(thr, 0)
    links = LinkTable(thr, np.full((5, 5), 3.0), np.ones((5, 5)))
    nodes = tuple(Node(i, 0, 0, float(p)) for i, p in enumerate(rng.uniform(3, 9, size=5)))
    expected = {
        (u, v)
        for u in range(5)
        for v in range(5)
        if u != v and thr[u, v] <= nodes[u].max_power and thr[v, u] <= nodes[v].max_power
    }
    g = build_gmax(nodes, links)
    assert g.edges == expected
    assert g.is_symmetric()


def _linear_scan_ph(links):
    w = np.maximum(links.threshold, links.threshold.T)
    n = links.n
    for p in sorted(set(w[~np.eye(n, dtype=bool)].tolist())):
        if is_connected(build_initial_graph(links, p)):
            return p
    raise AssertionError("never connected")


def test_ph_three_collinear_nodes():
    net = network_from_costs(3, {(0, 1): 1.0, (1, 2): 2.0, (0, 2): 4.0})
    assert compute_ph(net.nodes, net.links) == 2.0
    assert _linear_scan_ph(net.links) == 2.0


def test_ph_two_nodes():
    net = network_from_costs(2, {(0, 1): 7.0})
    assert compute_ph(net.nodes, net.links) == 7.0


def test_ph_uses_the_larger_direction():
    net = network_from_costs(2, {(0, 1): 2.0, (1, 0): 5.0}, symmetric=False)
    assert compute_ph(net.nodes, net.links) == 5.0


@pytest.mark.parametrize("seed", range(4))
def test_ph_matches_linear_scan_and_is_tight(seed):
    net = build_network(GenConfig(30, seed, symmetric_costs=bool(seed % 2)))
    p_h = compute_ph(net.nodes, net.links)
    assert p_h == _linear_scan_ph(net.links)
    assert is_connected(build_initial_graph(net.links, p_h))
    w = np.maximum(net.links.threshold, net.links.threshold.T)
    below = w[(w < p_h) & (w > 0)]
    assert not is_connected(build_initial_graph(net.links, float(below.max())))


def test_initial_graph_extremes():
    net = network_from_costs(4, {(0, 1): 1.0, (1, 2): 2.0, (2, 3): 3.0, (0, 3): 9.0})
    assert build_initial_graph(net.links, 0.5).edges == frozenset()
    full = build_initial_graph(net.links, float(net.links.threshold.max()))
    assert full.edges == DirectedGraph.complete(range(4)).edges


def test_gmax_equals_initial_graph_at_ph():
    net = build_network(GenConfig(40, 3))
    p_h = net.meta["p_h"]
    assert net.gmax.edges == build_initial_graph(net.links, p_h).edges


def test_tuple_lists():
    net = network_from_costs(5, {(0, 1): 1.0, (0, 2): 2.0, (0, 3): 3.0, (3, 4): 1.0})
    iso = network_from_costs(3, {(0, 1): 1.0}, max_power=1.0)
    assert compile_tuple_lists(2, iso.gmax, iso.links) == ((), ())
    lists = compile_tuple_lists(0, net.gmax, net.links)
    assert len(lists.out_list) == len(lists.in_list) == 3
    assert [t.receiver for t in lists.out_list] == [1, 2, 3]
    assert all(t.receiver == 0 for t in lists.in_list)


def test_tuple_lists_match_enumeration(gaussian_net):
    g, links = gaussian_net.gmax, gaussian_net.links
    for u in g.nodes:
        lists = compile_tuple_lists(u, g, links)
        assert {(t.sender, t.receiver) for t in lists.out_list} == {e for e in g.edges if e[0] == u}
        assert {(t.sender, t.receiver) for t in lists.in_list} == {e for e in g.edges if e[1] == u}
        assert all(t.power == links.threshold[t.sender, t.receiver] for t in lists.out_list)


def test_graph_rejects_self_loops_and_dangling_edges():
    with pytest.raises(ValueError):
        DirectedGraph((0, 1), frozenset({(0, 0)}))
    with pytest.raises(ValueError):
        DirectedGraph((0, 1), frozenset({(0, 2)}))


def test_network_json_round_trip(tmp_path):
    net = build_network(GenConfig(12, 4, symmetric_costs=False))
    doc = json.loads(json.dumps(network_to_dict(net)))
    back = network_from_dict(doc)
    assert back.links == net.links
    assert back.nodes == net.nodes
    assert set(doc["meta"]) >= {"seed", "scale_m", "d0_m", "theta"}


def test_network_json_rejects_tampered_threshold():
    doc = network_to_dict(build_network(GenConfig(6, 4)))
    doc["links"][0]["threshold_uv"] *= 1 + 1e-6
    with pytest.raises(NetworkFormatError):
        network_from_dict(doc)
