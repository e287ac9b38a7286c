"""Step Topology Control and its k-hop generalization.

``run_stc`` executes the per-node procedure on each node's two-hop view:
a node drops ``(u, v)`` only when it finds both a forward path u -> v and a
backward path v -> u of at most three hops in which every hop's
transmission tuple is smaller than the tuple of the direct link.
``run_khop`` applies the same rule centrally for an arbitrary hop bound.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Mapping, Optional

from ..netmodel import DirectedGraph, LinkTable, NodeId, TransmissionTuple, TupleLists, compile_tuple_lists
from .base import Topology, make_topology

Path = tuple  # sequence of TransmissionTuple

FORWARD = "forward"
BACKWARD = "backward"


def path_nodes(path: Path) -> set[NodeId]:
    out = {t.sender for t in path}
    out.update(t.receiver for t in path)
    return out


@dataclass(frozen=True)
class PairOfPaths:
    """The two <=2-hop paths with the smallest maxTuple between u and one node."""

    first: Optional[Path] = None
    second: Optional[Path] = None

    def first_without(self, v: NodeId) -> Optional[Path]:
        for p in (self.first, self.second):
            if p is not None and v not in path_nodes(p):
                return p
        return None


@dataclass(frozen=True)
class LocalView:
    """Everything node ``node`` holds after exchanging tuple lists with its neighbors."""

    node: NodeId
    own: TupleLists
    neighbors: Mapping[NodeId, TupleLists]

    def message_size(self) -> int:
        """Tuples this node broadcasts: its out-list plus its in-list."""
        return len(self.own.out_list) + len(self.own.in_list)


def build_local_view(u: NodeId, gmax: DirectedGraph, links: LinkTable) -> LocalView:
    own = compile_tuple_lists(u, gmax, links)
    nbrs = {t.receiver: compile_tuple_lists(t.receiver, gmax, links) for t in own.out_list}
    return LocalView(u, own, nbrs)


def build_pair_of_paths(view: LocalView, direction: str = FORWARD) -> dict[NodeId, PairOfPaths]:
    """Map every node within two hops to its best pair of paths.

    Forward paths run from ``view.node`` to the keyed node, backward paths
    from the keyed node to ``view.node``. One pass over all 1- and 2-hop paths.
    """
    u = view.node
    best: dict[NodeId, list] = {}

    def offer(target, path):
        key = max(path)
        slot = best.get(target)
        if slot is None:
            best[target] = [key, path, None, None]
        elif key < slot[0]:
            slot[2], slot[3] = slot[0], slot[1]
            slot[0], slot[1] = key, path
        elif slot[2] is None or key < slot[2]:
            slot[2], slot[3] = key, path

    if direction == FORWARD:
        for t_un in view.own.out_list:
            n = t_un.receiver
            offer(n, (t_un,))
            for t_nm in view.neighbors[n].out_list:
                if t_nm.receiver != u:
                    offer(t_nm.receiver, (t_un, t_nm))
    elif direction == BACKWARD:
        for t_nu in view.own.in_list:
            n = t_nu.sender
            offer(n, (t_nu,))
            nb = view.neighbors.get(n)
            if nb is None:
                continue
            for t_mn in nb.in_list:
                if t_mn.sender != u:
                    offer(t_mn.sender, (t_mn, t_nu))
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return {n: PairOfPaths(s[1], s[3]) for n, s in best.items()}


def _step_path_exists(candidates, pairs, v, limit) -> bool:
    for n in candidates:
        pp = pairs.get(n)
        if pp is None:
            continue
        p = pp.first_without(v)
        if p is not None and max(p) < limit:
            return True
    return False


def stc_local(
    view: LocalView,
    pairs_fwd: Mapping[NodeId, PairOfPaths],
    pairs_bwd: Mapping[NodeId, PairOfPaths],
    *,
    check_backward: bool = True,
) -> set[NodeId]:
    """Neighbors ``v`` for which node ``view.node`` keeps the out-edge (u, v).

    ``check_backward=False`` disables the backward search; it exists only as
    a fault-injection switch for the verifier.
    """
    out_list = sorted(view.own.out_list)
    if not out_list:
        return set()
    in_by_sender = {t.sender: t for t in view.own.in_list}
    # the cheapest neighbor can never be bypassed, so it is not examined
    kept = {out_list[0].receiver}
    for t_uv in reversed(out_list[1:]):
        v = t_uv.receiver
        v_lists = view.neighbors[v]
        fwd_set = (t.sender for t in v_lists.in_list if t < t_uv)
        no_forward = not _step_path_exists(fwd_set, pairs_fwd, v, t_uv)
        if check_backward:
            t_vu = in_by_sender[v]
            bwd_set = (t.receiver for t in v_lists.out_list if t < t_vu)
            no_backward = not _step_path_exists(bwd_set, pairs_bwd, v, t_vu)
        else:
            no_backward = False
        if no_forward or no_backward:
            kept.add(v)
    return kept


def run_stc(gmax: DirectedGraph, links: LinkTable, *, check_backward: bool = True) -> Topology:
    edges = set()
    for u in gmax.nodes:
        view = build_local_view(u, gmax, links)
        fwd = build_pair_of_paths(view, FORWARD)
        bwd = build_pair_of_paths(view, BACKWARD)
        for v in stc_local(view, fwd, bwd, check_backward=check_backward):
            edges.add((u, v))
    return make_topology(gmax, edges, "stc")


class _SortedAdjacency:
    """Per-node tuple lists sorted ascending, for threshold-filtered expansion."""

    def __init__(self, gmax: DirectedGraph, links: LinkTable):
        self.out = {u: sorted(links.tuple(u, v) for v in gmax.succ[u]) for u in gmax.nodes}
        self.inc = {u: sorted(links.tuple(v, u) for v in gmax.pred[u]) for u in gmax.nodes}

    def ball(self, start, limit, hops, forward=True):
        """Nodes joined to ``start`` by <= ``hops`` edges whose tuples are all < ``limit``."""
        lists = self.out if forward else self.inc
        seen = {start}
        frontier = [start]
        for _ in range(hops):
            nxt = []
            for x in frontier:
                lst = lists[x]
                for t in lst[: bisect_left(lst, limit)]:
                    y = t.receiver if forward else t.sender
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            if not nxt:
                break
            frontier = nxt
        return seen


def step_path_exists(adj: _SortedAdjacency, src, dst, limit, k) -> bool:
    """Is there a src -> dst walk of <= k hops with every hop tuple < limit?"""
    fwd_hops = (k + 1) // 2
    a = adj.ball(src, limit, fwd_hops, forward=True)
    if dst in a:
        return True
    b = adj.ball(dst, limit, k - fwd_hops, forward=False)
    return not a.isdisjoint(b)


def khop_removed(gmax: DirectedGraph, links: LinkTable, k: int) -> set[tuple[NodeId, NodeId]]:
    adj = _SortedAdjacency(gmax, links)
    removed = set()
    for u, v in gmax.edges:
        if u > v:
            continue
        if step_path_exists(adj, u, v, links.tuple(u, v), k) and step_path_exists(
            adj, v, u, links.tuple(v, u), k
        ):
            removed.add((u, v))
            removed.add((v, u))
    return removed


def run_khop(gmax: DirectedGraph, links: LinkTable, k: int) -> Topology:
    if int(k) != k or k < 2:
        raise ValueError("k must be an integer >= 2")
    if not gmax.is_symmetric():
        raise ValueError("G_max must be symmetric")
    removed = khop_removed(gmax, links, int(k))
    return make_topology(gmax, gmax.edges - removed, "khop", k=int(k))
