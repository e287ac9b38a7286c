"""Cone-based topology control, plain and with shrink-back plus pairwise edge removal.

Directions are taken from node positions; the angle-of-arrival estimation a
real deployment would need is not simulated.
"""
from __future__ import annotations

import math

from ..errors import AssumptionViolation
from ..netmodel import DirectedGraph, LinkTable, angle
from .base import Topology, make_topology

TWO_PI = 2 * math.pi
COVERAGE_EPS = 1e-9


def max_gap(angles) -> float:
    """Largest circular gap between consecutive directions (2*pi for fewer than two)."""
    if len(angles) < 2:
        return TWO_PI
    a = sorted(angles)
    gaps = [b - x for x, b in zip(a, a[1:])]
    gaps.append(TWO_PI - a[-1] + a[0])
    return max(gaps)


def coverage_measure(angles, alpha: float) -> float:
    """Angular measure of the union of arcs of half-width alpha/2 around each direction."""
    if not angles:
        return 0.0
    if alpha >= TWO_PI:
        return TWO_PI
    pieces = []
    for a in angles:
        s = (a - alpha / 2) % TWO_PI
        e = s + alpha
        if e > TWO_PI:
            pieces.append((s, TWO_PI))
            pieces.append((0.0, e - TWO_PI))
        else:
            pieces.append((s, e))
    pieces.sort()
    total = 0.0
    start, end = pieces[0]
    for s, e in pieces[1:]:
        if s <= end:
            end = max(end, e)
        else:
            total += end - start
            start, end = s, e
    return min(total + end - start, TWO_PI)


def angular_diff(a: float, b: float) -> float:
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


def _check_assumptions(nodes, links: LinkTable):
    if not links.has_uniform_exponent():
        raise AssumptionViolation("cone-based control needs a uniform path-loss exponent")
    powers = {nd.max_power for nd in nodes}
    if len(powers) > 1:
        raise AssumptionViolation("cone-based control needs equal maximum powers")


def _directions(gmax, nodes):
    pos = {nd.id: nd.position for nd in nodes}
    return {u: {v: angle(pos[u], pos[v]) for v in gmax.succ[u]} for u in gmax.nodes}


def _sorted_neighbors(u, gmax, links):
    return sorted(gmax.succ[u], key=lambda v: links.tuple(u, v))


def cone_power(u, gmax, links, dirs, alpha, pmax) -> float:
    """Smallest neighbor threshold leaving every circular gap below alpha, else pmax."""
    seen = []
    for v in _sorted_neighbors(u, gmax, links):
        seen.append(dirs[u][v])
        if max_gap(seen) < alpha:
            return links.thr[u][v]
    return pmax


def shrink_back_power(u, gmax, links, dirs, alpha, pmax) -> float:
    """Smallest threshold at which the covered angle already equals its value at pmax."""
    order = _sorted_neighbors(u, gmax, links)
    if not order:
        return pmax
    target = coverage_measure([dirs[u][v] for v in order], alpha)
    seen = []
    for v in order:
        seen.append(dirs[u][v])
        if coverage_measure(seen, alpha) >= target - COVERAGE_EPS:
            return links.thr[u][v]
    return pmax


def _cone_powers(gmax, links, nodes, dirs, alpha, shrink):
    pmax = {nd.id: nd.max_power for nd in nodes}
    powers = {}
    for u in gmax.nodes:
        p = cone_power(u, gmax, links, dirs, alpha, pmax[u])
        if shrink and max_gap(list(dirs[u].values())) >= alpha:
            p = shrink_back_power(u, gmax, links, dirs, alpha, pmax[u])
        powers[u] = p
    return powers


def run_cbtc(gmax: DirectedGraph, links: LinkTable, nodes, alpha: float = 5 * math.pi / 6) -> Topology:
    """Keep (u, v) unless neither endpoint reaches the other at its cone power."""
    nodes = tuple(nodes)
    _check_assumptions(nodes, links)
    dirs = _directions(gmax, nodes)
    p = _cone_powers(gmax, links, nodes, dirs, alpha, shrink=False)
    thr = links.thr
    kept = {(u, v) for u, v in gmax.edges if thr[u][v] <= p[u] or thr[v][u] <= p[v]}
    return make_topology(gmax, kept, "cbtc", alpha=alpha)


def pairwise_removed(u, retained, links, dirs) -> set:
    """Retained neighbors of u dropped because a cheaper retained edge lies within pi/3.

    Edges are examined in descending tuple order, so each is tested against
    all cheaper edges that are still present; this is the fixpoint.
    """
    order = sorted(retained, key=lambda v: links.tuple(u, v))
    removed = set()
    for i in range(len(order) - 1, 0, -1):
        v = order[i]
        av = dirs[u][v]
        if any(angular_diff(av, dirs[u][n]) < math.pi / 3 for n in order[:i]):
            removed.add(v)
    return removed


def run_opt_cbtc(gmax: DirectedGraph, links: LinkTable, nodes, alpha: float = 5 * math.pi / 6) -> Topology:
    """Cone-based control with shrink-back and pairwise edge removal.

    An edge is dropped only when it is dropped at both endpoints, either by
    being out of reach at the (shrunk) cone power or by pairwise removal.
    """
    nodes = tuple(nodes)
    _check_assumptions(nodes, links)
    dirs = _directions(gmax, nodes)
    p = _cone_powers(gmax, links, nodes, dirs, alpha, shrink=True)
    thr = links.thr
    retained = {u: set() for u in gmax.nodes}
    for u, v in gmax.edges:
        if thr[u][v] <= p[u] or thr[v][u] <= p[v]:
            retained[u].add(v)
    dropped = {}
    for u in gmax.nodes:
        out_of_reach = {v for v in gmax.succ[u] if thr[u][v] > p[u]}
        dropped[u] = out_of_reach | pairwise_removed(u, retained[u], links, dirs)
    kept = {(u, v) for u, v in gmax.edges if not (v in dropped[u] and u in dropped[v])}
    return make_topology(gmax, kept, "opt-cbtc", alpha=alpha)


__all__ = ["run_cbtc", "run_opt_cbtc", "max_gap", "coverage_measure", "cone_power"]
