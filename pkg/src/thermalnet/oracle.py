"""Brute-force ground truth for small networks.

Nothing here reuses the flow engine: cuts are found by subset enumeration
with a private bitmask reachability test, and the second flow oracle packs
s-t paths by exhaustive search.  Both are exponential on purpose.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .exceptions import SizeBoundError, UnboundedFlowError
from .flow import NodeCutSet
from .model import ThermalNetwork

ENUMERATION_BOUND = 20
PATHCOUNT_BOUND = 8


@dataclass(frozen=True)
class CutEnumeration:
    cuts: tuple

    @property
    def minimal(self) -> NodeCutSet:
        return self.cuts[0]

    def __iter__(self):
        return iter(self.cuts)

    def __len__(self):
        return len(self.cuts)


def cut_sort_key(cut: NodeCutSet):
    return (cut.capacity, len(cut.members), cut.ids)


class _Topology:
    """Internal nodes as bit positions, adjacency as bitmasks."""

    def __init__(self, net: ThermalNetwork):
        self.ids = net.internal
        index = {v: i for i, v in enumerate(self.ids)}
        self.succ = [0] * len(self.ids)
        self.from_source = 0
        self.into_sink = 0
        self.direct = False
        for u, v in net.edges:
            if u == net.source and v == net.sink:
                self.direct = True
            elif u == net.source and v in index:
                self.from_source |= 1 << index[v]
            elif v == net.sink and u in index:
                self.into_sink |= 1 << index[u]
            elif u in index and v in index:
                self.succ[index[u]] |= 1 << index[v]

    def disconnects(self, removed: int) -> bool:
        if self.direct:
            return False
        alive = ~removed
        frontier = self.from_source & alive
        seen = frontier
        while frontier:
            if frontier & self.into_sink:
                return False
            nxt = 0
            bits = frontier
            while bits:
                low = bits & -bits
                nxt |= self.succ[low.bit_length() - 1]
                bits ^= low
            frontier = nxt & alive & ~seen
            seen |= frontier
        return True

    def members(self, mask: int) -> frozenset:
        return frozenset(v for i, v in enumerate(self.ids) if mask >> i & 1)


def _check_size(net, bound):
    if len(net.nodes) > bound:
        raise SizeBoundError(len(net.nodes), bound)


def enumerate_cuts(net: ThermalNetwork, bound: int = ENUMERATION_BOUND) -> CutEnumeration:
    """All inclusion-minimal node-cut-sets, sorted by (capacity, size, ids)."""
    _check_size(net, bound)
    topo = _Topology(net)
    if topo.direct:
        raise UnboundedFlowError("direct source-sink edge: no node-cut-set exists")
    n = len(topo.ids)
    disc = bytearray(1 << n)
    found = []
    for mask in range(1 << n):
        bits = mask
        subset_cut = False
        while bits:
            low = bits & -bits
            if disc[mask ^ low]:
                subset_cut = True
                break
            bits ^= low
        if subset_cut:
            disc[mask] = 1
        elif topo.disconnects(mask):
            disc[mask] = 1
            found.append(mask)
    caps = net.capacities()
    cuts = []
    for mask in found:
        members = topo.members(mask)
        cuts.append(NodeCutSet(members, sum(caps[v] for v in members)))
    cuts.sort(key=cut_sort_key)
    return CutEnumeration(tuple(cuts))


def min_cut_bruteforce(net: ThermalNetwork, bound: int = ENUMERATION_BOUND) -> NodeCutSet:
    return enumerate_cuts(net, bound).minimal


def is_node_cut(net: ThermalNetwork, members) -> bool:
    """Independent (bitmask) check that removing ``members`` separates s from t."""
    topo = _Topology(net)
    mask = 0
    for i, v in enumerate(topo.ids):
        if v in members:
            mask |= 1 << i
    return topo.disconnects(mask)


def simple_paths(net: ThermalNetwork):
    """Every simple s-t path as a tuple of internal node ids (terminals excluded)."""
    out = []
    path = []
    on_path = set()

    def walk(u):
        for v in net.successors[u]:
            if v == net.sink:
                out.append(tuple(path))
            elif v in net.nodes and v not in on_path:
                path.append(v)
                on_path.add(v)
                walk(v)
                path.pop()
                on_path.discard(v)

    walk(net.source)
    return out


def max_flow_pathcount(net: ThermalNetwork, bound: int = PATHCOUNT_BOUND) -> int:
    """Max number of packets routable along s-t paths within node capacities.

    Exact search over integral path loads.  Only paths with
    inclusion-minimal vertex sets are kept: a path through a superset of
    another path's nodes can always be swapped for the smaller one.
    """
    _check_size(net, bound)
    if (net.source, net.sink) in set(net.edges):
        raise UnboundedFlowError("direct source-sink edge: flow is unbounded")
    ids = net.internal
    index = {v: i for i, v in enumerate(ids)}
    sets = {frozenset(p) for p in simple_paths(net)}
    minimal = [s for s in sets if not any(o < s for o in sets)]
    paths = sorted((tuple(sorted(index[v] for v in s)) for s in minimal), key=lambda p: (len(p), p))
    caps0 = tuple(net.capacity(v) for v in ids)

    @lru_cache(maxsize=None)
    def best(i, caps):
        if i == len(paths):
            return 0
        p = paths[i]
        top = min(caps[j] for j in p) if p else 0
        result = best(i + 1, caps)
        for k in range(top, 0, -1):
            reduced = list(caps)
            for j in p:
                reduced[j] -= k
            result = max(result, k + best(i + 1, tuple(reduced)))
        return result

    return best(0, caps0)


COOLING_BOUND = 4


def edge_simple_walks(net: ThermalNetwork, usable=None):
    """Every s-t walk repeating no edge, over internal nodes in ``usable``."""
    usable = set(net.nodes) if usable is None else set(usable)
    out = []
    used = set()
    walk = [net.source]

    def extend():
        u = walk[-1]
        for v in net.successors[u]:
            if (u, v) in used:
                continue
            if v == net.sink:
                out.append(tuple(walk[1:]))
                continue
            if v not in usable:
                continue
            used.add((u, v))
            walk.append(v)
            extend()
            walk.pop()
            used.discard((u, v))

    extend()
    return out


def min_restoring_packets(net: ThermalNetwork, goal: int, beta, limit: int, bound: int = COOLING_BOUND):
    """Fewest cooling packets after which the max flow reaches ``goal``.

    Breadth-first search over how many cooling visits each node has
    received.  A packet is only launched when its budget covers every hot
    visit on its walk.  Returns None if ``limit`` packets do not suffice.
    Flow is measured with the path-packing oracle.
    """
    _check_size(net, bound)
    net.params.require("dtd")
    dtd = net.params.dtd
    ids = net.internal
    index = {v: i for i, v in enumerate(ids)}
    to_base = tuple(-(-(net.nodes[v].theta - net.nodes[v].theta0) // dtd) for v in ids)
    usable = [v for v in ids if net.base_capacity(v) >= 1]
    walks = [tuple(index[v] for v in w) for w in edge_simple_walks(net, usable)]
    hot_budget = beta // dtd

    def flow_of(state):
        nodes = {}
        for v, k in zip(ids, state):
            node = net.nodes[v]
            theta = max(node.theta0, node.theta - k * dtd)
            if theta != node.theta:
                nodes[v] = type(node)(v, node.theta0, node.thetaC, theta)
        return max_flow_pathcount(net.replace_nodes(nodes), bound)

    start = (0,) * len(ids)
    if flow_of(start) >= goal:
        return 0
    frontier = {start}
    seen = {start}
    for used in range(1, limit + 1):
        nxt = set()
        for state in frontier:
            for walk in walks:
                cur = list(state)
                cost = 0
                for i in walk:
                    if cur[i] < to_base[i]:
                        cur[i] += 1
                        cost += 1
                if cost == 0 or cost > hot_budget:
                    continue
                cur = tuple(cur)
                if cur not in seen:
                    seen.add(cur)
                    nxt.add(cur)
        for state in sorted(nxt):
            if flow_of(state) >= goal:
                return used
        if not nxt:
            return None
        frontier = nxt
    return None
