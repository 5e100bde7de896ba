"""Static max flow on node-capacitated networks.

Internal nodes are split into an in-vertex and an out-vertex joined by an
arc carrying the node capacity; original edges become arcs with a finite
"unbounded" sentinel.  Terminals are not split.  Max flow is computed with
shortest augmenting paths, and the minimum node-cut-set is read off the
final residual graph (source side).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .exceptions import UnboundedFlowError
from .model import ThermalNetwork, ThermalNode, heat

IN = "l"
OUT = "r"
TERMINAL = "*"


@dataclass(frozen=True)
class NodeCutSet:
    members: frozenset
    capacity: int

    @property
    def ids(self) -> tuple:
        return tuple(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def __str__(self):
        return "{" + ",".join(self.ids) + "}"


@dataclass
class SplitGraph:
    """Arc-capacitated image of a network, doubling as a residual graph.

    ``capacity`` holds the original arc capacities, ``residual`` the
    residual capacities (including reverse arcs) and is what the max-flow
    routine updates in place.
    """

    source: tuple
    sink: tuple
    vertices: tuple
    capacity: dict
    sentinel: int
    internal_arcs: dict
    residual: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.residual:
            self.reset()

    def reset(self):
        res = {v: {} for v in self.vertices}
        for (u, v), cap in self.capacity.items():
            res[u][v] = res[u].get(v, 0) + cap
            res[v].setdefault(u, 0)
        self.residual = {u: dict(sorted(adj.items())) for u, adj in res.items()}

    def arc_flow(self, u, v) -> int:
        return self.capacity[(u, v)] - self.residual[u][v]

    def reachable(self) -> set:
        seen = {self.source}
        queue = deque([self.source])
        while queue:
            u = queue.popleft()
            for v, r in self.residual[u].items():
                if r > 0 and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return seen


@dataclass(frozen=True)
class FlowResult:
    value: int
    min_cut: NodeCutSet
    node_flow: dict


def in_vertex(net: ThermalNetwork, v: str) -> tuple:
    return (v, IN) if v in net.nodes else (v, TERMINAL)


def out_vertex(net: ThermalNetwork, v: str) -> tuple:
    return (v, OUT) if v in net.nodes else (v, TERMINAL)


def split(net: ThermalNetwork) -> SplitGraph:
    caps = net.capacities()
    sentinel = 1 + sum(caps.values())
    vertices = [(net.source, TERMINAL)]
    capacity = {}
    internal_arcs = {}
    for v in net.internal:
        vertices += [(v, IN), (v, OUT)]
        capacity[((v, IN), (v, OUT))] = caps[v]
        internal_arcs[v] = ((v, IN), (v, OUT))
    vertices.append((net.sink, TERMINAL))
    for u, v in net.edges:
        capacity[(out_vertex(net, u), in_vertex(net, v))] = sentinel
    return SplitGraph(
        source=(net.source, TERMINAL),
        sink=(net.sink, TERMINAL),
        vertices=tuple(vertices),
        capacity=capacity,
        sentinel=sentinel,
        internal_arcs=internal_arcs,
    )


def _augmenting_path(graph: SplitGraph):
    parent = {graph.source: None}
    queue = deque([graph.source])
    while queue:
        u = queue.popleft()
        for v, r in graph.residual[u].items():
            if r > 0 and v not in parent:
                parent[v] = u
                if v == graph.sink:
                    return parent
                queue.append(v)
    return None


def saturate(graph: SplitGraph) -> int:
    """Run Edmonds-Karp on ``graph`` in place; return the flow value."""
    total = 0
    while True:
        parent = _augmenting_path(graph)
        if parent is None:
            return total
        path = []
        v = graph.sink
        while parent[v] is not None:
            path.append((parent[v], v))
            v = parent[v]
        push = min(graph.residual[u][v] for u, v in path)
        for u, v in path:
            graph.residual[u][v] -= push
            graph.residual[v][u] += push
        total += push


def min_cut_extract(net: ThermalNetwork, state: SplitGraph) -> NodeCutSet:
    """Source-side minimum node-cut-set of a saturated split graph."""
    seen = state.reachable()
    members = frozenset(
        v for v, (vin, vout) in state.internal_arcs.items() if vin in seen and vout not in seen
    )
    return NodeCutSet(members, sum(state.capacity[state.internal_arcs[v]] for v in members))


def max_flow(net: ThermalNetwork) -> FlowResult:
    if (net.source, net.sink) in set(net.edges):
        raise UnboundedFlowError(
            f"edge {net.source}->{net.sink} bypasses every capacitated node"
        )
    graph = split(net)
    value = saturate(graph)
    node_flow = {v: graph.arc_flow(*arc) for v, arc in graph.internal_arcs.items()}
    cut = min_cut_extract(net, graph)
    assert cut.capacity == value, (cut, value)
    return FlowResult(value, cut, node_flow)


def max_flow_value(net: ThermalNetwork) -> int:
    return max_flow(net).value


def separates(net: ThermalNetwork, removed: Iterable[str]) -> bool:
    """True when deleting ``removed`` leaves no directed s-t path."""
    removed = set(removed)
    seen = {net.source}
    queue = deque([net.source])
    while queue:
        u = queue.popleft()
        for v in net.successors[u]:
            if v == net.sink:
                return False
            if v not in seen and v not in removed:
                seen.add(v)
                queue.append(v)
    return True


def minimal_core(net: ThermalNetwork, members: Iterable[str]) -> frozenset:
    """Drop members (in sorted order) while the rest still separates s from t."""
    core = set(members)
    for v in sorted(core):
        if separates(net, core - {v}):
            core.discard(v)
    return frozenset(core)


def canonical_cut(net: ThermalNetwork, flow: FlowResult = None) -> NodeCutSet:
    """Inclusion-minimal core of the source-side min cut at current temperatures."""
    flow = flow or max_flow(net)
    core = minimal_core(net, flow.min_cut.members)
    return NodeCutSet(core, net.set_capacity(core))


def unit_capacity_copy(net: ThermalNetwork) -> ThermalNetwork:
    """Same graph with every internal node at capacity exactly one."""
    dtu = net.params.dtu
    return net.replace_nodes({v: ThermalNode(v, 0, dtu) for v in net.internal})


def heat_along(net: ThermalNetwork, node_flow: dict) -> ThermalNetwork:
    """Apply the heating produced by routing ``node_flow`` packets through each node."""
    return net.replace_nodes(
        {v: heat(net.nodes[v], k, net.params.dtu) for v, k in node_flow.items() if k}
    )


def exhaust(net: ThermalNetwork):
    """Push one static max flow; return ``(heated network, FlowResult)``."""
    flow = max_flow(net)
    return heat_along(net, flow.node_flow), flow
