"""Repairing an exhausted network with cooling packets.

A cooling packet travels an s-t walk (vertices may repeat, edges may not).
At every hot node it visits it spends ``dtd`` of its budget ``beta`` and
lowers that node by ``dtd`` (never below base); cold nodes cost nothing.
A packet whose remaining budget is below ``dtd`` when it meets a hot node
is exhausted and vanishes.

Walks are restricted to the functional network: intermediate nodes must
have base capacity of at least one.
"""
from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exceptions import (
    ConfigurationError,
    InsufficientBudgetError,
    PlanVerificationError,
    UnreachableTargetError,
)
from .flow import NodeCutSet, canonical_cut, max_flow
from .model import ThermalNetwork, cool, rational
from .oracle import ENUMERATION_BOUND, enumerate_cuts


@dataclass(frozen=True)
class Walk:
    vertices: tuple

    @property
    def edges(self) -> tuple:
        return tuple(zip(self.vertices, self.vertices[1:]))

    @property
    def internal(self) -> tuple:
        return self.vertices[1:-1]

    def is_valid(self, net: ThermalNetwork) -> bool:
        if len(self.vertices) < 2:
            return False
        if self.vertices[0] != net.source or self.vertices[-1] != net.sink:
            return False
        edges = self.edges
        return len(set(edges)) == len(edges) and set(edges) <= set(net.edges)

    def __str__(self):
        return "->".join(self.vertices)


@dataclass(frozen=True)
class WalkSet:
    walks: tuple

    @property
    def spanned(self) -> frozenset:
        return frozenset(v for w in self.walks for v in w.internal)

    def __iter__(self):
        return iter(self.walks)

    def __len__(self):
        return len(self.walks)


# -- walk construction -----------------------------------------------------


def _usable(net: ThermalNetwork, v) -> bool:
    return net.base_capacities.get(v, 0) >= 1


def _cheapest_path(net, start, goal):
    """Path start..goal with fewest hot nodes, then fewest hops, then smallest ids.

    Intermediate vertices must be usable (functional) internal nodes.
    Returns the vertex list, or None.
    """
    hot = net.hot_nodes()
    heap = [(0, 0, (start,))]
    done = set()
    while heap:
        h, hops, path = heapq.heappop(heap)
        u = path[-1]
        if u in done:
            continue
        done.add(u)
        if u == goal:
            return list(path)
        if u != start and u not in net.nodes:
            continue
        for w in net.successors[u]:
            if w in done or not (w == goal or _usable(net, w)):
                continue
            heapq.heappush(heap, (h + (w in hot and w != goal), hops + 1, path + (w,)))
    return None


def _edge_simple_walk_via(net, v, limit):
    """Edge-simple s-t walk through ``v`` with the fewest edges (iterative deepening)."""
    used = set()

    def extend(walk, seen_v, depth):
        u = walk[-1]
        if u == net.sink:
            return list(walk) if seen_v else None
        if depth == 0:
            return None
        for w in net.successors[u]:
            if (u, w) in used or not (w == net.sink or _usable(net, w)):
                continue
            used.add((u, w))
            walk.append(w)
            found = extend(walk, seen_v or w == v, depth - 1)
            walk.pop()
            used.discard((u, w))
            if found:
                return found
        return None

    for depth in range(2, limit + 1):
        found = extend([net.source], False, depth)
        if found:
            return found
    return None


def walk_via(net: ThermalNetwork, v: str) -> Walk:
    """Cheapest s->v path joined to a cheapest v->t path.

    "Cheapest" means fewest hot nodes, then fewest hops.  If the two halves
    share an edge, the shortest edge-simple walk through ``v`` is used.
    """
    if not _usable(net, v):
        raise UnreachableTargetError(v)
    head = _cheapest_path(net, net.source, v)
    tail = _cheapest_path(net, v, net.sink)
    if head is None or tail is None:
        raise UnreachableTargetError(v)
    walk = Walk(tuple(head) + tuple(tail[1:]))
    if len(set(walk.edges)) == len(walk.edges):
        return walk
    found = _edge_simple_walk_via(net, v, len(net.edges) + 1)
    if found is None:
        raise UnreachableTargetError(v)
    return Walk(tuple(found))


def spanning_walkset(net: ThermalNetwork, target) -> WalkSet:
    walks = []
    spanned = set()
    for v in sorted(target):
        if v in spanned:
            continue
        walk = walk_via(net, v)
        walks.append(walk)
        spanned.update(walk.internal)
    return WalkSet(tuple(walks))


# -- packet budgets --------------------------------------------------------


def _members(target):
    return target.members if isinstance(target, NodeCutSet) else frozenset(target)


def packets_required(net: ThermalNetwork, target) -> int:
    """Packets that bring every target node from exhaustion back to base."""
    net.params.require("dtd")
    dtu, dtd = net.params.dtu, net.params.dtd
    return sum(math.ceil(net.base_capacity(v) * dtu / dtd) for v in _members(target))


def packets_to_base(net: ThermalNetwork, v: str) -> int:
    """Cooling visits that return ``v`` from its current temperature to base."""
    node = net.nodes[v]
    return math.ceil((node.theta - node.theta0) / net.params.dtd)


def walk_cost(net: ThermalNetwork, walk: Walk) -> int:
    """Hot-node visits one packet makes along ``walk``; it needs ``cost * dtd`` budget."""
    return len(_traverse(net, walk, math.inf)[1])


def _hot_distance(net, start, reverse=False):
    """0-1 BFS: fewest hot nodes from ``start`` to every vertex, counting both ends."""
    adj = net.predecessors if reverse else net.successors
    hot = net.hot_nodes()
    dist = {start: int(start in hot)}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        if u != start and u not in net.nodes:
            continue
        for w in adj[u]:
            if not (w in (net.source, net.sink) or _usable(net, w)):
                continue
            d = dist[u] + (w in hot)
            if d < dist.get(w, math.inf):
                dist[w] = d
                if w in hot:
                    queue.append(w)
                else:
                    queue.appendleft(w)
    return dist


def hot_distance_via(net: ThermalNetwork, v: str) -> int:
    """Fewest hot nodes on any s-t walk through ``v`` (a lower bound for every such walk)."""
    head = _hot_distance(net, net.source)
    tail = _hot_distance(net, net.sink, reverse=True)
    if not _usable(net, v) or v not in head or v not in tail:
        raise UnreachableTargetError(v)
    return head[v] + tail[v] - (v in net.hot_nodes())


def beta_min_functional(net: ThermalNetwork, target) -> Fraction:
    """Budget below which no packet can complete any walk through the target."""
    net.params.require("dtd")
    members = _members(target)
    if not members:
        return Fraction(0)
    return net.params.dtd * min(hot_distance_via(net, v) for v in sorted(members))


def beta_min_maxflow(net: ThermalNetwork, target) -> Fraction:
    """Budget that lets a packet complete the cheapest walk of every target node."""
    net.params.require("dtd")
    members = _members(target)
    if not members:
        return Fraction(0)
    return net.params.dtd * max(walk_cost(net, walk_via(net, v)) for v in sorted(members))


def ample_budget(net: ThermalNetwork) -> Fraction:
    """A budget no edge-simple walk can exhaust (one cooling per edge)."""
    net.params.require("dtd")
    return net.params.dtd * max(1, len(net.edges))


# -- dispatch --------------------------------------------------------------


def _traverse(net, walk, budget):
    """Cool along ``walk``; return (updated nodes, cooled visits, completed flag)."""
    dtd = net.params.dtd
    nodes = {}
    cooled = []
    for v in walk.internal:
        node = nodes.get(v, net.nodes[v])
        if not node.is_hot:
            continue
        if budget < dtd:
            return nodes, cooled, False
        nodes[v] = cool(node, dtd)
        cooled.append(v)
        budget -= dtd
    return nodes, cooled, True


def send_packet(net: ThermalNetwork, walk: Walk, beta=None, require_completion=True):
    """Dispatch one cooling packet; returns ``(network, completed)``.

    A packet that would run out of budget before reaching the sink is not
    launched at all, unless ``require_completion`` is false, in which case
    it cools what it can and vanishes.
    """
    net.params.require("dtd")
    budget = net.params.beta if beta is None else rational(beta)
    if budget is None:
        raise ConfigurationError("missing packet parameter(s): beta")
    nodes, _, completed = _traverse(net, walk, budget)
    if require_completion and not completed:
        return net, False
    return net.replace_nodes(nodes), completed


def dispatch(net: ThermalNetwork, schedule, beta=None, require_completion=True) -> ThermalNetwork:
    """Send ``count`` packets down each ``(walk, count)`` of ``schedule`` in order."""
    for walk, count in schedule:
        for _ in range(count):
            net, _ = send_packet(net, walk, beta, require_completion)
    return net


# -- planning --------------------------------------------------------------

# Bounds for the fallback walk search.
SEARCH_WALK_CAP = 3000
SEARCH_STEP_CAP = 200_000


@dataclass(frozen=True)
class CoolingPlan:
    """A repair: packets grouped as ``(walk, count)`` runs in dispatch order."""

    target: NodeCutSet
    walk_set: WalkSet
    schedule: tuple
    total_packets: int
    beta_required: Fraction
    beta_functional: Fraction
    beta_maxflow: Fraction
    restored_flow: int
    original_flow: int
    strategy: str
    repaired: ThermalNetwork

    @property
    def packets_per_walk(self) -> dict:
        counts = {}
        for walk, count in self.schedule:
            counts[walk] = counts.get(walk, 0) + count
        return counts

    @property
    def hot_visits_required(self) -> int:
        dtd = self.repaired.params.dtd
        return int(self.beta_required / dtd) if dtd else 0


def _flow_targets(net, base_flow):
    """Cooling visits each node needs before it can carry the base max flow again."""
    dtu, dtd = net.params.dtu, net.params.dtd
    need = {}
    for v in net.internal:
        node = net.nodes[v]
        excess = node.theta - (node.thetaC - base_flow.get(v, 0) * dtu)
        need[v] = max(0, math.ceil(excess / dtd))
    return need


def _shortest_schedule(net, needy):
    walks = spanning_walkset(net, needy)
    counts = [0] * len(walks)
    for v in needy:
        first = next(i for i, w in enumerate(walks) if v in w.internal)
        counts[first] += packets_to_base(net, v)
    return [(w, c) for w, c in zip(walks, counts) if c]


def _walks_by_length(net, max_edges):
    """Edge-simple s-t walks over functional nodes, fewest edges first (bounded)."""
    found = []
    steps = 0
    used = set()

    def extend(walk, depth):
        nonlocal steps
        steps += 1
        if steps > SEARCH_STEP_CAP or len(found) >= SEARCH_WALK_CAP:
            return
        u = walk[-1]
        for w in net.successors[u]:
            if (u, w) in used:
                continue
            if w == net.sink:
                if depth == 1:
                    found.append(Walk(tuple(walk) + (w,)))
                continue
            if depth == 1 or not _usable(net, w):
                continue
            used.add((u, w))
            walk.append(w)
            extend(walk, depth - 1)
            walk.pop()
            used.discard((u, w))

    for depth in range(2, max_edges + 1):
        extend([net.source], depth)
        if steps > SEARCH_STEP_CAP or len(found) >= SEARCH_WALK_CAP:
            break
    return found


def _searched_schedule(net, needy, base_flow, budget, goal=None):
    """Greedy deficit cover: route each target's packets through walks via it.

    Every hot node carries a deficit (the cooling visits it still needs to
    admit its share of a base max flow; targets need to reach base).  Each
    packet of target ``v`` takes the affordable walk through ``v`` that
    retires the most deficit, preferring cheaper, then shorter walks.
    With ``goal`` set, extra packets on any walk are appended until the
    network carries ``goal`` again.  Returns None on failure.
    """
    dtd = net.params.dtd
    visits_left = {v: packets_to_base(net, v) for v in net.internal}
    need = _flow_targets(net, base_flow)
    for v in needy:
        need[v] = visits_left[v]
    walks = _walks_by_length(net, 2 * len(net.edges))
    for v in needy:
        cheapest = walk_via(net, v)
        if cheapest not in walks:
            walks.append(cheapest)
    schedule = []

    def score(walk):
        left = dict.fromkeys(walk.internal, 0)
        cost = gain = 0
        for u in walk.internal:
            if visits_left[u] - left[u] > 0:
                if need[u] - left[u] > 0:
                    gain += 1
                left[u] += 1
                cost += 1
        return gain, cost, left

    def pick(pool):
        best = None
        for index, walk in enumerate(pool):
            gain, cost, used = score(walk)
            if cost * dtd > budget:
                continue
            key = (-gain, cost, len(walk.vertices), index)
            if best is None or key < best[0]:
                best = (key, walk, used)
        return best

    def send(walk, used, limit):
        repeat = limit
        for u, k in used.items():
            if k and need[u] > 0:
                repeat = min(repeat, max(1, need[u] // k))
        for u, k in used.items():
            visits_left[u] = max(0, visits_left[u] - k * repeat)
            need[u] = max(0, need[u] - k * repeat)
        if schedule and schedule[-1][0] == walk:
            schedule[-1] = (walk, schedule[-1][1] + repeat)
        else:
            schedule.append((walk, repeat))
        return repeat

    for v in needy:
        remaining = packets_to_base(net, v)
        through = [w for w in walks if v in w.internal]
        while remaining:
            best = pick(through)
            if best is None:
                return None
            remaining -= send(best[1], best[2], remaining)

    if goal is not None:
        while any(need.values()):
            best = pick(walks)
            if best is None or best[0][0] == 0:
                return None
            send(best[1], best[2], math.inf)
        if max_flow(dispatch(net, schedule)).value < goal:
            return None
    return schedule


def _required_budget(net, schedule):
    worst = 0
    for walk, count in schedule:
        worst = max(worst, walk_cost(net, walk))
        net = dispatch(net, [(walk, count)])
    return net.params.dtd * worst


def plan(net: ThermalNetwork, verify: bool = True) -> CoolingPlan:
    """Plan a repair of ``net`` that restores its base-temperature max flow.

    The target is the canonical min cut of the base-temperature network and
    every hot target node receives exactly the packets that return it to
    base.  The first attempt rides each target on its cheapest walk (a node
    already covered by an earlier walk is charged to that walk).  If that
    does not restore the flow, a greedy search spreads each target's
    packets over affordable walks through it.  When even that falls short
    under the budget ``beta``, the search appends packets beyond the
    formula count (strategy ``"extended"``).  The schedule is executed on a
    copy and checked.
    """
    net.params.require("dtd", "beta")
    base = net.at_base()
    original = max_flow(base)
    target = canonical_cut(base, original)
    needy = sorted(v for v in target.members if packets_to_base(net, v) > 0)
    functional = beta_min_functional(net, needy)
    maxflow_budget = beta_min_maxflow(net, needy)
    if net.params.beta < maxflow_budget:
        raise InsufficientBudgetError(net.params.beta, maxflow_budget)

    strategy = "shortest" if needy else "empty"
    schedule = _shortest_schedule(net, needy)
    repaired = dispatch(net, schedule)
    restored = max_flow(repaired).value
    attempts = (
        ("search", None),
        ("extended", original.value),
    )
    for name, goal in attempts:
        if restored == original.value:
            break
        searched = _searched_schedule(net, needy, original.node_flow, net.params.beta, goal)
        if searched is None:
            continue
        candidate = dispatch(net, searched)
        candidate_flow = max_flow(candidate).value
        if candidate_flow > restored:
            strategy, schedule, repaired, restored = name, searched, candidate, candidate_flow

    walks = []
    for walk, _ in schedule:
        if walk not in walks:
            walks.append(walk)
    result = CoolingPlan(
        target=target,
        walk_set=WalkSet(tuple(walks)),
        schedule=tuple(schedule),
        total_packets=sum(c for _, c in schedule),
        beta_required=_required_budget(net, schedule),
        beta_functional=functional,
        beta_maxflow=maxflow_budget,
        restored_flow=restored,
        original_flow=original.value,
        strategy=strategy,
        repaired=repaired,
    )
    if verify and restored != original.value:
        raise PlanVerificationError(restored, original.value, result)
    return result


# -- verification ----------------------------------------------------------


@dataclass(frozen=True)
class DominanceCheck:
    ok: bool
    violated_cut: Optional[NodeCutSet] = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def verify_cut_dominance(repaired: ThermalNetwork, planned: CoolingPlan, bound: int = ENUMERATION_BOUND):
    """Every plan walk meets every node-cut-set, and the target is again a min cut."""
    family = enumerate_cuts(repaired, bound)
    for walk in planned.walk_set:
        visited = set(walk.internal)
        for cut in family:
            if not visited & cut.members:
                return DominanceCheck(False, cut, f"walk {walk} misses cut {cut}")
    if not planned.walk_set:
        return DominanceCheck(True)
    target_capacity = repaired.set_capacity(planned.target.members)
    smallest = min(repaired.set_capacity(c.members) for c in family)
    if smallest != target_capacity:
        worst = min(family, key=lambda c: (repaired.set_capacity(c.members), c.ids))
        return DominanceCheck(
            False,
            worst,
            f"cut {worst} has capacity {smallest} below target capacity {target_capacity}",
        )
    return DominanceCheck(True)
