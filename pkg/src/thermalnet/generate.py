"""Deterministic random thermal networks."""
from __future__ import annotations

import random
from fractions import Fraction

from .exceptions import ParameterError, ThermalNetworkError
from .flow import separates
from .model import PacketParams, ThermalNetwork, ThermalNode

DTU_CHOICES = (Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2), Fraction(3, 2))
DTD_CHOICES = (Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2), Fraction(3, 2))
OMEGA_CHOICES = (Fraction(1), Fraction(2), Fraction(1, 2))
MAX_TRIES = 1000


def node_name(i: int) -> str:
    return f"v{i:02d}"


def generate(
    seed,
    node_count: int,
    edge_probability: float = 0.4,
    capacity_range=(0, 10),
    uniform: bool = False,
    params: PacketParams = None,
    max_tries: int = MAX_TRIES,
) -> ThermalNetwork:
    """Random directed network with at least one s-t path.

    Node capacities are drawn from ``capacity_range`` (inclusive) and
    realised exactly: ``thetaC = theta0 + c * dtu``.  With ``uniform`` every
    node gets the same capacity.  Packet parameters are drawn from small
    rational menus unless ``params`` is given.  Edges run from ``s`` or an
    internal node to an internal node or ``t``; the direct ``s -> t`` edge
    only appears when there are no internal nodes.
    """
    if node_count < 0:
        raise ParameterError("node_count must be non-negative")
    if not 0 <= edge_probability <= 1:
        raise ParameterError("edge_probability must lie in [0, 1]")
    lo, hi = capacity_range
    if lo < 0 or hi < lo:
        raise ParameterError(f"bad capacity range {capacity_range!r}")

    rng = random.Random(seed)
    if params is None:
        params = PacketParams(
            dtu=rng.choice(DTU_CHOICES),
            dtd=rng.choice(DTD_CHOICES),
            omega=rng.choice(OMEGA_CHOICES),
        )
    ids = [node_name(i) for i in range(1, node_count + 1)]
    shared = rng.randint(lo, hi)
    nodes = {}
    for v in ids:
        c = shared if uniform else rng.randint(lo, hi)
        theta0 = Fraction(rng.randint(0, 10), 2)
        nodes[v] = ThermalNode(v, theta0, theta0 + c * params.dtu)

    if not ids:
        return ThermalNetwork({}, (("s", "t"),), "s", "t", params)

    candidates = [("s", v) for v in ids]
    candidates += [(u, v) for u in ids for v in ids if u != v]
    candidates += [(u, "t") for u in ids]
    for _ in range(max_tries):
        edges = tuple(e for e in candidates if rng.random() < edge_probability)
        net = ThermalNetwork(nodes, edges, "s", "t", params)
        if not separates(net, ()):
            return net
    raise ThermalNetworkError(
        f"no connected network after {max_tries} tries "
        f"(n={node_count}, p={edge_probability})"
    )


def random_walk(net: ThermalNetwork, rng: random.Random, max_edges: int = None):
    """A random s-t walk that repeats no edge (vertices may repeat), or None.

    Randomised depth-first search with backtracking, so any walk the search
    space contains can come out.  ``max_edges`` caps the walk length.
    """
    max_edges = max_edges or 2 * len(net.edges)
    used = set()
    walk = [net.source]

    def extend():
        if len(walk) > max_edges:
            return False
        u = walk[-1]
        options = [v for v in net.successors[u] if (u, v) not in used]
        rng.shuffle(options)
        for v in options:
            if v == net.sink:
                walk.append(v)
                return True
            if v not in net.nodes:
                continue
            used.add((u, v))
            walk.append(v)
            if extend():
                return True
            walk.pop()
            used.discard((u, v))
        return False

    return tuple(walk) if extend() else None
