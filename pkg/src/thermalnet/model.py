"""Thermal network domain types and the temperature to capacity translation.

Every temperature, rate and budget is a :class:`fractions.Fraction`; nothing
in the package ever touches a float.  Networks are immutable values: the
mutating operations (:func:`heat`, :func:`cool`, :meth:`ThermalNetwork.replace_nodes`)
return new objects.
"""
from __future__ import annotations

import dataclasses
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Union

from .exceptions import (
    ConfigurationError,
    NetworkStructureError,
    NodeOverflowError,
    ParameterError,
)

RationalLike = Union[int, str, Fraction]


def rational(value: RationalLike) -> Fraction:
    """Coerce ``value`` to an exact Fraction.

    Integers, Fractions and strings such as ``"7/2"`` are accepted.  Floats
    are refused because they cannot represent most decimal inputs exactly.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not temperatures")
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; pass a Fraction or 'p/q'")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParameterError(f"not a rational number: {value!r}") from exc
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def _optional(value):
    return None if value is None else rational(value)


@dataclass(frozen=True)
class ThermalNode:
    """An internal node with base, critical and current temperature."""

    id: str
    theta0: Fraction
    thetaC: Fraction
    theta: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "theta0", rational(self.theta0))
        object.__setattr__(self, "thetaC", rational(self.thetaC))
        theta = self.theta0 if self.theta is None else rational(self.theta)
        object.__setattr__(self, "theta", theta)
        if self.thetaC < self.theta0:
            raise ParameterError(
                f"node {self.id!r}: critical temperature {self.thetaC} "
                f"is below base temperature {self.theta0}"
            )
        if not self.theta0 <= theta <= self.thetaC:
            raise ParameterError(
                f"node {self.id!r}: temperature {theta} outside "
                f"[{self.theta0}, {self.thetaC}]"
            )

    @property
    def is_hot(self) -> bool:
        return self.theta > self.theta0

    def at_base(self) -> "ThermalNode":
        return dataclasses.replace(self, theta=self.theta0)


@dataclass(frozen=True)
class PacketParams:
    """Global packet parameters.

    ``dtu`` is the heating per traversal and is always required.  ``dtd``
    (cooling per cooled node), ``omega`` (dissipation per unit time) and
    ``beta`` (cooling budget of one packet) are only needed by the
    cooling and dissipation models.
    """

    dtu: Fraction
    dtd: Optional[Fraction] = None
    omega: Optional[Fraction] = None
    beta: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "dtu", rational(self.dtu))
        object.__setattr__(self, "dtd", _optional(self.dtd))
        object.__setattr__(self, "omega", _optional(self.omega))
        object.__setattr__(self, "beta", _optional(self.beta))
        if self.dtu <= 0:
            raise ParameterError(f"dtu must be positive, got {self.dtu}")
        if self.dtd is not None and self.dtd <= 0:
            raise ParameterError(f"dtd must be positive, got {self.dtd}")
        if self.omega is not None and self.omega < 0:
            raise ParameterError(f"omega must be non-negative, got {self.omega}")
        if self.beta is not None and self.beta < 0:
            raise ParameterError(f"beta must be non-negative, got {self.beta}")

    def require(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise ConfigurationError("missing packet parameter(s): " + ", ".join(missing))


def node_capacity(node: ThermalNode, dtu: RationalLike) -> int:
    """Number of heating packets ``node`` can still admit at its current temperature."""
    dtu = rational(dtu)
    if dtu <= 0:
        raise ParameterError(f"dtu must be positive, got {dtu}")
    return math.floor((node.thetaC - node.theta) / dtu)


def heat(node: ThermalNode, count: int, dtu: RationalLike) -> ThermalNode:
    """Raise the temperature of ``node`` by ``count`` packet traversals."""
    if count < 0:
        raise ParameterError(f"packet count must be non-negative, got {count}")
    capacity = node_capacity(node, dtu)
    if count > capacity:
        raise NodeOverflowError(node.id, count, capacity)
    if count == 0:
        return node
    return dataclasses.replace(node, theta=node.theta + count * rational(dtu))


def cool(node: ThermalNode, amount: RationalLike) -> ThermalNode:
    """Lower the temperature of ``node`` by ``amount``, saturating at base."""
    amount = rational(amount)
    if amount < 0:
        raise ParameterError(f"cooling amount must be non-negative, got {amount}")
    theta = max(node.theta0, node.theta - amount)
    if theta == node.theta:
        return node
    return dataclasses.replace(node, theta=theta)


@dataclass(frozen=True)
class ThermalNetwork:
    """Directed graph with thermal internal nodes and uncapacitated terminals.

    ``nodes`` holds the internal nodes only.  The source and sink are plain
    identifiers: they carry no temperature and no capacity limit.
    """

    nodes: Mapping[str, ThermalNode]
    edges: tuple
    source: str
    sink: str
    params: PacketParams

    def __post_init__(self):
        nodes = dict(self.nodes)
        for key, node in nodes.items():
            if key != node.id:
                raise NetworkStructureError(f"node keyed {key!r} has id {node.id!r}")
        object.__setattr__(self, "nodes", nodes)
        edges = tuple((str(u), str(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)

        if self.source == self.sink:
            raise NetworkStructureError("source and sink must differ")
        for terminal in (self.source, self.sink):
            if terminal in nodes:
                raise NetworkStructureError(
                    f"terminal {terminal!r} cannot also be a thermal node"
                )
        known = set(nodes) | {self.source, self.sink}
        seen = set()
        for u, v in edges:
            if u not in known or v not in known:
                missing = u if u not in known else v
                raise NetworkStructureError(f"edge {u}->{v} names unknown node {missing!r}")
            if u == v:
                raise NetworkStructureError(f"self-loop on {u!r}")
            if (u, v) in seen:
                raise NetworkStructureError(f"duplicate edge {u}->{v}")
            seen.add((u, v))

    # -- structure ---------------------------------------------------------

    @cached_property
    def internal(self) -> tuple:
        """Internal node ids in sorted order."""
        return tuple(sorted(self.nodes))

    @cached_property
    def successors(self) -> dict:
        adj = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
        return {v: tuple(sorted(out)) for v, out in adj.items()}

    @cached_property
    def predecessors(self) -> dict:
        adj = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[v].append(u)
        return {v: tuple(sorted(into)) for v, into in adj.items()}

    @property
    def vertices(self) -> tuple:
        return (self.source,) + self.internal + (self.sink,)

    # -- capacities --------------------------------------------------------

    def capacity(self, node_id: str) -> int:
        return node_capacity(self.nodes[node_id], self.params.dtu)

    def capacities(self) -> dict:
        return {v: self.capacity(v) for v in self.internal}

    @cached_property
    def base_capacities(self) -> dict:
        dtu = self.params.dtu
        return {v: math.floor((n.thetaC - n.theta0) / dtu) for v, n in self.nodes.items()}

    def base_capacity(self, node_id: str) -> int:
        return self.base_capacities[node_id]

    def set_capacity(self, members: Iterable[str]) -> int:
        """Sum of current node capacities over ``members``."""
        return sum(self.capacity(v) for v in members)

    @property
    def is_uniform(self) -> bool:
        return len({self.base_capacity(v) for v in self.internal}) <= 1

    # -- derived networks --------------------------------------------------

    def replace_nodes(self, updated: Mapping[str, ThermalNode]) -> "ThermalNetwork":
        if not updated:
            return self
        nodes = dict(self.nodes)
        for key, node in updated.items():
            if key not in nodes:
                raise NetworkStructureError(f"unknown node {key!r}")
            nodes[key] = node
        return dataclasses.replace(self, nodes=nodes)

    def with_params(self, **changes) -> "ThermalNetwork":
        return dataclasses.replace(self, params=dataclasses.replace(self.params, **changes))

    def at_base(self) -> "ThermalNetwork":
        """Copy with every node back at its base temperature."""
        return dataclasses.replace(
            self, nodes={k: n.at_base() for k, n in self.nodes.items()}
        )

    def temperatures(self) -> dict:
        return {v: self.nodes[v].theta for v in self.internal}

    def hot_nodes(self) -> frozenset:
        return frozenset(v for v in self.internal if self.nodes[v].is_hot)


def make_network(nodes, edges, source="s", sink="t", **params) -> ThermalNetwork:
    """Convenience constructor.

    ``nodes`` maps id to ``(theta0, thetaC)`` or ``(theta0, thetaC, theta)``;
    remaining keyword arguments become :class:`PacketParams` fields.
    """
    built = {}
    for node_id, temps in nodes.items():
        built[node_id] = ThermalNode(node_id, *temps)
    return ThermalNetwork(built, tuple(edges), source, sink, PacketParams(**params))


def network_from_capacities(capacities, edges, dtu=1, source="s", sink="t", **params):
    """Network whose base capacities are exactly ``capacities`` (theta0 = 0)."""
    dtu = rational(dtu)
    nodes = {v: (0, c * dtu) for v, c in capacities.items()}
    return make_network(nodes, edges, source, sink, dtu=dtu, **params)
