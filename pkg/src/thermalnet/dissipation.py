"""Self-cooling networks: bursts of max flow separated by rest periods.

A stage pushes the full static max flow at the current temperatures,
heats every node by the packets it carried, then rests for ``tau`` time
units while every node sheds heat at rate ``omega``.

Two rest models are available.  ``"quantized"`` (the default) lets a rest
lower a node only by whole heating quanta, ``floor(tau*omega/dtu) * dtu``,
so each rest adds exactly ``floor(tau*omega/dtu)`` packets of capacity per
node (capped at base temperature) and leftover cooling is lost.
``"continuous"`` subtracts the exact amount ``tau*omega`` and lets the
sub-quantum remainder carry into later stages.  The two agree whenever
``tau*omega`` is a multiple of ``dtu``, in particular at ``tau = dtu/omega``.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exceptions import ConfigurationError, IndeterminateOnsetError, ParameterError
from .flow import canonical_cut, heat_along, max_flow, separates, unit_capacity_copy
from .model import ThermalNetwork, cool, node_capacity, rational
from .oracle import ENUMERATION_BOUND, enumerate_cuts

REST_MODES = ("quantized", "continuous")
# Cut families are tracked automatically up to this many internal nodes.
FAMILY_BOUND = 12


@dataclass(frozen=True)
class StageState:
    stage_index: int
    temperatures: dict
    stage_capacities: dict
    stage_flow: int
    residuals: dict
    min_cut_id: tuple
    min_cut_capacity: int


@dataclass(frozen=True)
class SimulationTrace:
    stages: tuple
    tau: Fraction
    steady_stage_index: Optional[int]
    steady_rate: Optional[Fraction]

    @property
    def flows(self) -> list:
        return [s.stage_flow for s in self.stages]

    def stage_rate(self, index: int) -> Optional[Fraction]:
        """Packets per unit time in stage ``index`` (1-based); stage 1 had no rest."""
        if index < 2 or self.tau == 0:
            return None
        return Fraction(self.stages[index - 1].stage_flow) / self.tau


def _check_mode(mode):
    if mode not in REST_MODES:
        raise ParameterError(f"rest mode must be one of {REST_MODES}, got {mode!r}")


def _omega(net: ThermalNetwork) -> Fraction:
    net.params.require("omega")
    return net.params.omega


def cut_id(members) -> tuple:
    return tuple(sorted(members))


def cut_family(net: ThermalNetwork, bound: int = ENUMERATION_BOUND) -> tuple:
    """Ids of every inclusion-minimal node-cut-set (structure only)."""
    return tuple(cut_id(c.members) for c in enumerate_cuts(net, bound))


def rest_amount(net: ThermalNetwork, tau, mode: str = "quantized") -> Fraction:
    _check_mode(mode)
    amount = rational(tau) * _omega(net)
    if mode == "quantized":
        dtu = net.params.dtu
        amount = math.floor(amount / dtu) * dtu
    return amount


def rest(net: ThermalNetwork, tau, mode: str = "quantized") -> ThermalNetwork:
    amount = rest_amount(net, tau, mode)
    return net.replace_nodes({v: cool(n, amount) for v, n in net.nodes.items()})


def run_stage(net: ThermalNetwork, tau, index: int = 1, family=None, mode: str = "quantized"):
    """One burst-and-rest cycle; returns ``(rested network, StageState)``."""
    tau = rational(tau)
    if tau < 0:
        raise ParameterError(f"tau must be non-negative, got {tau}")
    _omega(net)
    _check_mode(mode)

    flow = max_flow(net)
    caps = net.capacities()
    stage_caps = {}
    if family:
        stage_caps = {cid: sum(caps[v] for v in cid) for cid in family}
        assert min(stage_caps.values()) == flow.value, "flow engine disagrees with cut family"
    cut = canonical_cut(net, flow)
    state = StageState(
        stage_index=index,
        temperatures=net.temperatures(),
        stage_capacities=stage_caps,
        stage_flow=flow.value,
        residuals={cid: c - flow.value for cid, c in stage_caps.items()},
        min_cut_id=cut_id(cut.members),
        min_cut_capacity=cut.capacity,
    )
    return rest(heat_along(net, flow.node_flow), tau, mode), state


def _steady_start(stages) -> Optional[int]:
    ids = [s.min_cut_id for s in stages]
    start = len(ids) - 1
    while start > 0 and ids[start - 1] == ids[-1]:
        start -= 1
    if len(ids) > 1 and start == len(ids) - 1:
        return None
    return stages[start].stage_index


def simulate(net: ThermalNetwork, tau, horizon: int, mode: str = "quantized", family=None):
    """Run ``horizon`` stages.

    The cut family is tracked automatically on small networks, which
    cross-checks every stage flow against brute-force cut capacities.
    Pass ``family=()`` to skip that.
    """
    if horizon < 1:
        raise ParameterError("horizon must be at least 1")
    tau = rational(tau)
    if family is None and len(net.nodes) <= FAMILY_BOUND:
        family = cut_family(net)
    stages = []
    current = net
    for index in range(1, horizon + 1):
        current, state = run_stage(current, tau, index, family, mode)
        stages.append(state)
    steady = _steady_start(stages)
    rate = None
    if steady is not None and tau > 0 and horizon >= 2:
        rate = Fraction(stages[-1].stage_flow) / tau
    return SimulationTrace(tuple(stages), tau, steady, rate)


def optimal_tau(params) -> Fraction:
    """Rest length that regains exactly one packet of capacity per node."""
    if params.omega is None or params.omega == 0:
        raise ConfigurationError("optimal tau needs a positive omega")
    return params.dtu / params.omega


def functional_subnetwork(net: ThermalNetwork) -> ThermalNetwork:
    """Drop nodes whose base capacity is zero; they can never carry a packet."""
    dead = {v for v in net.internal if net.base_capacity(v) == 0}
    if not dead:
        return net
    return ThermalNetwork(
        {v: n for v, n in net.nodes.items() if v not in dead},
        tuple((u, v) for u, v in net.edges if u not in dead and v not in dead),
        net.source,
        net.sink,
        net.params,
    )


def min_cardinality(net: ThermalNetwork, bound: int = ENUMERATION_BOUND) -> int:
    """Size of the smallest node-cut-set of the functional network (0 if already cut)."""
    live = functional_subnetwork(net)
    if separates(live, ()):
        return 0
    if len(live.nodes) <= bound:
        return min(len(c.members) for c in enumerate_cuts(live, bound))
    return max_flow(unit_capacity_copy(live)).value


def steady_rate_closed_form(net: ThermalNetwork) -> Fraction:
    omega = _omega(net)
    return min_cardinality(net) * omega / net.params.dtu


def steady_cut(net: ThermalNetwork, bound: int = ENUMERATION_BOUND):
    """The minimum-cardinality cut of the functional network at base temperature.

    Cuts tied on cardinality are fine when they also tie on capacity; the
    lexicographically least is returned.  When tied cuts differ in capacity
    the cheaper one can never be overtaken, so no single steady cut exists
    and :class:`IndeterminateOnsetError` is raised.  Returns ``(cut, family)``
    with ``family`` the full sorted cut enumeration.
    """
    live = functional_subnetwork(net.at_base())
    family = enumerate_cuts(live, bound)
    smallest = min(len(c.members) for c in family)
    tied = sorted((c for c in family if len(c.members) == smallest), key=lambda c: c.ids)
    if len({c.capacity for c in tied}) > 1:
        raise IndeterminateOnsetError([c.ids for c in tied])
    return tied[0], family


def steady_onset_bound(net: ThermalNetwork, bound: int = ENUMERATION_BOUND) -> int:
    """Stage count after which the minimum-cardinality cut is a min cut for good."""
    target, family = steady_cut(net, bound)
    worst = Fraction(0)
    for cut in family:
        if cut.capacity < target.capacity:
            worst = max(
                worst,
                Fraction(target.capacity - cut.capacity, len(cut.members) - len(target.members)),
            )
    return math.ceil(worst)


def long_run_rate(trace: SimulationTrace) -> Fraction:
    """Flow over rest time for stages 2..H (stage 1 spends the initial charge)."""
    if trace.tau == 0:
        return Fraction(0)
    later = trace.flows[1:]
    if not later:
        raise ParameterError("long-run rate needs a horizon of at least 2 stages")
    return Fraction(sum(later), len(later)) / trace.tau


def tau_sweep(net: ThermalNetwork, taus, horizon: int, mode: str = "quantized") -> dict:
    family = cut_family(net) if len(net.nodes) <= FAMILY_BOUND else ()
    out = {}
    for tau in sorted({rational(t) for t in taus}):
        if tau < 0:
            raise ParameterError(f"tau must be non-negative, got {tau}")
        out[tau] = long_run_rate(simulate(net, tau, horizon, mode, family))
    return out


def target_capacity(net: ThermalNetwork, state: StageState, members) -> int:
    """Capacity ``members`` had at the start of the stage ``state`` records."""
    dtu = net.params.dtu
    return sum(
        node_capacity(dataclasses.replace(net.nodes[v], theta=state.temperatures[v]), dtu)
        for v in members
    )


def confirm_onset(net: ThermalNetwork, extra: int = 20, mode: str = "quantized"):
    """Simulate ``onset bound + extra`` stages at the optimal rest time.

    Returns ``(cut, bound, trace, late)`` where ``late`` lists the stage
    indices past the bound at which the steady cut was not a min cut.
    """
    cut, _ = steady_cut(net)
    bound = steady_onset_bound(net)
    trace = simulate(net, optimal_tau(net.params), bound + extra, mode)
    late = [
        s.stage_index
        for s in trace.stages
        if s.stage_index > bound and s.stage_flow != target_capacity(net, s, cut.members)
    ]
    return cut, bound, trace, late
