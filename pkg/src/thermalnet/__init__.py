"""Thermal flow networks.

Node capacities come from temperature headroom, ``floor((thetaC - theta) / dtu)``.
The package covers the static max-flow model, self-cooling stages with rest
periods, and planning cooling packets that restore an exhausted network.
"""
from .cooling import (
    CoolingPlan,
    Walk,
    WalkSet,
    beta_min_functional,
    beta_min_maxflow,
    dispatch,
    packets_required,
    plan,
    send_packet,
    spanning_walkset,
    verify_cut_dominance,
    walk_via,
)
from .dissipation import (
    SimulationTrace,
    StageState,
    optimal_tau,
    run_stage,
    simulate,
    steady_onset_bound,
    steady_rate_closed_form,
    tau_sweep,
)
from .exceptions import (
    ConfigurationError,
    IndeterminateOnsetError,
    InsufficientBudgetError,
    NetworkStructureError,
    NodeOverflowError,
    ParameterError,
    ParseError,
    PlanVerificationError,
    SizeBoundError,
    ThermalNetworkError,
    UnboundedFlowError,
    UnreachableTargetError,
)
from .flow import NodeCutSet, SplitGraph, canonical_cut, exhaust, max_flow, min_cut_extract, split
from .generate import generate
from .model import (
    PacketParams,
    ThermalNetwork,
    ThermalNode,
    cool,
    heat,
    make_network,
    network_from_capacities,
    node_capacity,
)
from .netfile import dump, load, parse, render
from .oracle import enumerate_cuts, max_flow_pathcount, min_cut_bruteforce

__version__ = "0.1.0"
