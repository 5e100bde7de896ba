"""Theorem checks run against the brute-force oracles.

Each check takes a base-temperature network and returns verdict records.
A check whose premises do not hold for the instance yields a ``SKIP``
record saying why, so nothing passes vacuously without a trace.
"""
from __future__ import annotations

import csv
import hashlib
import io
import random
from dataclasses import dataclass
from fractions import Fraction

from . import cooling
from .dissipation import (
    confirm_onset,
    functional_subnetwork,
    optimal_tau,
    simulate,
    steady_rate_closed_form,
    tau_sweep,
)
from .exceptions import IndeterminateOnsetError
from .flow import canonical_cut, exhaust, max_flow
from .generate import generate, random_walk
from .netfile import format_rational, parse, render
from .oracle import (
    COOLING_BOUND,
    ENUMERATION_BOUND,
    PATHCOUNT_BOUND,
    enumerate_cuts,
    max_flow_pathcount,
    min_restoring_packets,
)

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"
FIELDS = ("theorem", "instance_digest", "expected", "observed", "verdict")
# Cut enumeration inside the dynamic and cooling checks.
SUITE_BOUND = 10
STEADY_STAGES = 10
SWEEP_STAGES = 12
SWEEP_FACTORS = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1, Fraction(3, 2), 2, 3)
ONSET_EXTRA = 20
WALK_SAMPLES = 5
PROBE_WALKS = 20


@dataclass(frozen=True)
class Record:
    theorem: str
    instance_digest: str
    expected: str
    observed: str
    verdict: str

    def row(self):
        return tuple(getattr(self, f) for f in FIELDS)


def digest(net) -> str:
    return hashlib.sha256(render(net).encode()).hexdigest()[:12]


def fmt(value) -> str:
    if isinstance(value, Fraction):
        return format_rational(value)
    return str(value)


def _verdict(ok):
    return PASS if ok else FAIL


class _Checker:
    def __init__(self, net):
        self.net = net
        self.id = digest(net)
        self.records = []

    def add(self, theorem, expected, observed, verdict=None):
        if verdict is None:
            verdict = _verdict(expected == observed)
        self.records.append(Record(theorem, self.id, fmt(expected), fmt(observed), verdict))

    def skip(self, theorem, why):
        self.records.append(Record(theorem, self.id, "-", why, SKIP))


# -- static model ----------------------------------------------------------


def check_static(c: _Checker):
    net = c.net
    n = len(net.nodes)
    value = max_flow(net).value
    if n <= ENUMERATION_BOUND:
        c.add("max_flow_min_cut", enumerate_cuts(net).minimal.capacity, value)
    else:
        c.skip("max_flow_min_cut", f"{n} nodes above bound {ENUMERATION_BOUND}")
    if n <= PATHCOUNT_BOUND:
        c.add("flow_path_packing", max_flow_pathcount(net), value)
    else:
        c.skip("flow_path_packing", f"{n} nodes above bound {PATHCOUNT_BOUND}")
    if not net.is_uniform:
        c.skip("uniform_min_cardinality", "non-uniform")
    elif n > ENUMERATION_BOUND:
        c.skip("uniform_min_cardinality", "too large")
    else:
        family = enumerate_cuts(net)
        c.add(
            "uniform_min_cardinality",
            min(len(cut) for cut in family),
            len(family.minimal),
        )
    again = parse(render(net))
    c.add("render_parse_roundtrip", "identical", "identical" if again == net else "differs")


# -- dissipation -----------------------------------------------------------


def _dynamic_premise(net):
    if net.params.omega is None or net.params.omega == 0:
        return "needs positive omega"
    if len(net.nodes) > SUITE_BOUND:
        return "too large"
    if min(net.base_capacities.values(), default=0) < 1:
        return "has a zero-capacity node"
    return None


def check_dissipation(c: _Checker):
    net = c.net
    why = _dynamic_premise(net)
    names = ("uniform_steady_identity", "tau_dominance", "steady_onset")
    if why:
        for name in names:
            c.skip(name, why)
        return
    tau = optimal_tau(net.params)

    if net.is_uniform:
        trace = simulate(net, tau, STEADY_STAGES)
        later = {s.stage_flow for s in trace.stages[1:]}
        expected = steady_rate_closed_form(net)
        ok = len(later) == 1 and trace.steady_rate == expected
        flows = "/".join(map(str, sorted(later)))
        c.add("uniform_steady_identity", expected, f"flows {flows} rate {fmt(trace.steady_rate)}", _verdict(ok))
    else:
        c.skip("uniform_steady_identity", "non-uniform")

    rates = tau_sweep(net, [tau * k for k in SWEEP_FACTORS], SWEEP_STAGES)
    best = rates[tau]
    ok = all(r <= best for r in rates.values()) and all(r == 0 for t, r in rates.items() if t < tau)
    c.add(
        "tau_dominance",
        f"max at {fmt(tau)} and 0 below",
        " ".join(f"{fmt(t)}:{fmt(r)}" for t, r in rates.items()),
        _verdict(ok),
    )

    if net.is_uniform:
        c.skip("steady_onset", "uniform")
        return
    try:
        target, bound, _, late = confirm_onset(net, ONSET_EXTRA)
    except IndeterminateOnsetError as exc:
        c.skip("steady_onset", "cardinality tie " + " ".join("{" + "|".join(k) + "}" for k in exc.cuts))
        return
    c.add(
        "steady_onset",
        f"min cut {target} from stage {bound + 1}",
        "held" if not late else f"broken at stage {late[0]}",
        _verdict(not late),
    )


# -- cooling ---------------------------------------------------------------

COOLING_CHECKS = (
    "cooling_restoration",
    "cooling_packet_formula",
    "cooling_packet_minimality",
    "cut_dominance",
    "beta_maxflow_sufficient",
    "beta_functional_necessary",
    "beta_monotone",
    "walk_cut_intersection",
)


def check_cooling(c: _Checker):
    net = c.net
    if net.params.dtd is None:
        for name in COOLING_CHECKS:
            c.skip(name, "needs dtd")
        return
    if len(net.nodes) > SUITE_BOUND:
        for name in COOLING_CHECKS:
            c.skip(name, "too large")
        return
    hot, flow = exhaust(net)
    if flow.value == 0:
        for name in COOLING_CHECKS:
            c.skip(name, "zero max flow")
        return
    target = canonical_cut(net, max_flow(net))
    ample = hot.with_params(beta=cooling.ample_budget(hot))
    planned = cooling.plan(ample, verify=False)
    expected_n = cooling.packets_required(hot, target)

    c.add("cooling_restoration", flow.value, planned.restored_flow)
    c.add("cooling_packet_formula", expected_n, planned.total_packets)
    if len(net.nodes) <= COOLING_BOUND:
        fewest = min_restoring_packets(hot, flow.value, planned.beta_required, expected_n)
        c.add(
            "cooling_packet_minimality",
            f">={expected_n}",
            "none below" if fewest is None or fewest >= expected_n else f"{fewest} suffice",
            _verdict(fewest is None or fewest >= expected_n),
        )
    else:
        c.skip("cooling_packet_minimality", f"{len(net.nodes)} nodes above bound {COOLING_BOUND}")
    dominance = cooling.verify_cut_dominance(planned.repaired, planned)
    c.add("cut_dominance", "holds", "holds" if dominance else dominance.reason)

    needy = sorted(v for v in target.members if cooling.packets_to_base(hot, v) > 0)
    tight = cooling.beta_min_maxflow(hot, needy)
    tight_plan = cooling.plan(hot.with_params(beta=tight), verify=False)
    c.add("beta_maxflow_sufficient", flow.value, tight_plan.restored_flow)

    functional = cooling.beta_min_functional(hot, needy)
    below = functional - hot.params.dtd / 2
    rng = random.Random(c.id)
    probe = list(planned.schedule)
    live = functional_subnetwork(hot)
    for _ in range(PROBE_WALKS):
        walk = random_walk(live, rng)
        if walk is not None:
            probe.append((cooling.Walk(walk), 1))
    after = max_flow(cooling.dispatch(hot, probe, beta=below)).value
    c.add("beta_functional_necessary", 0, after)

    grid = sorted({below, functional, tight, tight + hot.params.dtd, ample.params.beta})
    grid = [b for b in grid if b >= 0]
    flags = [
        max_flow(cooling.dispatch(hot, planned.schedule, beta=b)).value == flow.value for b in grid
    ]
    monotone = all(a <= b for a, b in zip(flags, flags[1:]))
    c.add(
        "beta_monotone",
        "monotone",
        " ".join(f"{fmt(b)}:{int(f)}" for b, f in zip(grid, flags)),
        _verdict(monotone),
    )

    family = enumerate_cuts(net)
    pairs = misses = 0
    for _ in range(WALK_SAMPLES):
        walk = random_walk(net, rng)
        if walk is None:
            continue
        for cut in family:
            pairs += 1
            misses += not set(walk[1:-1]) & cut.members
    c.add("walk_cut_intersection", "0 misses", f"{misses} misses in {pairs} pairs", _verdict(misses == 0))


def check_network(net) -> list:
    """Every applicable theorem check on one base-temperature network."""
    c = _Checker(net.at_base())
    check_static(c)
    check_dissipation(c)
    check_cooling(c)
    return c.records


def trial_networks(seed, trials: int):
    """The deterministic batch ``verify --seed`` runs on."""
    rng = random.Random(seed)
    for _ in range(trials):
        uniform = rng.random() < 0.5
        nodes = rng.randint(1, 8)
        caps = (1, 6) if uniform else (1, 10)
        yield generate(rng.randrange(2**32), nodes, 0.4, caps, uniform)


def run_suite(networks) -> list:
    records = []
    for net in networks:
        records.extend(check_network(net))
    return records


def failed(records) -> list:
    return [r for r in records if r.verdict == FAIL]


def to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELDS)
    for r in records:
        writer.writerow(r.row())
    return buf.getvalue()


def summary(records) -> dict:
    out = {}
    for r in records:
        counts = out.setdefault(r.theorem, {PASS: 0, FAIL: 0, SKIP: 0})
        counts[r.verdict] += 1
    return out


def to_text(records) -> str:
    lines = []
    for name, counts in summary(records).items():
        lines.append(
            f"{name:28s} pass {counts[PASS]:4d}  fail {counts[FAIL]:4d}  skip {counts[SKIP]:4d}"
        )
    bad = failed(records)
    if bad:
        lines.append("")
        lines.append("failures:")
        for r in bad:
            lines.append(f"  {r.theorem} [{r.instance_digest}] expected {r.expected}; observed {r.observed}")
    lines.append("")
    lines.append("verdict: " + ("FAIL" if bad else "PASS"))
    return "\n".join(lines) + "\n"
