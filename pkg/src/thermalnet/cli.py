"""Command line front end.

Exit codes: 0 success, 1 usage, 2 input error, 3 size bound refused,
4 a theorem verdict failed.
"""
from __future__ import annotations

import argparse
import sys

from . import cooling, theorems
from .dissipation import (
    REST_MODES,
    confirm_onset,
    min_cardinality,
    optimal_tau,
    simulate,
    steady_rate_closed_form,
    tau_sweep,
)
from .exceptions import (
    IndeterminateOnsetError,
    PlanVerificationError,
    SizeBoundError,
    ThermalNetworkError,
)
from .flow import canonical_cut, exhaust, max_flow
from .model import rational
from .netfile import format_rational as fr
from .netfile import load
from .oracle import ENUMERATION_BOUND, enumerate_cuts

OK, USAGE, INPUT, SIZE, THEOREM = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rational_arg(text):
    try:
        return rational(text)
    except (ValueError, TypeError, ThermalNetworkError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _header(out, argv, net):
    out.append("command: thermalnet " + " ".join(argv))
    out.append("input: " + theorems.digest(net))


def cmd_maxflow(args, argv):
    net = load(args.file)
    res = max_flow(net)
    cut = canonical_cut(net, res)
    out = []
    _header(out, argv, net)
    out.append(f"max flow: {res.value}")
    out.append(f"min cut: {cut} capacity {cut.capacity}")
    out.append("node flow:")
    out += [f"  {v} {res.node_flow[v]}" for v in net.internal]
    return out, OK


def cmd_cuts(args, argv):
    net = load(args.file)
    family = enumerate_cuts(net, args.bound)
    out = []
    _header(out, argv, net)
    out.append(f"{len(family)} inclusion-minimal node cuts")
    out.append("capacity size members")
    out += [f"{c.capacity} {len(c)} {c}" for c in family]
    return out, OK


def cmd_simulate(args, argv):
    net = load(args.file)
    trace = simulate(net, args.tau, args.stages, args.rest)
    out = []
    _header(out, argv, net)
    out.append(f"tau {fr(trace.tau)}  rest {args.rest}")
    out.append("stage flow min_cut capacity rate")
    for s in trace.stages:
        rate = trace.stage_rate(s.stage_index)
        cut = "{" + ",".join(s.min_cut_id) + "}"
        out.append(f"{s.stage_index} {s.stage_flow} {cut} {s.min_cut_capacity} {'-' if rate is None else fr(rate)}")
    steady = "-" if trace.steady_stage_index is None else str(trace.steady_stage_index)
    out.append(f"steady from stage: {steady}")
    out.append(f"steady rate: {'-' if trace.steady_rate is None else fr(trace.steady_rate)}")
    return out, OK


def cmd_tausweep(args, argv):
    net = load(args.file)
    if args.steps < 1:
        raise UsageError("--steps must be at least 1")
    if args.steps == 1:
        taus = [args.lo]
    else:
        step = (args.hi - args.lo) / (args.steps - 1)
        taus = [args.lo + i * step for i in range(args.steps)]
    rates = tau_sweep(net, taus, args.stages, args.rest)
    best = max(rates.values())
    out = []
    _header(out, argv, net)
    if net.params.omega:
        out.append(f"tau* = {fr(optimal_tau(net.params))}")
    out.append("tau rate")
    for tau, rate in rates.items():
        out.append(f"{fr(tau)} {fr(rate)}{' *' if rate == best else ''}")
    return out, OK


def cmd_steady(args, argv):
    net = load(args.file)
    tau = optimal_tau(net.params)
    out = []
    _header(out, argv, net)
    out.append(f"tau* = {fr(tau)}")
    out.append(f"min cardinality: {min_cardinality(net)}")
    out.append(f"closed-form steady rate: {fr(steady_rate_closed_form(net))}")
    try:
        target, bound, trace, late = confirm_onset(net, args.extra)
    except IndeterminateOnsetError as exc:
        out.append(f"onset bound: indeterminate ({exc})")
        return out, OK
    out.append(f"steady cut: {target}")
    out.append(f"onset bound: {bound}")
    rate = trace.steady_rate
    out.append(f"simulated rate after {len(trace.stages)} stages: {'-' if rate is None else fr(rate)}")
    if late:
        out.append(f"confirmation: FAIL (steady cut not minimal at stage {late[0]})")
        return out, THEOREM
    out.append("confirmation: PASS")
    return out, OK


def cmd_coolplan(args, argv):
    net = load(args.file)
    if args.exhaust:
        net, _ = exhaust(net)
    if args.beta is not None:
        net = net.with_params(beta=args.beta)
    out = []
    _header(out, argv, net)
    code = OK
    try:
        p = cooling.plan(net)
    except PlanVerificationError as exc:
        p, code = exc.plan, THEOREM
    dtd = net.params.dtd
    out.append(f"target: {p.target} (base capacity {p.target.capacity})")
    out.append(f"strategy: {p.strategy}")
    out.append("walks:")
    for walk, count in p.packets_per_walk.items():
        out.append(f"  {count} x {walk}")
    out.append(f"total packets: {p.total_packets} (formula {cooling.packets_required(net, p.target)})")
    out.append(f"beta functional: {fr(p.beta_functional)} ({fr(p.beta_functional / dtd)} hot nodes)")
    out.append(f"beta max-flow: {fr(p.beta_maxflow)} ({fr(p.beta_maxflow / dtd)} hot nodes)")
    out.append(f"beta used by plan: {fr(p.beta_required)}")
    out.append(f"restored flow: {p.restored_flow} of {p.original_flow}")
    return out, code


def cmd_verify(args, argv):
    if args.file:
        net = load(args.file)
        records = theorems.check_network(net)
        source = "input: " + theorems.digest(net)
    else:
        records = theorems.run_suite(theorems.trial_networks(args.seed, args.trials))
        source = f"input: seed {args.seed} trials {args.trials}"
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(theorems.to_csv(records))
    code = THEOREM if theorems.failed(records) else OK
    if args.format == "csv":
        return theorems.to_csv(records).splitlines(), code
    out = ["command: thermalnet " + " ".join(argv), source]
    out += theorems.to_text(records).splitlines()
    return out, code


def build_parser():
    p = _Parser(prog="thermalnet", description="Thermal flow networks: static flow, dissipation, cooling packets.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("maxflow", help="static max flow and min node cut")
    s.add_argument("file")
    s.set_defaults(run=cmd_maxflow)

    s = sub.add_parser("cuts", help="enumerate every inclusion-minimal node cut")
    s.add_argument("file")
    s.add_argument("--bound", type=int, default=ENUMERATION_BOUND)
    s.set_defaults(run=cmd_cuts)

    s = sub.add_parser("simulate", help="run the dissipation model stage by stage")
    s.add_argument("file")
    s.add_argument("--tau", type=_rational_arg, required=True)
    s.add_argument("--stages", type=int, required=True)
    s.add_argument("--rest", choices=REST_MODES, default="quantized")
    s.set_defaults(run=cmd_simulate)

    s = sub.add_parser("tausweep", help="long-run rate over a range of rest times")
    s.add_argument("file")
    s.add_argument("--from", dest="lo", type=_rational_arg, required=True)
    s.add_argument("--to", dest="hi", type=_rational_arg, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--stages", type=int, required=True)
    s.add_argument("--rest", choices=REST_MODES, default="quantized")
    s.set_defaults(run=cmd_tausweep)

    s = sub.add_parser("steady", help="closed-form steady rate and onset bound, confirmed by simulation")
    s.add_argument("file")
    s.add_argument("--extra", type=int, default=20, help="stages simulated past the onset bound")
    s.set_defaults(run=cmd_steady)

    s = sub.add_parser("coolplan", help="plan cooling packets that restore the max flow")
    s.add_argument("file")
    s.add_argument("--exhaust", action="store_true", help="push one max flow before planning")
    s.add_argument("--beta", type=_rational_arg, help="override the packet budget")
    s.set_defaults(run=cmd_coolplan)

    s = sub.add_parser("verify", help="run the theorem suite on a file or a generated batch")
    s.add_argument("file", nargs="?")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--format", choices=("text", "csv"), default="text")
    s.add_argument("--csv", help="also write comma-separated records here")
    s.set_defaults(run=cmd_verify)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        lines, code = args.run(args, argv)
    except UsageError as exc:
        print(f"thermalnet: usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return USAGE
    except SizeBoundError as exc:
        print(f"thermalnet: {exc}", file=sys.stderr)
        return SIZE
    except (ThermalNetworkError, OSError) as exc:
        print(f"thermalnet: {exc}", file=sys.stderr)
        return INPUT
    sys.stdout.write("\n".join(lines) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
