"""Line-oriented text format for thermal networks.

::

    # comment
    source s
    sink t
    param dtu 1
    param dtd 1/2
    node a theta0 0 thetac 3
    node b theta0 1/2 thetac 7/2 theta 2
    edge s a

``theta`` (current temperature) is optional and defaults to ``theta0``.
Rationals are integers or ``p/q``.  Directive order is free except that
every edge endpoint must be declared somewhere in the file.
"""
from __future__ import annotations

from fractions import Fraction

from .exceptions import ParseError, ThermalNetworkError
from .model import PacketParams, ThermalNetwork, ThermalNode

PARAM_NAMES = ("dtu", "dtd", "omega", "beta")


def _rational(token, lineno):
    try:
        if "." in token or "e" in token.lower():
            raise ValueError
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"expected an integer or p/q rational, got {token!r}", lineno) from None


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _parse_node(args, lineno):
    if len(args) not in (5, 7) or args[1] != "theta0" or args[3] != "thetac":
        raise ParseError("expected: node <id> theta0 <r> thetac <r> [theta <r>]", lineno)
    theta = None
    if len(args) == 7:
        if args[5] != "theta":
            raise ParseError(f"unknown node attribute {args[5]!r}", lineno)
        theta = _rational(args[6], lineno)
    theta0 = _rational(args[2], lineno)
    thetac = _rational(args[4], lineno)
    try:
        return ThermalNode(args[0], theta0, thetac, theta)
    except ThermalNetworkError as exc:
        raise ParseError(str(exc), lineno) from None


def parse(text: str) -> ThermalNetwork:
    nodes = {}
    edges = []
    edge_lines = {}
    terminals = {}
    params = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, *args = line.split()
        if word == "node":
            node = _parse_node(args, lineno)
            if node.id in nodes:
                raise ParseError(f"duplicate node {node.id!r}", lineno)
            nodes[node.id] = node
        elif word == "edge":
            if len(args) != 2:
                raise ParseError("expected: edge <from> <to>", lineno)
            edge = tuple(args)
            if edge in edge_lines:
                raise ParseError(f"duplicate edge {edge[0]}->{edge[1]}", lineno)
            edge_lines[edge] = lineno
            edges.append(edge)
        elif word in ("source", "sink"):
            if len(args) != 1:
                raise ParseError(f"expected: {word} <id>", lineno)
            if word in terminals:
                raise ParseError(f"{word} declared twice", lineno)
            terminals[word] = args[0]
        elif word == "param":
            if len(args) != 2 or args[0] not in PARAM_NAMES:
                raise ParseError("expected: param dtu|dtd|omega|beta <r>", lineno)
            if args[0] in params:
                raise ParseError(f"param {args[0]} set twice", lineno)
            params[args[0]] = _rational(args[1], lineno)
        else:
            raise ParseError(f"unknown directive {word!r}", lineno)

    for word in ("source", "sink"):
        if word not in terminals:
            raise ParseError(f"missing {word} declaration")
    if "dtu" not in params:
        raise ParseError("missing param dtu")
    known = set(nodes) | set(terminals.values())
    for edge, lineno in edge_lines.items():
        for end in edge:
            if end not in known:
                raise ParseError(f"edge endpoint {end!r} is not a declared node", lineno)
    try:
        return ThermalNetwork(
            nodes, tuple(edges), terminals["source"], terminals["sink"], PacketParams(**params)
        )
    except ThermalNetworkError as exc:
        raise ParseError(str(exc)) from None


def render(net: ThermalNetwork) -> str:
    lines = [f"source {net.source}", f"sink {net.sink}"]
    for name in PARAM_NAMES:
        value = getattr(net.params, name)
        if value is not None:
            lines.append(f"param {name} {format_rational(value)}")
    for v in net.internal:
        n = net.nodes[v]
        line = f"node {v} theta0 {format_rational(n.theta0)} thetac {format_rational(n.thetaC)}"
        if n.theta != n.theta0:
            line += f" theta {format_rational(n.theta)}"
        lines.append(line)
    lines += [f"edge {u} {v}" for u, v in net.edges]
    return "\n".join(lines) + "\n"


def load(path) -> ThermalNetwork:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def dump(net: ThermalNetwork, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render(net))
