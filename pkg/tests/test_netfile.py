from fractions import Fraction

import pytest

from thermalnet.exceptions import ParameterError, ParseError
from thermalnet.generate import generate, random_walk
from thermalnet.netfile import dump, load, parse, render

MINIMAL = """\
source s
sink t
param dtu 1
node a theta0 0 thetac 1
edge s a
edge a t
"""


def test_minimal_file():
    net = parse(MINIMAL)
    assert net.internal == ("a",) and net.capacity("a") == 1


def test_fractional_capacity():
    net = parse(MINIMAL.replace("theta0 0 thetac 1", "theta0 1/2 thetac 7/2"))
    assert net.capacity("a") == 3


def test_comments_and_blank_lines():
    text = "# header\n\n" + MINIMAL.replace("edge s a", "edge s a   # in")
    assert parse(text) == parse(MINIMAL)


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        (MINIMAL + "vertex b\n", 7, "unknown directive"),
        (MINIMAL + "node a theta0 0 thetac 2\n", 7, "duplicate node"),
        (MINIMAL + "edge a t\n", 7, "duplicate edge"),
        (MINIMAL + "edge a z\n", 7, "not a declared node"),
        (MINIMAL.replace("thetac 1", "thetac 0.5"), 4, "rational"),
        (MINIMAL.replace("thetac 1", "thetac -1"), 4, "below base"),
        (MINIMAL + "param dtu 2\n", 7, "set twice"),
        (MINIMAL + "source x\n", 7, "declared twice"),
    ],
)
def test_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert err.value.line == line
    assert fragment in str(err.value)


@pytest.mark.parametrize("drop", ["param dtu 1\n", "source s\n", "sink t\n"])
def test_missing_declarations(drop):
    with pytest.raises(ParseError, match="missing"):
        parse(MINIMAL.replace(drop, ""))


def test_current_temperature_round_trips(tmp_path):
    net = parse(MINIMAL.replace("thetac 1", "thetac 3 theta 5/2"))
    assert net.nodes["a"].theta == Fraction(5, 2)
    path = tmp_path / "n.tn"
    dump(net, path)
    assert load(path) == net


def test_fixtures_round_trip(fixtures):
    good = ["diamond.tn", "path.tn", "onset.tn", "minimal.tn"]
    for name in good:
        net = load(fixtures / name)
        assert parse(render(net)) == net
        assert render(parse(render(net))) == render(net)


def test_generator_deterministic():
    assert render(generate(42, 7)) == render(generate(42, 7))
    assert render(generate(42, 7)) != render(generate(43, 7))


def test_generator_empty_and_uniform():
    empty = generate(0, 0)
    assert empty.nodes == {} and empty.edges == (("s", "t"),)
    for seed in range(20):
        net = generate(seed, 6, uniform=True)
        assert len(set(net.base_capacities.values())) == 1


def test_generator_arguments():
    with pytest.raises(ParameterError):
        generate(0, -1)
    with pytest.raises(ParameterError):
        generate(0, 3, edge_probability=2)


def test_random_walk_is_edge_simple():
    import random

    rng = random.Random(3)
    for seed in range(30):
        net = generate(seed, 6)
        walk = random_walk(net, rng)
        assert walk[0] == "s" and walk[-1] == "t"
        edges = list(zip(walk, walk[1:]))
        assert len(set(edges)) == len(edges) and set(edges) <= set(net.edges)
