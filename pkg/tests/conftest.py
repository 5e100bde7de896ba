from pathlib import Path

import pytest

from thermalnet.model import network_from_capacities

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures():
    return FIXTURES


def path_net(ca, cb, **params):
    return network_from_capacities({"a": ca, "b": cb}, [("s", "a"), ("a", "b"), ("b", "t")], **params)


def diamond(ca=2, cb=3, **params):
    edges = [("s", "a"), ("s", "b"), ("a", "t"), ("b", "t")]
    return network_from_capacities({"a": ca, "b": cb}, edges, **params)


def fan(head, tails, **params):
    """s -> a, a -> each tail -> t; ``{a}`` and the tail set are the only cuts."""
    caps = {"a": head}
    edges = [("s", "a")]
    for name, c in tails.items():
        caps[name] = c
        edges += [("a", name), (name, "t")]
    return network_from_capacities(caps, edges, **params)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
