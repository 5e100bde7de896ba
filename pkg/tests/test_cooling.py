import dataclasses
from fractions import Fraction

import pytest

from thermalnet.cooling import (
    Walk,
    WalkSet,
    ample_budget,
    beta_min_functional,
    beta_min_maxflow,
    dispatch,
    packets_required,
    plan,
    send_packet,
    spanning_walkset,
    verify_cut_dominance,
    walk_cost,
    walk_via,
)
from thermalnet.exceptions import ConfigurationError, InsufficientBudgetError, UnreachableTargetError
from thermalnet.flow import exhaust, max_flow
from thermalnet.model import network_from_capacities
from thermalnet.oracle import min_restoring_packets

from conftest import diamond, path_net


def chain(length, **params):
    names = [f"x{i}" for i in range(length)] + ["v"]
    edges = list(zip(["s"] + names, names + ["t"]))
    return network_from_capacities(dict.fromkeys(names, 1), edges, **params)


def test_walk_validity():
    net = diamond()
    assert Walk(("s", "a", "t")).is_valid(net)
    assert not Walk(("s", "a", "b", "t")).is_valid(net)
    assert not Walk(("s", "a")).is_valid(net)
    assert str(Walk(("s", "a", "t"))) == "s->a->t"


def test_spanning_walkset_diamond_and_path():
    ws = spanning_walkset(diamond(), {"a", "b"})
    assert [w.vertices for w in ws] == [("s", "a", "t"), ("s", "b", "t")]
    ws = spanning_walkset(path_net(1, 1), {"a", "b"})
    assert [w.vertices for w in ws] == [("s", "a", "b", "t")]
    assert ws.spanned == {"a", "b"}


def test_unreachable_target():
    net = network_from_capacities({"a": 1, "v": 1}, [("s", "a"), ("a", "t"), ("s", "v")])
    with pytest.raises(UnreachableTargetError):
        walk_via(net, "v")


def test_walk_via_falls_back_when_halves_share_an_edge():
    # s->a->v and v->a->t both use nothing twice, but the only way into v and
    # out to t shares a: head s,a,v and tail v,a,t repeat no edge
    net = network_from_capacities(
        {"a": 2, "v": 1}, [("s", "a"), ("a", "v"), ("v", "a"), ("a", "t")]
    )
    walk = walk_via(net, "v")
    assert walk.vertices == ("s", "a", "v", "a", "t")
    assert walk.is_valid(net)


def test_packets_required():
    assert packets_required(diamond(dtu=2, dtd="1"), {"a", "b"}) == 10
    assert packets_required(path_net(0, 0, dtd=1), {"a"}) == 0
    net = network_from_capacities({"a": 1}, [("s", "a"), ("a", "t")], dtu=3, dtd=2)
    assert packets_required(net, {"a"}) == 2
    with pytest.raises(ConfigurationError):
        packets_required(diamond(), {"a"})


def test_beta_along_path():
    hot, _ = exhaust(path_net(2, 5, dtd=1))
    assert beta_min_functional(hot, {"a"}) == 2
    walk = walk_via(hot, "a")
    repaired, done = send_packet(hot, walk, 2)
    assert done and max_flow(repaired).value == 1
    # a packet that cannot finish the walk is never launched
    repaired, done = send_packet(hot, walk, Fraction(3, 2))
    assert not done and repaired is hot
    # if it were, it would cool a and reconnect: documented launch policy
    repaired, _ = send_packet(hot, walk, Fraction(3, 2), require_completion=False)
    assert max_flow(repaired).value == 1


def test_beta_single_hot_target():
    hot, _ = exhaust(network_from_capacities({"a": 2}, [("s", "a"), ("a", "t")], dtd=1))
    assert beta_min_functional(hot, {"a"}) == beta_min_maxflow(hot, {"a"}) == 1


def test_beta_trivial_when_target_cold():
    net = path_net(1, 1, dtd=1)
    assert beta_min_functional(net, {"a"}) == 0
    assert beta_min_functional(net, set()) == 0


def test_beta_diamond_symmetric():
    hot, _ = exhaust(diamond(dtd=1))
    assert beta_min_functional(hot, {"a", "b"}) == beta_min_maxflow(hot, {"a", "b"}) == 1


def test_beta_path_covers_both():
    hot, _ = exhaust(path_net(3, 3, dtd=2))
    assert beta_min_maxflow(hot, {"a", "b"}) == 4


def test_beta_behind_hot_chain():
    hot, _ = exhaust(chain(3, dtd=1))
    assert beta_min_maxflow(hot, {"v"}) == 4
    walk = walk_via(hot, "v")
    assert walk_cost(hot, walk) == 4
    assert send_packet(hot, walk, 4)[1]
    assert not send_packet(hot, walk, Fraction(7, 2))[1]


def test_plan_diamond():
    hot, flow = exhaust(diamond(dtu=2, dtd=1, beta=1))
    p = plan(hot)
    assert p.total_packets == 10 == sum(p.packets_per_walk.values())
    assert p.restored_flow == p.original_flow == flow.value == 5
    assert p.target.members == {"a", "b"}
    assert p.walk_set.spanned >= p.target.members
    assert min_restoring_packets(hot, 5, p.beta_required, 10) == 10
    assert verify_cut_dominance(p.repaired, p)


def test_plan_when_only_target_is_hot():
    base = path_net(5, 2, dtu=1, dtd=1)
    hot, flow = exhaust(base)
    hot = hot.replace_nodes({"a": base.nodes["a"]})
    p = plan(hot.with_params(beta=ample_budget(hot)))
    assert p.target.members == {"b"}
    assert p.repaired.temperatures() == base.temperatures()
    assert p.restored_flow == flow.value


def test_plan_leaves_off_walk_heat():
    # x is hot but the cheapest walk to b skips it
    base = network_from_capacities(
        {"b": 2, "x": 5}, [("s", "b"), ("s", "x"), ("x", "b"), ("b", "t")], dtu=1, dtd=1
    )
    hot = base.replace_nodes(
        {"b": dataclasses.replace(base.nodes["b"], theta=2), "x": dataclasses.replace(base.nodes["x"], theta=1)}
    )
    p = plan(hot.with_params(beta=1))
    assert p.restored_flow == 2
    assert p.repaired.nodes["x"].theta == 1


def test_plan_on_functional_network_is_empty():
    p = plan(diamond(dtd=1, beta=1))
    assert p.total_packets == 0 and p.schedule == ()
    assert p.strategy == "empty"
    assert verify_cut_dominance(p.repaired, p)


def test_plan_refuses_small_beta():
    hot, _ = exhaust(path_net(3, 3, dtd=1, beta=1))
    with pytest.raises(InsufficientBudgetError) as err:
        plan(hot)
    assert err.value.required == 2


def test_plan_beta_monotone():
    hot, flow = exhaust(path_net(3, 3, dtd=1))
    p = plan(hot.with_params(beta=2))
    for beta in (2, 3, 10):
        assert max_flow(dispatch(hot, p.schedule, beta=beta)).value == flow.value


def test_dominance_reports_corrupted_plan():
    hot, _ = exhaust(diamond(dtd=1, beta=1))
    p = plan(hot)
    broken = dataclasses.replace(p, walk_set=WalkSet((Walk(("s", "a")),)))
    check = verify_cut_dominance(p.repaired, broken)
    assert not check
    assert check.violated_cut.members == {"a", "b"}


def test_dominance_detects_capacity_shortfall():
    base = path_net(2, 5, dtd=1)
    hot, _ = exhaust(base)
    p = plan(hot.with_params(beta=2))
    assert p.target.members == {"a"} and verify_cut_dominance(p.repaired, p)
    # b left nearly critical undercuts the target
    scorched = p.repaired.replace_nodes({"b": dataclasses.replace(base.nodes["b"], theta=4)})
    check = verify_cut_dominance(scorched, p)
    assert not check
    assert check.violated_cut.members == {"b"}


def test_shared_walk_beats_per_node_formula():
    # a packet cools every hot node it passes, so one walk through both cut
    # members halves the count once beta covers two nodes
    net = network_from_capacities(
        {"a": 2, "b": 2}, [("s", "a"), ("s", "b"), ("a", "b"), ("a", "t"), ("b", "t")], dtd=1
    )
    hot, flow = exhaust(net)
    assert packets_required(hot, {"a", "b"}) == 4
    assert min_restoring_packets(hot, flow.value, 1, 3) is None
    assert min_restoring_packets(hot, flow.value, 2, 3) == 2
    both = Walk(("s", "a", "b", "t"))
    assert max_flow(dispatch(hot, [(both, 2)], beta=2)).value == flow.value


def test_formula_can_undercount():
    # one packet resets v but leaves a branch behind it critical
    net = network_from_capacities(
        {"v": 2, "w1": 1, "w2": 1}, [("s", "v"), ("v", "w1"), ("v", "w2"), ("w1", "t"), ("w2", "t")], dtd=2
    )
    hot, flow = exhaust(net)
    p = plan(hot.with_params(beta=ample_budget(hot)))
    assert p.target.members == {"v"}
    assert packets_required(hot, p.target) == 1
    assert min_restoring_packets(hot, flow.value, p.beta_required, 1) is None
    assert p.total_packets == 2 and p.restored_flow == 2 and p.strategy == "extended"
