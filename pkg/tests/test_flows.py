"""Exact max-flow against an exhaustive min-cut oracle, plus flow laws."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bcrforest.errors import LimitInfeasible
from bcrforest.flows import FlowNetwork, max_flow
from conftest import enumerate_min_cut


def _random_network(rng: random.Random, nodes: int, arcs: int, halves: bool):
    net = FlowNetwork()
    caps: dict[tuple[str, str], Fraction] = {}
    labels = [f"n{i}" for i in range(nodes)]
    for _ in range(arcs):
        u, v = rng.sample(labels, 2)
        value = Fraction(rng.randint(1, 8), 2 if halves else 1)
        net.add_arc(u, v, value)
        caps[(u, v)] = caps.get((u, v), Fraction(0)) + value
    return net, caps, labels


def test_value_matches_cut_enumeration_on_many_networks():
    rng = random.Random(20240)
    checked = 0
    for _ in range(120):
        nodes = rng.randint(3, 8)
        net, caps, labels = _random_network(rng, nodes, rng.randint(2, 14), rng.random() < 0.5)
        src, snk = rng.sample(labels, 2)
        result = max_flow(net, [src], [snk])
        oracle = enumerate_min_cut(caps, frozenset([src]), frozenset([snk]))
        assert result.value == oracle
        checked += 1
    assert checked == 120


def test_flow_laws_and_cut_side():
    rng = random.Random(77)
    for _ in range(60):
        net, caps, labels = _random_network(rng, rng.randint(3, 7), rng.randint(3, 12), True)
        src, snk = rng.sample(labels, 2)
        result = max_flow(net, [src], [snk])
        # Conservation everywhere except the endpoints.
        balance: dict[str, Fraction] = {}
        for (u, v), f in result.flow.items():
            assert f >= 0
            assert f <= caps.get((u, v), Fraction(0))
            balance[u] = balance.get(u, Fraction(0)) - f
            balance[v] = balance.get(v, Fraction(0)) + f
        for node, net_in in balance.items():
            if node == src:
                assert net_in == -result.value
            elif node == snk:
                assert net_in == result.value
            else:
                assert net_in == 0
        # The reported side is a cut of exactly the flow value.
        side = result.min_cut_side
        assert src in side and snk not in side
        crossing = sum(
            (c for (u, v), c in caps.items() if u in side and v not in side),
            Fraction(0),
        )
        assert crossing == result.value


def test_half_integral_capacities_give_half_integral_flows():
    rng = random.Random(4242)
    for _ in range(40):
        net, caps, labels = _random_network(rng, rng.randint(3, 7), rng.randint(3, 12), True)
        src, snk = rng.sample(labels, 2)
        result = max_flow(net, [src], [snk])
        assert (2 * result.value).denominator == 1
        for f in result.flow.values():
            assert (2 * f).denominator == 1


def test_min_cut_side_is_minimal():
    # Two disjoint min cuts; the residual-reachable one is the smallest.
    net = FlowNetwork()
    net.add_arc("s", "m", 1)
    net.add_arc("m", "t", 1)
    result = max_flow(net, ["s"], ["t"])
    assert result.value == 1
    assert result.min_cut_side == frozenset(["s"])


def test_sources_always_in_cut_side():
    # A source with no arcs at all still sits on the source side.
    net = FlowNetwork()
    net.add_arc("a", "b", 1)
    result = max_flow(net, ["q"], ["b"])
    assert result.value == 0
    assert result.min_cut_side == frozenset(["q"])


def test_multi_source_multi_sink():
    net = FlowNetwork()
    net.add_arc("s1", "m", 2)
    net.add_arc("s2", "m", 3)
    net.add_arc("m", "t1", 1)
    net.add_arc("m", "t2", 3)
    result = max_flow(net, ["s1", "s2"], ["t1", "t2"])
    assert result.value == 4


def test_limit_short_stop_and_infeasible():
    net = FlowNetwork()
    net.add_arc("s", "t", 5)
    result = max_flow(net, ["s"], ["t"], limit=Fraction(3, 2))
    assert result.value == Fraction(3, 2)
    with pytest.raises(LimitInfeasible):
        max_flow(net, ["s"], ["t"], limit=6)


def test_input_validation():
    net = FlowNetwork()
    net.add_arc("a", "b", 1)
    with pytest.raises(ValueError):
        max_flow(net, [], ["b"])
    with pytest.raises(ValueError):
        max_flow(net, ["a"], ["a"])
    with pytest.raises(ValueError):
        max_flow(net, ["a"], ["b"], limit=-1)
    with pytest.raises(ValueError):
        net.add_arc("a", "a", 1)
    with pytest.raises(ValueError):
        net.add_arc("a", "b", -2)


@given(st.integers(min_value=0, max_value=2**20))
@settings(max_examples=30, deadline=None)
def test_antiparallel_arcs_supported(seed):
    rng = random.Random(seed)
    net = FlowNetwork()
    a = Fraction(rng.randint(1, 6))
    b = Fraction(rng.randint(1, 6))
    net.add_arc("u", "v", a)
    net.add_arc("v", "u", b)
    net.add_arc("s", "u", 10)
    net.add_arc("v", "t", 10)
    assert max_flow(net, ["s"], ["t"]).value == a
