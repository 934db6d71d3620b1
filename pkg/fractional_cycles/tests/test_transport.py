import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fractional_cycles.exceptions import TransportError, ValidationError
from fractional_cycles.transport import (
    BalancedFlow,
    WeightedDigraph,
    alpha_paths,
    balance_flow,
    disjointness_digraph,
    flow_divergence,
    path_families,
    verify_balance,
)

F = Fraction


def complete_digraph(n, xi=None):
    nodes = list(range(n))
    return WeightedDigraph.from_arcs(nodes, itertools.permutations(nodes, 2), xi)


def net(flow, x, y):
    return flow.value((x, y)) - flow.value((y, x))


# Digraphs


def test_rejects_missing_reverse_arc():
    with pytest.raises(ValidationError, match="reverse"):
        WeightedDigraph.from_arcs([0, 1], [(0, 1)])


def test_rejects_unbalanced_weights():
    with pytest.raises(ValidationError, match="sum to zero"):
        complete_digraph(3, {0: 1})


def test_rejects_weights_on_unknown_vertices():
    with pytest.raises(ValidationError):
        complete_digraph(3, {0: 1, 7: -1})


def test_disjointness_digraph_of_k7(k7):
    D = disjointness_digraph(k7)
    assert D.n == 21
    # each pair is disjoint from C(5, 2) = 10 others
    assert len(D.arcs) == 210
    assert D.graph.has_edge((1, 2), (3, 4))
    assert not D.graph.has_edge((1, 2), (2, 3))


# Path families


def test_families_of_complete_digraph():
    D = complete_digraph(6)
    families = path_families(D, 2)
    assert all(len(paths) == 4 for paths in families.values())
    assert alpha_paths(D, 2) == F(2, 3)
    for (u, v), paths in families.items():
        for p in paths:
            assert p[0] == u and p[-1] == v
            assert len(set(p)) == 3


def test_longer_families_match_simple_paths():
    D = complete_digraph(5)
    families = path_families(D, 3)
    # ordered choices of two distinct middle vertices out of three
    assert all(len(paths) == 6 for paths in families.values())
    assert alpha_paths(D, 3) == F(6, 25)


def test_isolated_vertices_have_no_paths():
    D = WeightedDigraph.from_arcs([0, 1, 2, 3], [(0, 1), (1, 0)], {0: 1, 2: -1})
    assert alpha_paths(D, 2) == 0
    with pytest.raises(TransportError) as info:
        balance_flow(D)
    assert info.value.pair is not None


def test_path_length_must_be_positive():
    with pytest.raises(ValidationError):
        path_families(complete_digraph(3), 0)


# Balancing


def test_zero_weights_give_zero_flow():
    flow = balance_flow(complete_digraph(5))
    assert flow.eta == {}
    assert flow.max_value == 0


def test_two_vertex_imbalance():
    c = F(3, 7)
    D = complete_digraph(4, {0: c, 1: -c})
    flow = balance_flow(D)
    assert verify_balance(D, flow)
    assert flow.alpha == F(1, 2)
    assert flow.bound == 2 * c * 2 / (F(1, 2) * 4)
    assert flow.max_value <= flow.bound
    assert all(r == 0 for r in flow_divergence(D, flow).values())


def test_flow_is_supported_on_one_direction():
    D = complete_digraph(6, {0: 2, 1: -1, 2: 3, 3: -4})
    flow = balance_flow(D)
    for x, y in flow.eta:
        assert (y, x) not in flow.eta
        assert flow.eta[(x, y)] > 0


def test_perturbed_flow_fails_verification():
    D = complete_digraph(5, {0: 1, 4: -1})
    flow = balance_flow(D)
    arc = next(iter(flow.eta))
    eta = dict(flow.eta)
    eta[arc] += F(1, 1000)
    bumped = BalancedFlow(eta=eta, bound=flow.bound, alpha=flow.alpha, beta=flow.beta, ell=flow.ell)
    assert not verify_balance(D, bumped)


def test_hand_built_flow():
    D = WeightedDigraph.from_arcs(
        "abc", [("a", "b"), ("b", "a"), ("b", "c"), ("c", "b"), ("a", "c"), ("c", "a")], {"a": 1, "c": -1}
    )
    flow = BalancedFlow(eta={("a", "b"): F(1), ("b", "c"): F(1)}, bound=F(2), alpha=F(1), beta=F(1), ell=2)
    assert verify_balance(D, flow)
    off_graph = BalancedFlow(eta={("a", "d"): F(1)}, bound=F(2), alpha=F(1), beta=F(1), ell=2)
    assert not verify_balance(D, off_graph)


def test_net_flow_is_linear():
    first = {0: 1, 1: 2, 2: -3}
    second = {1: F(-1, 2), 3: F(5, 2), 4: -2}
    both = {v: first.get(v, 0) + second.get(v, 0) for v in range(6)}
    flows = [balance_flow(complete_digraph(6, xi)) for xi in (first, second, both)]
    for x, y in itertools.permutations(range(6), 2):
        assert net(flows[2], x, y) == net(flows[0], x, y) + net(flows[1], x, y)


def test_flow_serializes():
    flow = balance_flow(complete_digraph(4, {0: 1, 1: -1}))
    data = flow.to_dict()
    assert data["alpha"] == "1/2"
    assert len(data["arcs"]) == len(flow.eta)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(min_value=-6, max_value=6), min_size=20, max_size=20))
def test_balances_zero_sum_weights_on_k7(k7, values):
    vertices = k7.sorted_edges
    xi = dict(zip(vertices, [F(v, 5) for v in values]))
    xi[vertices[-1]] = -sum(xi.values())
    D = disjointness_digraph(k7, xi)
    flow = balance_flow(D)
    assert verify_balance(D, flow)
    assert flow.max_value <= flow.bound


def test_negative_weights_keep_their_reverse_flow(k7):
    # only the deficit side is negative, so every raw amount it sends is below zero
    xi = {(5, 7): F(1, 5), (6, 7): F(-1, 5)}
    D = disjointness_digraph(k7, xi)
    flow = balance_flow(D)
    assert all(r == 0 for r in flow_divergence(D, flow).values())
    assert verify_balance(D, flow)
    assert all(w > 0 for w in flow.eta.values())
