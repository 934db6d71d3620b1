import itertools
from collections import Counter

import numpy as np
import pytest

from fractional_cycles.exceptions import CertificationError, ValidationError
from fractional_cycles.hypergraph import Hypergraph, gen_complete
from fractional_cycles.transitions import (
    TransitionSystem,
    build_compatibility_digraph,
    certify_and_resample,
    certify_system,
    compatible_closed_walk_census,
    compatible_connectivity,
    compatible_cycle_count,
    count_compatible_walks,
    derive_seed,
    enumerate_compatible_cycles,
    full_transition_system,
    is_compatible_cycle,
    is_compatible_walk,
    regular_graphs,
    sample_regular_graph,
    sample_transition_system,
)
from fractional_cycles.walks import TightCycle, count_walks, enumerate_cycles, walk_from_vertices


@pytest.fixture(scope="module")
def k6():
    return gen_complete(6, 2)


@pytest.fixture(scope="module")
def k6_system(k6):
    return sample_transition_system(k6, 2, seed=17)


# Sampling


@pytest.mark.parametrize("d,r,count", [(4, 1, 3), (4, 2, 3), (5, 2, 12), (6, 1, 15), (6, 2, 70), (5, 4, 1)])
def test_regular_graph_counts(d, r, count):
    graphs = regular_graphs(d, r)
    assert len(graphs) == count
    for g in graphs:
        degrees = Counter(itertools.chain.from_iterable(g))
        assert all(degrees[v] == r for v in range(d))


def test_sample_regular_graph_is_uniform():
    rng = np.random.default_rng(1)
    vertices = list(range(5))
    seen = Counter(tuple(sort_pairs(sample_regular_graph(vertices, 2, rng))) for _ in range(10_000))
    assert len(seen) == 12
    expected = 10_000 / 12
    sigma = (10_000 * (1 / 12) * (11 / 12)) ** 0.5
    assert all(abs(c - expected) <= 4 * sigma for c in seen.values())


def sort_pairs(pairs):
    return sorted(tuple(sorted(p)) for p in pairs)


@pytest.mark.parametrize("d,r,method", [(11, 4, "pairing"), (11, 6, "auto"), (9, 2, "auto"), (7, 6, "enumerate")])
def test_sample_regular_graph_methods(d, r, method):
    rng = np.random.default_rng(d * 100 + r)
    pairs = sample_regular_graph(list(range(d)), r, rng, method=method)
    degrees = Counter(itertools.chain.from_iterable(pairs))
    assert len(set(map(frozenset, pairs))) == len(pairs)
    assert all(degrees[v] == r for v in range(d))


def test_sample_regular_graph_rejects_impossible_degree():
    rng = np.random.default_rng(0)
    with pytest.raises(ValidationError):
        sample_regular_graph(list(range(5)), 3, rng)
    with pytest.raises(ValidationError):
        sample_regular_graph(list(range(4)), 4, rng)


def test_sample_transition_system_is_regular(k6, k6_system):
    assert k6_system.is_regular(2)
    assert set(k6_system.adjacency) == {(v,) for v in range(1, 7)}
    for x, adj in k6_system.adjacency.items():
        assert len(adj) == 5
        for e, nbrs in adj.items():
            assert x[0] in e
            for f in nbrs:
                assert e in adj[f]


def test_sample_transition_system_is_seeded(k6, k6_system):
    assert sample_transition_system(k6, 2, seed=17) == k6_system
    assert sample_transition_system(k6, 2, seed=18) != k6_system


def test_sample_transition_system_preconditions(k6):
    with pytest.raises(ValidationError):
        sample_transition_system(k6, 3, seed=0)
    with pytest.raises(ValidationError):
        sample_transition_system(k6, 6, seed=0)


def test_sampling_skips_sets_without_neighbours(k8):
    # vertex 9 is isolated: min_codegree is 0, but the sampler only visits sets with neighbours
    H = Hypergraph.from_edges(9, 2, k8.edges)
    T = sample_transition_system(H, 6, seed=0)
    assert T.is_regular(6)
    assert (9,) not in T.adjacency
    with pytest.raises(ValidationError):
        sample_transition_system(H, 8, seed=0)


def test_zero_system_is_edgeless(k6):
    T = sample_transition_system(k6, 0, seed=0)
    assert all(not nbrs for adj in T.adjacency.values() for nbrs in adj.values())
    assert not is_compatible_walk(walk_from_vertices(k6, (1, 2, 3)), T)
    assert enumerate_compatible_cycles(k6, T, 4) == []


def test_system_round_trip(k6, k6_system):
    again = TransitionSystem.from_dict(k6, k6_system.to_dict())
    assert again == k6_system
    full = full_transition_system(k6)
    assert TransitionSystem.from_dict(k6, full.to_dict()).full


def test_from_dict_rejects_asymmetric_graph(k6):
    data = {"r": None, "graphs": {"1": {"1,2": [[1, 3]], "1,3": []}}}
    with pytest.raises(ValidationError, match="symmetric"):
        TransitionSystem.from_dict(k6, data)


# Compatibility


def test_full_system_allows_everything(k6):
    T = full_transition_system(k6)
    assert is_compatible_walk(walk_from_vertices(k6, (1, 2, 1, 3, 4)), T)
    C = TightCycle.from_vertices(2, (1, 2, 3, 4))
    assert is_compatible_cycle(C, T)


def test_cycle_compatibility_is_conjunction_of_transitions(k6, k6_system):
    for C in enumerate_cycles(k6, 4):
        steps = [
            k6_system.allows(C.ordered_edges[i], C.ordered_edges[(i + 1) % 4]) for i in range(4)
        ]
        assert is_compatible_cycle(C, k6_system) == all(steps)
        reverse = TightCycle(k=2, vertices=C.vertices[::-1])
        assert is_compatible_cycle(reverse, k6_system) == all(steps)


def test_compatibility_digraph_on_k5(k5):
    T = sample_transition_system(k5, 2, seed=3)
    Dg = build_compatibility_digraph(k5, T)
    assert len(Dg.vertices) == 20
    assert len(Dg.arcs) == 40
    assert np.all(Dg.out_degrees() == 2)
    assert np.all(Dg.in_degrees() == 2)


def test_compatibility_digraph_reversal_symmetry(k6, k6_system):
    Dg = build_compatibility_digraph(k6, k6_system)
    for e, f in itertools.product(k6.ordered_edges, repeat=2):
        assert Dg.has_arc(e, f) == Dg.has_arc(f[::-1], e[::-1])


def test_full_digraph_degrees(k5, k5_full):
    Dg = build_compatibility_digraph(k5, k5_full)
    assert np.all(Dg.out_degrees() == 4)


def test_zero_digraph_is_arcless(k6):
    Dg = build_compatibility_digraph(k6, sample_transition_system(k6, 0, seed=0))
    assert Dg.arcs == ()
    assert len(Dg.vertices) == 30


def test_arc_list_export(k5):
    Dg = build_compatibility_digraph(k5, sample_transition_system(k5, 2, seed=3))
    lines = Dg.to_arc_list().splitlines()
    assert len(lines) == 40
    head, tail = lines[0].split(" -> ")
    assert head.split()[1] == tail.split()[0]


# Counting


def test_count_compatible_walks_trivial(k6, k6_system):
    Dg = build_compatibility_digraph(k6, k6_system)
    assert count_compatible_walks(Dg, (1, 2), (1, 2), 1) == 1
    assert count_compatible_walks(Dg, (1, 2), (2, 3), 1) == 0


def test_full_system_reduces_to_walk_counts(k5, k5_full):
    Dg = build_compatibility_digraph(k5, k5_full)
    for s, t in [((1, 2), (3, 4)), ((1, 2), (2, 1)), ((2, 5), (5, 3))]:
        for ell in (2, 3, 4):
            assert count_compatible_walks(Dg, s, t, ell) == count_walks(k5, s, t, ell)


def test_zeta_decreases_with_length(k8, k8_system):
    Dg = build_compatibility_digraph(k8, k8_system)
    zetas = [compatible_connectivity(Dg, ell)[1] for ell in (6, 9, 12)]
    assert zetas[2] < zetas[0]
    alpha, zeta = compatible_connectivity(Dg, 12)
    assert alpha > 0
    assert 1 - zeta <= alpha


def test_full_cycles_on_k5(k5, k5_full):
    assert len(enumerate_compatible_cycles(k5, k5_full, 5)) == 12


def test_closed_walk_census_identity(k6, k6_system):
    c = compatible_cycle_count(k6, k6_system, 4)
    assert compatible_closed_walk_census(k6, k6_system, 4) == 8 * c
    full = full_transition_system(k6)
    assert compatible_closed_walk_census(k6, full, 4) == 8 * 45


# Certification


def test_certify_full_system(k5, k5_full):
    report = certify_system(k5, k5_full, [4])
    assert report.accepted
    assert report.per_ell[4]["alpha"] > 0


def test_certify_zero_system_is_rejected(k6):
    report = certify_system(k6, sample_transition_system(k6, 0, seed=0), [3])
    assert not report.accepted
    with pytest.raises(CertificationError) as info:
        certify_and_resample(k6, 0, base_ell=3, seed=0, budget=3)
    assert len(info.value.diagnostics["attempts"]) == 3


def test_certify_k8_within_five_seeds(k8):
    T, report = certify_and_resample(k8, 4, base_ell=6, ell_list=[9], seed=11, budget=5)
    assert report.accepted
    assert T.is_regular(4)
    assert set(report.per_ell) == {6, 9}
    assert report.to_dict()["per_ell"]["6"]["alpha"] != "0/1"


def test_derive_seed():
    assert derive_seed(5, 0) == derive_seed(5, 0)
    assert derive_seed(5, 0) != derive_seed(5, 1)
    assert derive_seed(5, 0, 1) != derive_seed(5, 1, 0)
