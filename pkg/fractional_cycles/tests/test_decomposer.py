from fractions import Fraction

import pytest

from fractional_cycles import decomposer
from fractional_cycles.decomposer import (
    adjust,
    average_decompositions,
    decomposition_from_json,
    decomposition_to_json,
    edge_deviation,
    example_structure_check,
    hypothesis_flags,
    initial_weights,
    verify,
)
from fractional_cycles.exceptions import PipelineAbort, ValidationError
from fractional_cycles.hypergraph import gen_complete, gen_lowerbound_example, gen_random_min_codegree
from fractional_cycles.transitions import (
    certify_and_resample,
    derive_seed,
    enumerate_compatible_cycles,
    full_transition_system,
    sample_transition_system,
)
from fractional_cycles.transport import balance_flow, disjointness_digraph
from fractional_cycles.transporter import find_transporters, membership_census
from fractional_cycles.utils import parse_frac
from fractional_cycles.weights import WeightFunction

F = Fraction


@pytest.fixture(scope="module")
def k8_full(k8):
    return full_transition_system(k8)


def shift_two_cycles(amount_up, amount_down):
    def hook(omega):
        first, second = omega.support()[:2]
        return omega.plus({first: amount_up, second: -amount_down})

    return hook


# Initial weights


def test_uniform_start_on_k5(k5, k5_full):
    omega = initial_weights(k5, k5_full, 5)
    assert set(omega.weights.values()) == {F(1, 6)}
    assert all(v == 0 for v in edge_deviation(omega).values())


def test_no_cycles_aborts(path3):
    with pytest.raises(PipelineAbort):
        initial_weights(path3, full_transition_system(path3), 3)


def test_deviation_of_empty_weights(k5):
    assert set(edge_deviation(WeightFunction(H=k5, ell=5)).values()) == {-1}


def test_sampled_start_spreads_all_edge_weight(k8, k8_system):
    omega = initial_weights(k8, k8_system, 6)
    assert omega.total() == F(28, 6)
    assert sum(edge_deviation(omega).values()) == 0
    assert len(omega.weights) == len(enumerate_compatible_cycles(k8, k8_system, 6))


# Verification


def test_verify_exact_decomposition(k5, k5_full):
    omega = initial_weights(k5, k5_full, 5)
    report = verify(k5, omega, 5, F(1, 2))
    assert report.is_exact_cover
    assert report.offending_edges == []
    assert report.is_nonnegative
    assert report.min_weight == report.max_weight == F(1, 6)
    assert "r_envelope" not in report.bounds_check


def test_r_envelope_rejects_uniform_k5_weights(k5, k5_full):
    omega = initial_weights(k5, k5_full, 5)
    report = verify(k5, omega, 5, F(1, 2), r=4)
    assert report.bounds_check["r_envelope"]["target"] == "5/256"
    assert not report.bounds_check["r_envelope"]["passes"]


def test_verify_reports_offending_edges(k5, k5_full):
    omega = initial_weights(k5, k5_full, 5)
    C = omega.support()[0]
    report = verify(k5, omega.plus({C: F(-1, 3)}), 5, F(1, 2))
    assert not report.is_exact_cover
    assert report.offending_edges == sorted(C.edges)
    assert not report.is_nonnegative


def test_verify_splits_compatible_cycles(k8, k8_system):
    omega = initial_weights(k8, k8_system, 6)
    envelope = verify(k8, omega, 6, F(1, 2), r=4, system=k8_system).bounds_check["r_envelope"]
    assert envelope["compatible"]["checked"] == len(omega.weights)
    assert envelope["noncompatible"]["checked"] == 0
    assert envelope["noncompatible"]["passes"]


def test_report_serializes_edge_sums(k5, k5_full):
    data = verify(k5, initial_weights(k5, k5_full, 5), 5, F(1, 2)).to_dict()
    assert data["edge_sums"]["1,2"] == "1/1"
    assert data["min_weight"] == "1/6"


def test_hypothesis_flags(k8):
    flags = hypothesis_flags(k8, 6, F(1, 2), zeta=F(1, 2))
    assert flags["theorem"] is None
    assert flags["adjustments"]["met"] is False
    flags = hypothesis_flags(k8, 6, F(1, 2), alpha=F(1, 2), ell0=6)
    assert flags["theorem"]["needed_ell"] > 6


# Adjustment


def test_adjust_preconditions(k5, k5_full):
    with pytest.raises(ValidationError):
        adjust(k5, k5_full, 3)


def test_short_cycles_need_no_transporters_without_deviation(k3_7):
    # 4-transporters for k=3 would need 6 <= ell+1, but nothing has to move
    omega, report = adjust(k3_7, full_transition_system(k3_7), 4)
    assert report.is_exact_cover
    assert report.diagnostics["transport"] == {}


def test_short_cycles_abort_when_weight_must_move(k3_7):
    def hook(omega):
        support = omega.support()
        return omega.plus({support[0]: F(1, 10), support[-1]: F(-1, 10)})

    with pytest.raises(PipelineAbort) as info:
        adjust(k3_7, full_transition_system(k3_7), 4, xi_hook=hook)
    assert info.value.diagnostics["k"] == 3
    surplus, deficit = info.value.pair
    assert len(surplus) == len(deficit) == 3
    assert surplus != deficit


def test_adjust_without_deviation(k5, k5_full):
    omega, report = adjust(k5, k5_full, 5)
    assert report.is_exact_cover
    assert report.diagnostics["transport"] == {}
    assert report.diagnostics["omega0"] == "1/6"
    assert report.diagnostics["zeta"] is None


def test_adjust_transports_a_zero_sum_perturbation(k8, k8_full):
    omega, report = adjust(k8, k8_full, 5, m_cap=1, seed=3, xi_hook=shift_two_cycles(F(1, 10), F(1, 10)))
    assert report.is_exact_cover
    assert report.diagnostics["transport"]["transporters"] > 0
    assert report.diagnostics["xi_max"] != "0/1"


def test_adjust_rejects_unbalanced_perturbation(k8, k8_full):
    with pytest.raises(PipelineAbort, match="sum to zero"):
        adjust(k8, k8_full, 5, xi_hook=shift_two_cycles(F(1, 10), 0))


def test_adjust_aborts_without_transporters(k8, k8_full):
    # 6-transporters for k=2 need ten vertices
    with pytest.raises(PipelineAbort) as info:
        adjust(k8, k8_full, 6, m_cap=1, xi_hook=shift_two_cycles(F(1, 100), F(1, 100)))
    assert info.value.pair is not None


def test_adjust_on_a_sampled_system(k8):
    # r = 6 on seven neighbours samples the complete transition graph at every vertex
    T = sample_transition_system(k8, 6, seed=5)
    assert not T.full
    omega, report = adjust(k8, T, 5, m_cap=1, seed=3, xi_hook=shift_two_cycles(F(1, 10), F(1, 10)))
    assert report.is_exact_cover
    assert report.diagnostics["transport"]["transporters"] > 0


@pytest.fixture
def first_arc(k8, k8_full):
    """The first arc carrying flow for the two-cycle perturbation on K_8 at ell = 5."""
    xi = edge_deviation(shift_two_cycles(F(1, 10), F(1, 10))(initial_weights(k8, k8_full, 5)))
    return min(balance_flow(disjointness_digraph(k8, xi)).eta)


def test_arc_without_transporters_is_routed_around(k8, k8_full, first_arc, monkeypatch):
    search = decomposer.find_transporters

    def without_arc(H, T, s_vec, t_vec, *args):
        if (tuple(sorted(s_vec)), tuple(sorted(t_vec))) == first_arc:
            return []
        return search(H, T, s_vec, t_vec, *args)

    monkeypatch.setattr(decomposer, "find_transporters", without_arc)
    omega, report = adjust(k8, k8_full, 5, m_cap=1, seed=3, xi_hook=shift_two_cycles(F(1, 10), F(1, 10)))
    assert report.is_exact_cover
    assert report.diagnostics["transport"]["detours"] == 1


def test_abort_names_the_arc_without_a_route(k8, k8_full, first_arc, monkeypatch):
    search = decomposer.find_transporters
    source = first_arc[0]

    def without_source(H, T, s_vec, *args):
        return [] if tuple(sorted(s_vec)) == source else search(H, T, s_vec, *args)

    monkeypatch.setattr(decomposer, "find_transporters", without_source)
    with pytest.raises(PipelineAbort) as info:
        adjust(k8, k8_full, 5, m_cap=1, seed=3, xi_hook=shift_two_cycles(F(1, 10), F(1, 10)))
    assert info.value.pair == first_arc


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(50))
def test_exact_cover_on_random_instances(seed):
    H = gen_random_min_codegree(9, 2, 6, seed=seed)
    omega, report = adjust(H, full_transition_system(H), 5, m_cap=1, seed=seed)
    assert report.is_exact_cover
    assert all(s == 1 for s in omega.edge_sums().values())


def test_adjust_on_complete_3_graph():
    H = gen_complete(8, 3)
    omega, report = adjust(H, full_transition_system(H), 7)
    assert report.is_exact_cover
    assert report.min_weight == F(56, 7 * 2880)


def test_transporters_for_3_graphs():
    H = gen_complete(12, 3)
    found = find_transporters(H, full_transition_system(H), (1, 2, 3), (4, 5, 6), 7, 2, seed=0)
    assert len(found) == 2
    for tr in found:
        sending, receiving = membership_census(tr)
        assert sending[(1, 2, 3)] == 3
        assert receiving[(4, 5, 6)] == 3


@pytest.mark.slow
def test_single_run_average_is_an_adjusted_decomposition(k12):
    omega, report = average_decompositions(k12, 5, 6, 1, m_cap=3, seed=3)
    assert report.is_exact_cover
    row = report.diagnostics["runs"][0]
    assert row["exact_cover"]

    child = row["seed"]
    assert child in {derive_seed(3, 0, attempt) for attempt in range(10)}
    T, _ = certify_and_resample(k12, 6, base_ell=5, seed=child)
    again, _ = adjust(k12, T, 5, 3, child)
    assert again == omega


@pytest.mark.slow
def test_average_keeps_the_smallest_cycle_weight(k12):
    omega, report = average_decompositions(k12, 5, 6, 5, m_cap=3, seed=0)
    assert report.is_exact_cover
    by_run = [parse_frac(row["min_cycle_weight"]) for row in report.diagnostics["runs"]]
    assert parse_frac(report.diagnostics["min_cycle_weight"]) >= min(by_run)


# Averaging


def test_average_of_full_runs(k5):
    omega, report = average_decompositions(k5, 5, None, 3, system="full")
    assert set(omega.weights.values()) == {F(1, 6)}
    assert report.is_exact_cover
    assert len(report.diagnostics["runs"]) == 3
    assert report.diagnostics["min_weight_by_run"] == ["1/6"] * 3
    assert report.diagnostics["min_cycle_weight"] == "1/6"
    assert report.diagnostics["runs"][0]["alpha_compat"] is None


def test_average_needs_a_run(k5):
    with pytest.raises(ValidationError):
        average_decompositions(k5, 5, None, 0, system="full")


def test_average_gives_up_after_resampling(path3):
    with pytest.raises(PipelineAbort) as info:
        average_decompositions(path3, 4, None, 1, system="full", resample_budget=2)
    assert len(info.value.diagnostics["failures"]) == 2


# Lower-bound example


def test_example_structure():
    LE = gen_lowerbound_example(12, 2, 0.15, 0.05, seed=1)
    result = example_structure_check(LE, 5)
    assert result["spacing"]["holds"]
    assert result["spacing"]["two_walks_checked"] > 0
    assert result["cycles"]["holds"]
    assert result["budget"]["E1"] == 36
    assert result["budget"]["h02_capacity"] == 4 * len(LE.h02)


def test_example_without_h02_has_no_budget():
    LE = gen_lowerbound_example(12, 2, 0, 0, seed=0)
    result = example_structure_check(LE, 5)
    assert result["cycles"]["meeting_E1"] == 0
    assert result["budget"]["witnesses_no_decomposition"]


def test_example_spacing_on_3_graphs():
    # each E_1 edge has one vertex in A, so walks return to A every third step
    LE = gen_lowerbound_example(8, 3, 0, 0, seed=0)
    result = example_structure_check(LE, 4)
    assert result["spacing"]["side"] == "A"
    assert result["spacing"]["holds"]
    assert result["spacing"]["two_walks_checked"] > 0
    assert all(len(set(e) & set(LE.A)) == 1 for e in LE.classes[1])


def test_example_rejects_lengths_divisible_by_k():
    LE = gen_lowerbound_example(12, 2, 0.15, 0.05, seed=1)
    with pytest.raises(ValidationError):
        example_structure_check(LE, 4)


# Serialization


def test_decomposition_json_round_trip(k5, k5_full):
    omega, report = adjust(k5, k5_full, 5)
    data = decomposition_to_json(omega, report)
    assert data["ell"] == 5
    assert data["report"]["is_exact_cover"]
    assert decomposition_from_json(k5, data) == omega
