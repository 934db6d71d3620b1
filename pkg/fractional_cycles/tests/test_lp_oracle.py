from fractions import Fraction

import pytest

from fractional_cycles.decomposer import adjust, verify
from fractional_cycles.exceptions import ValidationError
from fractional_cycles.hypergraph import gen_random_min_codegree
from fractional_cycles.lp_oracle import (
    BUDGET_EXCEEDED,
    FEASIBLE,
    INFEASIBLE,
    certificate_from_json,
    lp_oracle,
    verify_certificate,
)
from fractional_cycles.transitions import full_transition_system


@pytest.mark.parametrize("ell", [3, 4, 5])
def test_complete_graph_is_feasible(k5, ell):
    result = lp_oracle(k5, ell)
    assert result.status == FEASIBLE
    assert result.feasible
    report = verify(k5, result.weights, ell, Fraction(1, 2))
    assert report.is_exact_cover
    assert report.is_nonnegative


def test_k7_is_feasible(k7):
    result = lp_oracle(k7, 5)
    assert result.feasible
    assert result.pivots > 0
    assert verify(k7, result.weights, 5, Fraction(1, 2)).is_exact_cover


@pytest.mark.parametrize("seed", range(8))
def test_status_agrees_with_its_evidence(seed):
    H = gen_random_min_codegree(7, 2, 3, seed=seed)
    result = lp_oracle(H, 5)
    if result.feasible:
        report = verify(H, result.weights, 5, Fraction(1, 2))
        assert report.is_exact_cover
        assert report.is_nonnegative
    else:
        assert result.status == INFEASIBLE
        assert verify_certificate(H, 5, result.dual)


def test_feasible_where_adjust_succeeds(k8):
    _, report = adjust(k8, full_transition_system(k8), 5)
    assert report.is_exact_cover
    assert lp_oracle(k8, 5).feasible


def test_edge_outside_every_cycle_is_infeasible(zero_cycle):
    result = lp_oracle(zero_cycle, 5)
    assert result.status == INFEASIBLE
    assert result.weights is None
    assert verify_certificate(zero_cycle, 5, result.dual)


def test_no_cycles_at_all(path3):
    result = lp_oracle(path3, 3)
    assert result.status == INFEASIBLE
    assert result.dual == {(1, 2): -1, (2, 3): -1}
    assert verify_certificate(path3, 3, result.dual)


def test_certificate_round_trip(zero_cycle):
    result = lp_oracle(zero_cycle, 5)
    data = result.to_dict()
    assert data["status"] == INFEASIBLE
    assert certificate_from_json(data) == result.dual


def test_zero_budget_stops_early(k5):
    result = lp_oracle(k5, 5, time_budget=0)
    assert result.status == BUDGET_EXCEEDED
    assert not result.feasible


def test_rejects_short_cycles(k5):
    with pytest.raises(ValidationError):
        lp_oracle(k5, 2)


# Certificates


def test_zero_vector_certifies_nothing(k5):
    assert not verify_certificate(k5, 5, {e: 0 for e in k5.sorted_edges})


def test_negative_cycle_sum_is_not_a_certificate(k5):
    dual = {e: Fraction(-1) for e in k5.sorted_edges}
    assert not verify_certificate(k5, 5, dual)


def test_certificate_names_only_edges(k5):
    with pytest.raises(ValidationError):
        verify_certificate(k5, 5, {(1, 9): -1})


def test_hand_written_certificates(k5, zero_cycle):
    # the only 5-cycle avoids 67, so charging 67 alone certifies infeasibility
    dual = certificate_from_json({"dual": {"6,7": "-1"}})
    assert verify_certificate(zero_cycle, 5, dual)
    assert not verify_certificate(k5, 5, {(1, 2): -1})
