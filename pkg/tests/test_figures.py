"""Mutation reproduces every transcribed figure case exactly, both ways."""

import pytest

from cluster_artin import chordless_cycles, mutate_diagram

from figures_data import ALL_PICTURES, CYCLE_PICTURES


@pytest.mark.parametrize("case,left,k,right", ALL_PICTURES,
                         ids=[c[0] for c in ALL_PICTURES])
def test_forward(case, left, k, right):
    assert mutate_diagram(left, k) == right


@pytest.mark.parametrize("case,left,k,right", ALL_PICTURES,
                         ids=[c[0] for c in ALL_PICTURES])
def test_backward(case, left, k, right):
    assert mutate_diagram(right, k) == left


@pytest.mark.parametrize("case,left,k,right", CYCLE_PICTURES,
                         ids=[c[0] for c in CYCLE_PICTURES])
def test_results_stay_in_taxonomy(case, left, k, right):
    for D in (left, right):
        for cycle in chordless_cycles(D):
            assert cycle.cycle_class.value != "AffineOther"
