import math

import pytest

from ucvqkd.asymptotic import key_rate_ucvqkd_symmetric
from ucvqkd.composable import EpsilonBudget
from ucvqkd.gaussian import DomainError
from ucvqkd.optimize import (
    distance_to_eta,
    max_distance,
    optimal_modulation_variance,
    rate_vs_block_size,
    sweep_distance,
)


def test_distance_to_eta():
    assert distance_to_eta(0.0) == 1.0
    assert distance_to_eta(10.0) == pytest.approx(10.0 ** (-0.2), abs=1e-15)
    assert distance_to_eta(50.0) == pytest.approx(0.1, abs=1e-15)


def test_golden_section_on_analytic_maximum():
    # -(log vm - log 7)^2 peaks exactly at vm = 7
    opt = optimal_modulation_variance(
        lambda vm: -((math.log(vm) - math.log(7.0)) ** 2)
    )
    assert opt.vm == pytest.approx(7.0, rel=1e-3)
    assert opt.unimodal
    assert not opt.at_bracket_edge


def test_golden_section_flags_bracket_edge():
    opt = optimal_modulation_variance(lambda vm: -vm, bracket=(0.1, 10.0))
    assert opt.at_bracket_edge
    assert opt.vm == pytest.approx(0.1)


def test_invalid_everywhere_raises():
    def bad(vm):
        raise DomainError("nope")

    with pytest.raises(DomainError):
        optimal_modulation_variance(bad)


def test_optimized_rate_beats_fixed_vm():
    eta = distance_to_eta(15.0)
    fixed = key_rate_ucvqkd_symmetric(20.0, 0.95, eta, 0.01)
    opt = optimal_modulation_variance(
        lambda vm: key_rate_ucvqkd_symmetric(vm, 0.95, eta, 0.01)
    )
    assert opt.rate >= fixed - 1e-12


def test_sweep_distance_monotone():
    sweep = sweep_distance(
        key_rate_ucvqkd_symmetric,
        distances=[0.0, 5.0, 10.0, 20.0, 40.0],
        vm=20.0,
        beta=0.95,
        eps=0.01,
        optimize_vm=False,
    )
    assert all(a > b for a, b in zip(sweep.rates, sweep.rates[1:]))


def test_block_size_sweep_monotone():
    res = rate_vs_block_size(10.0, [1e9, 1e10, 1e11, 1e12], EpsilonBudget.default())
    assert all(a < b for a, b in zip(res.rates, res.rates[1:]))
    assert len(res.optimal_vm) == 4


def test_block_size_sweep_requires_sorted_input():
    with pytest.raises(DomainError):
        rate_vs_block_size(10.0, [1e12, 1e9], EpsilonBudget.default())


def test_max_distance_brackets_positive_rate():
    km, found = max_distance(1e12, EpsilonBudget.default(), tolerance_km=0.5)
    assert found
    assert 5.0 < km < 40.0
