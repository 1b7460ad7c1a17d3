import numpy as np
import pytest

from scmac.analysis.ensemble import coupled
from scmac.simulation.sweep import run_trial, sweep_error_rate, trial_seeds
from scmac.util.error import ParameterError

P = coupled(3, 6, 3, 6, 4, 3)


def test_no_erasures_no_errors():
    (row,) = sweep_error_rate(P, 300, [0.0], trials=5, seed=1)
    assert row.block_errors == 0
    assert row.block_error_rate == 0.0
    assert row.mean_residual_u1 == row.mean_residual_u2 == 0.0


def test_heavy_erasures_always_fail():
    (row,) = sweep_error_rate(P, 60, [0.9], trials=5, seed=1)
    assert row.block_errors == 5
    assert row.block_error_rate == 1.0
    assert row.mean_residual_u1 > 0.5


def test_error_counts_are_monotone_in_eps():
    rows = sweep_error_rate(P, 60, [0.2, 0.3, 0.35, 0.4, 0.5], trials=10, seed=4)
    errors = [row.block_errors for row in rows]
    residuals = [row.mean_residual_u1 for row in rows]
    assert errors == sorted(errors)
    assert residuals == sorted(residuals)


def test_sweep_is_reproducible():
    a = sweep_error_rate(P, 60, [0.35], trials=6, seed=7)[0]
    b = sweep_error_rate(P, 60, [0.35], trials=6, seed=7)[0]
    assert a.block_errors == b.block_errors
    assert a.mean_residual_u1 == b.mean_residual_u1
    np.testing.assert_array_equal(a.profile_u2, b.profile_u2)


def test_parallel_workers_give_the_same_rows():
    serial = sweep_error_rate(P, 60, [0.3, 0.4], trials=4, seed=2, jobs=1)
    parallel = sweep_error_rate(P, 60, [0.3, 0.4], trials=4, seed=2, jobs=2)
    for a, b in zip(serial, parallel):
        assert (a.block_errors, a.mean_residual_u1, a.mean_rounds) == (b.block_errors, b.mean_residual_u1, b.mean_rounds)


def test_profiles_cover_every_section():
    (row,) = sweep_error_rate(P, 60, [0.45], trials=3, seed=3)
    assert row.profile_u1.shape == row.profile_u2.shape == (P.sections,)
    assert np.mean(row.profile_u1) == pytest.approx(row.mean_residual_u1)


def test_trial_seeds_differ_between_trials():
    a = trial_seeds(0, 0)[0].generate_state(2)
    b = trial_seeds(0, 1)[0].generate_state(2)
    assert not np.array_equal(a, b)


def test_run_trial():
    success, r1, r2, rounds, profile1, profile2 = run_trial(P, 60, 0.0, seed=0, trial=0)
    assert success and r1 == r2 == 0.0
    assert rounds >= 1
    assert not profile1.any() and not profile2.any()


@pytest.mark.parametrize(
    "kwargs",
    [
        {"trials": 0},
        {"jobs": 0},
        {"eps_grid": [1.5]},
        {"M": 7},
    ],
)
def test_sweep_validation(kwargs):
    args = {"p": P, "M": 60, "eps_grid": [0.3], "trials": 2, "seed": 0, **kwargs}
    with pytest.raises(ParameterError):
        sweep_error_rate(**args)


@pytest.mark.slow
def test_waterfall_around_coupled_threshold():
    p = coupled(3, 6, 3, 6, 16, 3)
    low, high = sweep_error_rate(p, 2000, [0.25, 0.40], trials=100, seed=0, jobs=-1)
    assert low.block_error_rate <= 0.1
    assert high.block_error_rate >= 0.9
