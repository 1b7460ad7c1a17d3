import itertools

import numpy as np
import pytest

from scmac.analysis.de_single import (
    ScalarDEState,
    bp_curve_uncoupled,
    bp_exit,
    bp_threshold_uncoupled,
    check_node,
    de_step_uncoupled,
    decodes_uncoupled,
    ebp_curve_uncoupled,
    forward_fp_uncoupled,
    fp_residual_uncoupled,
    iterate_uncoupled,
    variable_node,
)
from scmac.analysis.ensemble import DegreeProfile
from scmac.util.error import ConvergenceError, ParameterError, UnsupportedProfileError

D36 = DegreeProfile(3, 6, 3, 6)


def bec_step(x: float, eps: float, l: int, r: int) -> float:
    y = 1.0 - (1.0 - x) ** (r - 1)
    return eps * y ** (l - 1)


@pytest.mark.parametrize("eps", [0.0, 0.3, 1.0])
def test_step_from_all_erased(eps):
    state = de_step_uncoupled(ScalarDEState.erased(), eps, D36)
    assert state.x1 == pytest.approx((1 + eps) / 2)
    assert state.x2 == pytest.approx((1 + eps) / 2)
    assert state.y1 == 1.0


def test_zero_is_fixed_point():
    state = de_step_uncoupled(ScalarDEState(0.0, 0.0, 0.0, 0.0), 0.7, D36)
    assert state == ScalarDEState(0.0, 0.0, 0.0, 0.0)


def test_forward_fp_below_threshold_decodes():
    fp = forward_fp_uncoupled(0.10, D36)
    assert max(fp.x1, fp.y1, fp.x2, fp.y2) < 1e-8


def test_forward_fp_at_zero_erasures_decodes():
    fp = forward_fp_uncoupled(0.0, D36)
    assert fp.max_x < 1e-8


def test_forward_fp_plateau_value():
    fp = forward_fp_uncoupled(0.3323, D36)
    assert fp.x1 == pytest.approx(0.6548, abs=1e-3)
    assert fp.x1 == fp.x2


@pytest.mark.parametrize("eps", [0.2, 0.3323, 0.5, 0.9])
def test_forward_fp_satisfies_fixed_point_equations(eps):
    tol = 1e-12
    fp = forward_fp_uncoupled(eps, D36, tol=tol)
    assert fp_residual_uncoupled(fp, eps, D36) < 10 * tol


def test_forward_fp_unequal_degrees():
    deg = DegreeProfile(5, 10, 6, 13)
    fp = forward_fp_uncoupled(0.5, deg)
    assert fp_residual_uncoupled(fp, 0.5, deg) < 1e-10
    assert fp.x1 != fp.x2


def test_forward_fp_budget_and_arguments():
    with pytest.raises(ConvergenceError):
        forward_fp_uncoupled(0.5, D36, max_iters=2)
    with pytest.raises(ParameterError):
        forward_fp_uncoupled(0.5, D36, tol=0)
    with pytest.raises(ParameterError):
        forward_fp_uncoupled(1.5, D36)


@pytest.mark.parametrize("eps", [0.05, 0.2, 0.6])
def test_forward_iteration_is_nonincreasing(eps):
    prev = ScalarDEState.erased()
    for state in itertools.islice(iterate_uncoupled(eps, DegreeProfile(4, 8, 3, 6)), 500):
        assert state.x1 <= prev.x1 and state.x2 <= prev.x2
        assert state.y1 <= prev.y1 and state.y2 <= prev.y2
        prev = state


def test_step_is_monotone_in_state_and_channel():
    low, high = ScalarDEState(0.3, 0.0, 0.4, 0.0), ScalarDEState(0.5, 0.0, 0.6, 0.0)
    deg = DegreeProfile(3, 6, 4, 8)
    for eps in (0.1, 0.4):
        a, b = de_step_uncoupled(low, eps, deg), de_step_uncoupled(high, eps, deg)
        assert a.x1 <= b.x1 and a.x2 <= b.x2
    a, b = de_step_uncoupled(low, 0.1, deg), de_step_uncoupled(low, 0.4, deg)
    assert a.x1 <= b.x1 and a.x2 <= b.x2


def test_equal_degrees_keep_users_identical():
    for state in itertools.islice(iterate_uncoupled(0.4, DegreeProfile(4, 8, 4, 8)), 200):
        assert state.x1 == state.x2
        assert state.y1 == state.y2


@pytest.mark.parametrize("eps", [0.1, 0.35, 0.8])
def test_pinned_partner_reduces_to_bec(eps):
    x = 1.0
    for _ in range(50):
        y = check_node(x, 6)
        erased_partner = variable_node(eps, y, 1.0, 3, 3)
        known_partner = variable_node(eps, y, 0.0, 3, 3)
        assert erased_partner == pytest.approx(bec_step(x, eps + (1 - eps) / 2, 3, 6), abs=1e-14)
        assert known_partner == pytest.approx(bec_step(x, eps, 3, 6), abs=1e-14)
        x = erased_partner


def test_bp_threshold_uncoupled_regular_3_6():
    assert bp_threshold_uncoupled(D36) == pytest.approx(0.12256, abs=5e-4)


@pytest.mark.parametrize("deg", [DegreeProfile(4, 8, 4, 8), DegreeProfile(5, 10, 5, 10)])
def test_bp_threshold_collapses_for_larger_degrees(deg):
    assert bp_threshold_uncoupled(deg) < 1e-3
    assert not decodes_uncoupled(1e-3, deg)


def test_bp_threshold_rejects_nonpositive_tolerance():
    with pytest.raises(ParameterError):
        bp_threshold_uncoupled(D36, tol_eps=0)


@pytest.mark.parametrize("y1, y2, expected", [(1, 1, 1.5), (1, 0, 1.0), (0, 1, 1.0), (0, 0, 0.0)])
def test_bp_exit_corners(y1, y2, expected):
    assert bp_exit(y1, y2, D36) == expected


def test_ebp_curve_end_points():
    end = ebp_curve_uncoupled(D36, [1.0])[0]
    assert end.eps == pytest.approx(1.0)
    assert end.h == pytest.approx(1.5)
    assert ebp_curve_uncoupled(D36, [0.6548])[0].eps == pytest.approx(0.3323, abs=1e-3)


def test_ebp_curve_minimum_is_bp_threshold():
    points = ebp_curve_uncoupled(D36, np.linspace(1e-3, 1.0, 100_000))
    assert min(point.eps for point in points) == pytest.approx(0.12256, abs=5e-4)


def test_ebp_curve_points_are_fixed_points():
    for point in ebp_curve_uncoupled(D36, np.linspace(0.01, 1.0, 200)):
        if not point.physical:
            continue
        y = check_node(point.x, 6)
        state = ScalarDEState(point.x, y, point.x, y)
        assert fp_residual_uncoupled(state, point.eps, D36) < 1e-12


def test_ebp_curve_flags_nonphysical_points():
    point = ebp_curve_uncoupled(D36, [1e-3])[0]
    assert point.eps > 1
    assert not point.physical


@pytest.mark.parametrize("eps", [0.2, 0.5, 0.8])
def test_ebp_curve_has_two_nontrivial_fixed_points(eps):
    curve = np.array([point.eps for point in ebp_curve_uncoupled(D36, np.linspace(1e-4, 1.0, 20_001))])
    crossings = np.count_nonzero(np.diff(np.sign(curve - eps)) != 0)
    assert crossings == 2


def test_ebp_curve_needs_equal_degrees_and_valid_grid():
    with pytest.raises(UnsupportedProfileError):
        ebp_curve_uncoupled(DegreeProfile(5, 10, 6, 13), [0.5])
    with pytest.raises(ParameterError):
        ebp_curve_uncoupled(D36, [0.0])


def test_bp_curve_uncoupled():
    curve = bp_curve_uncoupled(D36, [0.05, 0.3, 0.5, 1.0])
    values = [h for _, h in curve]
    assert values[0] < 1e-8
    assert values == sorted(values)
    assert values[-1] == pytest.approx(1.5)
