from fractions import Fraction

import numpy as np
import pytest

from scmac.analysis.channel import (
    ChannelErasure,
    RatePair,
    effective_erasure,
    in_rate_region,
    mutual_informations,
    shannon_threshold,
    shannon_threshold_for,
)
from scmac.analysis.ensemble import DegreeProfile, coupled
from scmac.util.error import ParameterError


@pytest.mark.parametrize(
    "R1, R2, expected",
    [
        (Fraction(1, 2), Fraction(1, 2), Fraction(1, 3)),
        (Fraction(1, 2), Fraction(7, 13), Fraction(4, 13)),
        (Fraction(1, 10), Fraction(2, 5), Fraction(3, 5)),
    ],
)
def test_shannon_threshold_is_exact_on_rationals(R1, R2, expected):
    assert shannon_threshold(RatePair(R1, R2)) == expected


def test_shannon_threshold_examples_in_floating_point():
    assert shannon_threshold(RatePair(0.5, 7 / 13)) == pytest.approx(0.307692, abs=1e-6)
    assert shannon_threshold(RatePair(0.1, 0.4)) == pytest.approx(0.6)


def test_shannon_threshold_equal_rates_bound_by_sum_rate():
    # individual constraints give 1/2, the sum constraint 1/3
    eps = shannon_threshold(RatePair(Fraction(1, 2), Fraction(1, 2)))
    assert eps == 1 - Fraction(2, 3) * (Fraction(1, 2) + Fraction(1, 2))
    assert eps < Fraction(1, 2)


def test_shannon_threshold_symmetric_and_nonincreasing():
    grid = np.linspace(0, 1, 11)
    for a in grid:
        for b in grid:
            assert shannon_threshold(RatePair(a, b)) == shannon_threshold(RatePair(b, a))
            if a + 0.1 <= 1:
                assert shannon_threshold(RatePair(a + 0.1, b)) <= shannon_threshold(RatePair(a, b))


def test_shannon_threshold_clamped():
    assert shannon_threshold(RatePair(1, 1)) == 0
    assert shannon_threshold(RatePair(0, 0)) == 1


def test_shannon_threshold_for_profiles():
    assert shannon_threshold_for(DegreeProfile(3, 6, 3, 6)) == pytest.approx(1 / 3)
    assert shannon_threshold_for(DegreeProfile(5, 10, 6, 13)) == pytest.approx(0.307692, abs=1e-6)
    assert shannon_threshold_for(coupled(9, 10, 6, 10, 500, 10)) == pytest.approx(0.6)
    # design rates are smaller, so the threshold moves up
    assert shannon_threshold_for(coupled(3, 6, 3, 6, 16, 3), coupled=True) > 1 / 3
    with pytest.raises(ParameterError):
        shannon_threshold_for(DegreeProfile(3, 6, 3, 6), coupled=True)


@pytest.mark.parametrize(
    "eps, expected",
    [(0.0, (1.0, 1.5, 0.5)), (1.0, (0.0, 0.0, 0.0)), (1 / 3, (2 / 3, 1.0, 1 / 3))],
)
def test_mutual_informations(eps, expected):
    mi = mutual_informations(eps)
    assert (mi.I_cond, mi.I_joint, mi.I_single) == pytest.approx(expected)


def test_in_rate_region():
    rates = RatePair(0.5, 0.5)
    assert in_rate_region(rates, 0.3)
    assert not in_rate_region(rates, 0.4)
    assert not in_rate_region(RatePair(0.9, 0.0), 0.2)


def test_effective_erasure():
    assert effective_erasure(0.3, 0.0) == 0.3
    assert effective_erasure(0.3, 1.0) == pytest.approx(0.65)
    assert effective_erasure(1 / 3, 1.0) == pytest.approx(2 / 3)


def test_effective_erasure_monotone_on_unit_square():
    eps, mu = np.meshgrid(np.linspace(0, 1, 21), np.linspace(0, 1, 21), indexing="ij")
    values = effective_erasure(eps, mu)
    assert np.all((values >= 0) & (values <= 1))
    assert np.all(np.diff(values, axis=0) >= 0)
    assert np.all(np.diff(values, axis=1) >= 0)


@pytest.mark.parametrize("bad", [-0.1, 1.1])
def test_validation(bad):
    with pytest.raises(ParameterError):
        RatePair(bad, 0.5)
    with pytest.raises(ParameterError):
        ChannelErasure(bad)
    with pytest.raises(ParameterError):
        mutual_informations(bad)
