#!/usr/bin/env python
"""
Tests for the nested radicals and A_k
"""

import pytest
from gmpy2 import mpq

from services.mpnum import agreement_digits, rational_floor
from services.radicals import nested_radical, reduction_tangent, compute_Ak
from services.series import arctan_emi1, emi_order, tan_pq, tangent_order
from utils.precisionHandler import DomainError


def test_seed_depth():
    pair = nested_radical(0, 20)
    assert pair.seed
    assert pair.a_k.is_zero()
    assert pair.a_k_minus_1 is None


def test_first_radicals():
    one = nested_radical(1, 30)
    assert one.a_k.to_decimal_string(20) == "1.41421356237309504880"
    assert one.a_k_minus_1.is_zero()
    two = nested_radical(2, 30)
    assert two.a_k.to_decimal_string(20) == "1.84775906502257351225"
    assert two.a_k_minus_1.to_decimal_string(20) == "1.41421356237309504880"


def test_radical_arguments_are_checked():
    with pytest.raises(DomainError):
        nested_radical(-1, 20)
    with pytest.raises(DomainError):
        nested_radical(3, 9)
    with pytest.raises(DomainError):
        compute_Ak(0)


@pytest.mark.parametrize("k, expected", [(1, 1), (2, 2), (3, 5), (4, 10), (27, 85445659)])
def test_Ak_values(k, expected):
    assert compute_Ak(k) == expected


def test_Ak_tracks_inverse_pi(pi_100):
    pi = pi_100.to_rational()
    for k in list(range(2, 28)) + [60, 100]:
        approx = rational_floor(mpq(2) ** (k + 1) / pi)
        assert compute_Ak(k) in (approx, approx - 1)


def test_Ak_ratio_never_drifts_away(pi_100):
    pi = pi_100.to_rational()
    gaps = [abs(compute_Ak(k) * pi / mpq(2) ** (k + 1) - 1) for k in range(4, 28)]
    assert all(later <= earlier for earlier, later in zip(gaps, gaps[1:]))


@pytest.mark.parametrize("k", range(1, 13))
def test_reduction_tangent_is_tan_of_pi_over_power_of_two(k, pi_100):
    angle = pi_100.with_precision(80) / (2 ** (k + 1))
    expected = tan_pq(angle, tangent_order(angle, 80)).with_precision(70)
    assert agreement_digits(reduction_tangent(k, 60), expected) >= 55


def test_reduction_tangent_rejects_depth_zero():
    with pytest.raises(DomainError):
        reduction_tangent(0, 20)


@pytest.mark.parametrize("k", [1, 4, 8, 12])
def test_leading_arctan_gives_quarter_pi(k, pi_100):
    t = reduction_tangent(k, 60)
    angle = arctan_emi1(t, emi_order(t, 60))
    assert agreement_digits(angle * (2 ** (k + 1)), pi_100) >= 55
