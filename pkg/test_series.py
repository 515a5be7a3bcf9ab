#!/usr/bin/env python
"""
Tests for the arctangent and tangent series and the exact tangent identities
"""

import random

import pytest
from gmpy2 import mpq

from services.mpnum import MPReal, agreement_digits
from services.series import (
    arctan_maclaurin, arctan_euler, arctan_emi1, arctan_emi, emi_order,
    tan_pq, tangent_order, tan_newton, tan_pow2_multiple, tan_nx_complex, tan_diff,
    _sin_cos_maclaurin,
)
from utils.precisionHandler import DomainError

EMI_DIGITS = [24, 41, 58, 74, 91, 107, 124, 140, 157, 173, 190, 206, 223, 239, 256]


def real(value, precision):
    return MPReal.from_rational(mpq(value), precision)


def test_maclaurin_three_terms():
    value = arctan_maclaurin(real(mpq(1, 10), 30), 3)
    assert abs(value.to_rational() - mpq(149503, 1500000)) < mpq(1, 10**28)


def test_series_need_a_term():
    x = real(mpq(1, 5), 20)
    for evaluate in (arctan_maclaurin, arctan_euler, arctan_emi1, tan_pq):
        with pytest.raises(DomainError):
            evaluate(x, 0)
    with pytest.raises(DomainError):
        arctan_emi(x, 3, 0)


def test_series_at_zero():
    zero = MPReal.zero(30)
    assert arctan_emi1(zero, 5).is_zero()
    assert arctan_emi(zero, 5, 3).is_zero()
    assert tan_pq(zero, 5).is_zero()
    assert tan_newton(zero, 3).is_zero()


def test_arctan_series_agree():
    rng = random.Random(17)
    for _ in range(200):
        x = real(mpq(rng.randint(1, 500), 1000), 40)
        maclaurin = arctan_maclaurin(x, 70)
        euler = arctan_euler(x, 70)
        emi = arctan_emi1(x, emi_order(x, 40))
        assert agreement_digits(euler, maclaurin) >= 37
        assert agreement_digits(emi, maclaurin) >= 37


def test_euler_at_one_gives_quarter_pi(pi_100):
    quarter = arctan_euler(MPReal.from_int(1, 20), 30)
    assert agreement_digits(quarter, pi_100.with_precision(30) / 4) >= 9


def test_euler_matches_maclaurin_at_one_fifth():
    x = real(mpq(1, 5), 40)
    assert agreement_digits(arctan_euler(x, 25), arctan_maclaurin(x, 40)) >= 25


def test_emi_digit_gain_per_term():
    x = real(mpq(1, 85445659), 300)
    wide = x.with_precision(350)
    reference = arctan_emi1(wide, emi_order(wide, 350))
    for n, expected in enumerate(EMI_DIGITS, start=1):
        digits = agreement_digits(arctan_emi1(x, n), reference)
        assert abs(digits - expected) <= 1, f"n={n}: {digits} digits"


def test_emi_at_one_gives_quarter_pi(pi_100):
    quarter = arctan_emi1(MPReal.from_int(1, 60), emi_order(MPReal.from_int(1, 60), 60))
    assert agreement_digits(4 * quarter, pi_100) >= 57


def test_emi_with_one_midpoint_is_emi1():
    rng = random.Random(23)
    for _ in range(10):
        x = real(mpq(rng.randint(1, 10**6), 10**6), 40)
        n = rng.randint(1, 30)
        assert arctan_emi(x, n, 1) == arctan_emi1(x, n)


def test_more_midpoints_converge_faster():
    x = real(mpq(1, 5), 60)
    reference = arctan_maclaurin(x, 60)
    one = agreement_digits(arctan_emi(x, 10, 1), reference)
    two = agreement_digits(arctan_emi(x, 10, 2), reference)
    assert two > one


def test_tan_pq_matches_newton():
    rng = random.Random(29)
    for _ in range(100):
        x = real(mpq(rng.randint(-299, 299), 1000), 50)
        series = tan_pq(x, tangent_order(x, 50))
        newton = tan_newton(x, 20)
        assert agreement_digits(newton, series.with_precision(60)) >= 45


def test_tan_newton_single_update():
    x = real(mpq(3, 10), 50)
    work = x.with_precision(53)
    atan = arctan_emi1(work, emi_order(work, 53))
    expected = work - (1 + work * work) * (atan - work)
    assert agreement_digits(tan_newton(x, 1), expected) >= 48


def test_tan_newton_half():
    x = real(mpq(1, 2), 50)
    reference = tan_pq(x.with_precision(60), 40)
    assert agreement_digits(tan_newton(x, 8), reference) >= 45


def test_tan_newton_rejects_pole():
    with pytest.raises(DomainError):
        tan_newton(real(mpq(16, 10), 30), 5)


def test_tan_of_arctan_returns_argument():
    rng = random.Random(31)
    for _ in range(10):
        x = real(mpq(rng.randint(1, 200), 1000), 50)
        big = emi_order(x, 60)
        angle = arctan_emi1(x.with_precision(60), big)
        back = tan_pq(angle, tangent_order(angle, 60))
        assert agreement_digits(back.with_precision(50), x.with_precision(60)) >= 47


def test_sin_cos_partial_sums():
    x = real(mpq(2, 5), 40)
    sin, cos = _sin_cos_maclaurin(x, 30)
    assert abs((sin * sin + cos * cos).to_rational() - 1) < mpq(1, 10**37)
    assert agreement_digits(sin / cos, tan_pq(x, 30).with_precision(45)) >= 37


def test_half_angle_form_equals_sin_over_cos():
    rng = random.Random(31)
    for _ in range(50):
        x = real(mpq(rng.choice([-1, 1]) * rng.randint(1, 500), 1000), 30)
        sin, cos = _sin_cos_maclaurin(x.with_precision(40), 30)
        assert agreement_digits(tan_pq(x, 30), (sin / cos).with_precision(40)) >= 27


def test_tan_pq_tiny_argument_first_order():
    delta = MPReal(1, -100, 400)
    assert agreement_digits(tan_pq(delta, 1), tan_pq(delta, 5)) >= 299


def test_tangent_doubling():
    assert tan_pow2_multiple(mpq(1, 10), 3) == mpq(74455920, 72697201)
    assert tan_pow2_multiple(mpq(1, 10), 0) == mpq(1, 10)


def test_tangent_multiple_by_complex_powers():
    assert tan_nx_complex(mpq(1, 10), 8) == mpq(74455920, 72697201)
    assert tan_nx_complex(mpq(1, 5), 4) == tan_pow2_multiple(mpq(1, 5), 2)
    assert tan_nx_complex(mpq(1, 7), 3) == mpq(1, 7) * (3 - mpq(1, 49)) / (1 - 3 * mpq(1, 49))


def test_tangent_difference():
    assert tan_diff(mpq(74455920, 72697201), mpq(1, 84)) == mpq(6181600079, 6181020804)
    assert tan_diff(mpq(1, 3), mpq(1, 3)) == 0


def test_tangent_poles():
    with pytest.raises(DomainError, match="doubling 1"):
        tan_pow2_multiple(mpq(1), 1)
    with pytest.raises(DomainError):
        tan_nx_complex(mpq(1), 2)
    with pytest.raises(DomainError):
        tan_diff(mpq(2), mpq(-1, 2))
    with pytest.raises(DomainError):
        tan_pow2_multiple(mpq(1, 3), -1)
