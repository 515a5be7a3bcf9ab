#!/usr/bin/env python
"""
Tests for the big-number layer
"""

import random

import pytest
from gmpy2 import mpq

from services.mpnum import (
    MPReal, GaussianRational, gauss_pow, parse_rational, format_rational,
    rational_floor, sqrt, floor_to_int, agreement_digits, ln, log10,
)
from utils.precisionHandler import DomainError, FloorAmbiguityError


def test_mpreal_strips_trailing_zeros():
    x = MPReal(1200, 0, 10)
    assert (x.mantissa, x.exponent) == (12, 2)


def test_mpreal_truncates_toward_zero():
    assert str(MPReal(123456789, 0, 5)) == "12345e4@5"
    assert str(MPReal(-987654, 0, 3)) == "-987e3@3"


def test_serialization_parses_back():
    x = MPReal.from_rational(mpq(-22, 7), 25)
    y = MPReal.parse(str(x))
    assert y == x and y.precision == 25


def test_small_integer_sum_is_exact():
    total = MPReal.from_int(1, 10) + MPReal.from_int(2, 10)
    assert total == 3
    assert total.precision == 10


def test_multiplying_by_zero():
    x = MPReal.from_rational(mpq(355, 113), 40)
    assert (x * 0).is_zero()


def test_one_third_has_fifty_threes():
    third = MPReal.from_int(1, 50) / MPReal.from_int(3, 50)
    assert str(third) == "3" * 50 + "e-50@50"


def test_result_precision_is_the_minimum():
    a = MPReal.from_int(1, 10)
    b = MPReal.from_int(7, 20)
    assert (a / b).precision == 10
    assert (a * 123456789012345).precision == 10


def test_division_by_zero_is_a_domain_error():
    with pytest.raises(DomainError):
        MPReal.from_int(1, 10) / MPReal.zero(10)


def test_rational_recovery_after_multiplication():
    # truncating p/q costs under q ulps of x, which is under 10 ulps of p;
    # the multiplication truncates once more
    rng = random.Random(11)
    for _ in range(500):
        p = rng.randint(-10**6, 10**6)
        q = rng.randint(1, 10**6)
        x = MPReal.from_rational(mpq(p, q), 50)
        back = x * q
        assert abs(back.to_rational() - p) < 11 * mpq(10) ** back.ulp_exponent


def test_equal_values_hash_alike():
    three = MPReal.from_int(3, 20)
    quarter = MPReal.from_rational(mpq(1, 4), 20)
    assert three == 3 and hash(three) == hash(3) == hash(mpq(3))
    assert quarter == mpq(1, 4) and hash(quarter) == hash(mpq(1, 4))
    assert hash(three) == hash(MPReal.from_int(3, 60))
    assert len({three, 3, MPReal.from_int(3, 40)}) == 1


def test_sqrt_of_perfect_square_is_exact():
    assert sqrt(MPReal.from_int(4, 40)) == 2
    assert sqrt(MPReal.zero(20)).is_zero()


def test_sqrt_two():
    r = sqrt(MPReal.from_int(2, 30))
    assert r.to_decimal_string(29) == "1.41421356237309504880168872420"
    error = abs((r * r).to_rational() - 2)
    assert error < mpq(1, 10**28)


def test_sqrt_is_truncated_root():
    rng = random.Random(3)
    for _ in range(200):
        a = MPReal(rng.randint(1, 10**12), -6, 60)
        r = sqrt(a)
        exact = a.to_rational()
        ulp = mpq(10) ** r.ulp_exponent
        assert r.to_rational() ** 2 <= exact < (r.to_rational() + ulp) ** 2


def test_sqrt_of_negative():
    with pytest.raises(DomainError):
        sqrt(MPReal.from_int(-1, 10))


def test_floor_of_clear_values():
    assert floor_to_int(MPReal.from_decimal_string("10.469", 10)) == 10
    assert floor_to_int(MPReal.from_decimal_string("-1.5", 10)) == -2


def test_floor_near_integer_asks_for_precision():
    near_three = MPReal.from_decimal_string("2.99999999999999", 15)
    with pytest.raises(FloorAmbiguityError) as info:
        floor_to_int(near_three)
    assert info.value.needed_precision == 30


def test_floor_escalation_callback():
    requested = []

    def recompute(precision):
        requested.append(precision)
        return MPReal.from_decimal_string("2.999999999999990001", precision)

    near_three = MPReal.from_decimal_string("2.99999999999999", 15)
    assert floor_to_int(near_three, escalate=recompute) == 2
    assert requested == [30]


def test_gauss_pow_values():
    z = GaussianRational(5, 1)
    assert gauss_pow(z, 4) == GaussianRational(476, 480)
    assert gauss_pow(z, 0) == GaussianRational.one()
    assert gauss_pow(z, 4) * gauss_pow(GaussianRational(239, 1), -1) == GaussianRational(2, 2)


def test_gauss_pow_zero_base_negative_exponent():
    with pytest.raises(DomainError):
        gauss_pow(GaussianRational(0, 0), -2)


def test_gauss_pow_adds_exponents():
    rng = random.Random(5)
    z = GaussianRational(mpq(3, 2), mpq(-2, 5))
    for _ in range(20):
        m, n = rng.randint(-20, 20), rng.randint(-20, 20)
        assert gauss_pow(z, m + n) == gauss_pow(z, m) * gauss_pow(z, n)


def test_rationals_are_reduced():
    assert parse_rational("-294306242/3517438") == parse_rational("-147153121/1758719")
    assert format_rational(parse_rational("-294306242/3517438")) == "-147153121/1758719"
    assert format_rational(mpq(10, 2)) == "5"


def test_rational_floor_goes_down():
    assert rational_floor(mpq(-147153121, 1758719)) == -84
    assert rational_floor(mpq(7, 2)) == 3


def test_agreement_digits(pi_100):
    assert agreement_digits(MPReal.from_decimal_string("3.1415", 5), pi_100) == 4
    assert agreement_digits(MPReal.from_int(3, 1), pi_100) == 0
    same = pi_100.with_precision(60)
    ref = MPReal(same.mantissa, same.exponent, 80)
    assert agreement_digits(same, ref) == 80


def test_truncated_seed_counts_its_decimals(pi_100):
    seed = pi_100.with_precision(51)
    assert agreement_digits(seed, pi_100) == 50


def test_logarithms():
    assert abs((log10(MPReal.from_int(1000, 20)) - 3).to_rational()) < mpq(1, 10**18)
    ln2 = ln(MPReal.from_int(2, 30))
    ref = MPReal.from_decimal_string("0.693147180559945309417232121458176568", 36)
    assert agreement_digits(ln2, ref) >= 28


def test_logarithm_of_non_positive():
    with pytest.raises(DomainError):
        ln(MPReal.zero(10))
