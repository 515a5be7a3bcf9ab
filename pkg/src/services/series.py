#!/usr/bin/env python3
"""
Truncated series for the arctangent and the tangent, and exact rational
multi-angle tangent identities.

Every evaluator works at the precision carried by its argument and returns a
value with that precision. Truncation orders are always supplied by the
caller; ``emi_order`` and ``tangent_order`` estimate orders that reach a
given precision.
"""

import sys
import os
import math
import logging
from dataclasses import dataclass
from typing import Tuple

# Add parent directory to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from services.mpnum import (
    MPReal, BigInt, BigRational, GaussianRational, gauss_pow, format_rational, log10,
)
from utils.precisionHandler import DomainError, ConvergenceError, ConsistencyError

logger = logging.getLogger('series')

# Digits carried beyond the argument's precision inside a summation
SUM_GUARD = 3

HALF_PI_TEXT = "1.57079632679489661923132169163975144209858469968755"


def _work(x: MPReal) -> MPReal:
    return x.with_precision(x.precision + SUM_GUARD)


# ---------------------------------------------------------------------------
# Arctangent
# ---------------------------------------------------------------------------

def arctan_maclaurin(x: MPReal, N: int) -> MPReal:
    """Partial sum x - x**3/3 + x**5/5 - ... with N terms."""
    if N < 1:
        raise DomainError(f"arctan_maclaurin: need at least one term, got {N}")
    if x.is_zero():
        return x
    w = _work(x)
    x2 = w * w
    power = w
    total = w
    for n in range(1, N):
        power = -(power * x2)
        total = total + power / (2 * n + 1)
    return total.with_precision(x.precision)


def arctan_euler(x: MPReal, N: int) -> MPReal:
    """
    Euler's series with N terms

    t_0 = x / (1 + x**2) and t_n = t_{n-1} * 2n/(2n+1) * x**2/(1 + x**2).
    """
    if N < 1:
        raise DomainError(f"arctan_euler: need at least one term, got {N}")
    if x.is_zero():
        return x
    w = _work(x)
    x2 = w * w
    one_plus = x2 + 1
    ratio = x2 / one_plus
    term = w / one_plus
    total = term
    for n in range(1, N):
        term = term * ratio * (2 * n) / (2 * n + 1)
        total = total + term
    return total.with_precision(x.precision)


@dataclass
class EmiCoeffState:
    """
    Coefficients of one EMI component

    g + i*h is multiplied by (1 - i*inv)**2 at every step, where inv = 2/x for
    the single-component series.
    """
    g: MPReal
    h: MPReal
    n: int = 1

    def advance(self, damping: MPReal, cross: MPReal) -> None:
        self.g, self.h = (self.g * damping + cross * self.h,
                          self.h * damping - cross * self.g)
        self.n += 1


def _emi_component(inv: MPReal, N: int, base: int) -> MPReal:
    """
    sum_{n=1..N} g_n / ((2n-1) * base**(2n-1) * (g_n**2 + h_n**2))

    Args:
        inv: Initial g, i.e. 1/(x*t) for the midpoint t
        N: Number of terms
        base: 2m - 1 for the m-th midpoint
    """
    state = EmiCoeffState(g=inv, h=MPReal.exact_int(1, inv.precision))
    damping = 1 - inv * inv
    cross = 2 * inv
    total = MPReal.zero(inv.precision)
    scale = BigInt(base)
    base_sq = BigInt(base) ** 2
    while True:
        denominator = (2 * state.n - 1) * scale
        total = total + state.g / ((state.g * state.g + state.h * state.h) * denominator)
        if state.n >= N:
            return total
        state.advance(damping, cross)
        scale = scale * base_sq


def arctan_emi1(x: MPReal, N: int) -> MPReal:
    """
    Single-midpoint EMI series with N terms

    Each term is smaller than the previous one by a factor 1 + 4/x**2, so at
    x = 1/beta every term adds about log10(4 beta**2) digits.
    """
    if N < 1:
        raise DomainError(f"arctan_emi1: need at least one term, got {N}")
    if x.is_zero():
        return x
    w = _work(x)
    inv = 2 / (w * 1)
    return (2 * _emi_component(inv, N, 1)).with_precision(x.precision)


def arctan_emi(x: MPReal, N: int, M: int) -> MPReal:
    """
    EMI series over M midpoints t_m = (m - 1/2)/M with N terms each

    Args:
        x: Argument
        N: Terms per midpoint
        M: Number of midpoints

    Returns:
        arctan(x) approximation; M = 1 gives exactly arctan_emi1(x, N)
    """
    if N < 1 or M < 1:
        raise DomainError(f"arctan_emi: N and M must be positive, got N={N}, M={M}")
    if x.is_zero():
        return x
    w = _work(x)
    total = MPReal.zero(w.precision)
    for m in range(1, M + 1):
        inv = (2 * M) / (w * (2 * m - 1))
        total = total + _emi_component(inv, N, 2 * m - 1)
    return (2 * total).with_precision(x.precision)


def emi_order(x: MPReal, precision: int) -> int:
    """Number of arctan_emi1 terms that reaches ``precision`` digits at x."""
    if x.is_zero():
        return 1
    rough = x.with_precision(15)
    gain = log10(1 + 4 / (rough * rough))
    return int((MPReal.exact_int(precision, 15) / gain).to_rational()) + 2


# ---------------------------------------------------------------------------
# Tangent
# ---------------------------------------------------------------------------

@dataclass
class TanPQState:
    """
    Partial sums of sin(x) (p) and sin(2x) (q) sharing the terms r_n

    r_n = (-1)**n x**(2n+1) / (2n+1)!
    """
    p: MPReal
    q: MPReal
    r: MPReal
    n: int = 0

    @classmethod
    def start(cls, x: MPReal) -> "TanPQState":
        zero = MPReal.zero(x.precision)
        return cls(p=zero, q=zero, r=x)

    def advance(self, x2: MPReal) -> None:
        self.n += 1
        self.p = self.p + self.r
        self.q = self.q + self.r * (BigInt(2) ** (2 * self.n - 1))
        self.r = -(self.r * x2) / ((2 * self.n) * (2 * self.n + 1))

    def value(self) -> MPReal:
        if self.q.is_zero():
            raise DomainError("tan_pq: denominator series vanished")
        return 2 * self.p * self.p / self.q


def tan_pq(x: MPReal, N: int) -> MPReal:
    """
    tan(x) = 2 sin(x)**2 / sin(2x) with both sines truncated after N terms

    Args:
        x: Argument (small after argument reduction)
        N: Truncation order

    Returns:
        Tangent approximation at the precision of x
    """
    if N < 1:
        raise DomainError(f"tan_pq: need at least one term, got {N}")
    if x.is_zero():
        return x
    w = _work(x)
    x2 = w * w
    state = TanPQState.start(w)
    for _ in range(N):
        state.advance(x2)
    return state.value().with_precision(x.precision)


def tangent_order(x: MPReal, precision: int) -> int:
    """Smallest N for which tan_pq(x, N) is truncated below 10**-precision relative."""
    if x.is_zero():
        return 1
    # upper bound on log10|x|
    top = x.magnitude
    log_fact = 0.0
    n = 0
    while True:
        n += 1
        log_fact += math.log10(2 * n) + math.log10(2 * n + 1)
        if 2 * n * top - log_fact < -precision - 2:
            return n


def _sin_cos_maclaurin(x: MPReal, N: int) -> Tuple[MPReal, MPReal]:
    """Partial sums of sin and cos with N terms each."""
    w = _work(x)
    x2 = w * w
    sin_term, cos_term = w, MPReal.exact_int(1, w.precision)
    sin_sum, cos_sum = sin_term, cos_term
    for n in range(1, N):
        sin_term = -(sin_term * x2) / ((2 * n) * (2 * n + 1))
        cos_term = -(cos_term * x2) / ((2 * n - 1) * (2 * n))
        sin_sum = sin_sum + sin_term
        cos_sum = cos_sum + cos_term
    return sin_sum.with_precision(x.precision), cos_sum.with_precision(x.precision)


def tan_newton(x: MPReal, iterations: int) -> MPReal:
    """
    Newton's method on arctan(s) = x

    s_1 = x, then s <- s - (1 + s**2)(arctan(s) - x) for ``iterations`` updates.
    The arctangent is the EMI series with enough terms for the precision of x.

    Args:
        x: Argument, |x| < pi/2
        iterations: Number of updates

    Returns:
        Tangent approximation at the precision of x
    """
    if x.is_zero():
        return x
    half_pi = MPReal.from_decimal_string(HALF_PI_TEXT, 30)
    distance = half_pi - abs(x.with_precision(30))
    if distance.sign <= 0:
        raise DomainError(f"tan_newton: |x| = {abs(x)} is not below pi/2")
    bound = 10 / distance

    w = _work(x)
    s = w
    for step in range(1, iterations + 1):
        atan = arctan_emi1(s, emi_order(s, w.precision))
        s = s - (1 + s * s) * (atan - w)
        if abs(s) > bound:
            raise ConvergenceError(f"tan_newton: diverged at update {step}, |s| > {bound.to_decimal_string(3)}")
    return s.with_precision(x.precision)


# ---------------------------------------------------------------------------
# Exact rational identities
# ---------------------------------------------------------------------------

def tan_pow2_multiple(x: BigRational, doublings: int) -> BigRational:
    """
    Exact tan(2**doublings * arctan(x)) by repeated doubling

    Args:
        x: Rational tangent
        doublings: Number of angle doublings (>= 0)

    Returns:
        The rational tangent
    """
    if doublings < 0:
        raise DomainError(f"tan_pow2_multiple: doublings must be non-negative, got {doublings}")
    value = BigRational(x)
    for j in range(1, doublings + 1):
        square = value * value
        if square == 1:
            raise DomainError(f"tan_pow2_multiple: pole at doubling {j} "
                              f"(tangent {format_rational(value)})")
        value = 2 * value / (1 - square)
    return value


def tan_nx_complex(x: BigRational, n: BigInt) -> BigRational:
    """
    Exact tan(n * arctan(x)) = 2i(1 - ix)**n / ((1 - ix)**n + (1 + ix)**n) - i

    Args:
        x: Rational tangent
        n: Integer multiple

    Returns:
        The rational tangent
    """
    lower = gauss_pow(GaussianRational(1, -BigRational(x)), n)
    upper = gauss_pow(GaussianRational(1, BigRational(x)), n)
    denominator = lower + upper
    if denominator.is_zero():
        raise DomainError(f"tan_nx_complex: pole at n={n}, x={format_rational(x)}")
    i = GaussianRational.i()
    result = 2 * i * lower / denominator - i
    if result.im != 0:
        raise ConsistencyError(f"tan_nx_complex: imaginary residue {format_rational(result.im)}")
    return result.re


def tan_diff(ta: BigRational, tb: BigRational) -> BigRational:
    """tan(a - b) from tan(a) and tan(b)."""
    ta, tb = BigRational(ta), BigRational(tb)
    denominator = 1 + ta * tb
    if denominator == 0:
        raise DomainError(f"tan_diff: 1 + ta*tb vanishes for {format_rational(ta)}, {format_rational(tb)}")
    return (ta - tb) / denominator
