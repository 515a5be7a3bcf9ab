#!/usr/bin/env python3
"""
Arbitrary-precision integer, rational, Gaussian rational and decimal real arithmetic.

BigInt and BigRational are the gmpy2 ``mpz`` and ``mpq`` types. MPReal is a
decimal floating value ``mantissa * 10**exponent`` tagged with a precision in
significant decimal digits. Results are truncated toward zero, so every
operation is correct to one unit in the last retained digit.
"""

import sys
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple, Union

# Add parent directory to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import gmpy2
from gmpy2 import mpz, mpq

from utils.precisionHandler import DomainError, FloorAmbiguityError

# Decimal strings of rationals easily exceed the default int->str limit
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

BigInt = gmpy2.mpz
BigRational = gmpy2.mpq

IntLike = Union[int, "gmpy2.mpz"]

# Floors closer than this many ulps to an integer are refused
FLOOR_GUARD_ULPS = 10


@lru_cache(maxsize=512)
def _pow10(n: int) -> "mpz":
    return mpz(10) ** n


def _num_digits(n) -> int:
    """Exact count of decimal digits of |n| (0 for zero)."""
    n = abs(n)
    if n == 0:
        return 0
    d = gmpy2.num_digits(n, 10)
    # num_digits may overestimate by one
    if d > 1 and n < _pow10(d - 1):
        d -= 1
    return d


def _shift(m, s: int):
    """m * 10**s, truncated toward zero when s < 0."""
    if s >= 0:
        return m * _pow10(s)
    return gmpy2.t_div(m, _pow10(-s))


def _isqrt_newton(n) -> "mpz":
    """
    Floor square root of a natural number.

    Newton steps on r**2 - n where each step doubles the number of correct
    leading bits, starting from a one-bit estimate.
    """
    if n < 0:
        raise DomainError("square root of a negative integer")
    n = mpz(n)
    if n == 0:
        return mpz(0)
    c = (n.bit_length() - 1) // 2
    a = mpz(1)
    d = 0
    for s in reversed(range(c.bit_length())):
        e = d
        d = c >> s
        a = (a << (d - e - 1)) + (n >> (2 * c - e - d + 1)) // a
    if a * a > n:
        a -= 1
    return a


# ---------------------------------------------------------------------------
# BigInt / BigRational helpers
# ---------------------------------------------------------------------------

def parse_int(text: str) -> "mpz":
    """Parse a decimal integer string of any size."""
    try:
        return mpz(text.strip())
    except (ValueError, TypeError) as e:
        raise DomainError(f"not a decimal integer: {text!r}") from e


def format_int(value) -> str:
    return str(mpz(value))


def parse_rational(text: str) -> "mpq":
    """
    Parse ``"num/den"`` or ``"num"`` into a reduced rational.

    Args:
        text: Decimal rational string, e.g. "-147153121/1758719"

    Returns:
        Reduced BigRational
    """
    text = text.strip()
    if "/" in text:
        num_text, den_text = text.split("/", 1)
        num, den = parse_int(num_text), parse_int(den_text)
        if den == 0:
            raise DomainError(f"zero denominator in {text!r}")
        return mpq(num, den)
    return mpq(parse_int(text))


def format_rational(value) -> str:
    """Serialize a rational as ``"num/den"`` (just ``"num"`` for integers)."""
    value = mpq(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rational_floor(value) -> "mpz":
    """Greatest integer not exceeding the rational (toward -infinity)."""
    value = mpq(value)
    return gmpy2.f_div(value.numerator, value.denominator)


def is_integer(value) -> bool:
    return mpq(value).denominator == 1


def digit_count(value) -> int:
    """Decimal digits of |value| for an integer (0 for zero)."""
    return _num_digits(mpz(value))


# ---------------------------------------------------------------------------
# GaussianRational
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianRational:
    """Complex number with exact rational parts."""
    re: "mpq"
    im: "mpq"

    def __post_init__(self):
        object.__setattr__(self, "re", mpq(self.re))
        object.__setattr__(self, "im", mpq(self.im))

    @classmethod
    def one(cls) -> "GaussianRational":
        return cls(mpq(1), mpq(0))

    @classmethod
    def i(cls) -> "GaussianRational":
        return cls(mpq(0), mpq(1))

    @classmethod
    def lift(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        return cls(mpq(value), mpq(0))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def norm(self) -> "mpq":
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        if self.is_zero():
            raise DomainError("inverse of the zero Gaussian rational")
        n = self.norm()
        return GaussianRational(self.re / n, -self.im / n)

    def __add__(self, other) -> "GaussianRational":
        other = GaussianRational.lift(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other) -> "GaussianRational":
        other = GaussianRational.lift(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> "GaussianRational":
        return GaussianRational.lift(other) - self

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other) -> "GaussianRational":
        other = GaussianRational.lift(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "GaussianRational":
        return self * GaussianRational.lift(other).inverse()

    def __rtruediv__(self, other) -> "GaussianRational":
        return GaussianRational.lift(other) * self.inverse()

    def __str__(self) -> str:
        sign = "-" if self.im < 0 else "+"
        return f"{format_rational(self.re)} {sign} {format_rational(abs(self.im))}i"


def gauss_pow(z: GaussianRational, e: IntLike) -> GaussianRational:
    """
    Exact integer power of a Gaussian rational by binary exponentiation

    Args:
        z: Base
        e: Exponent (negative exponents invert the base exactly first)

    Returns:
        z**e with reduced parts
    """
    e = int(e)
    if e < 0:
        if z.is_zero():
            raise DomainError("zero Gaussian rational raised to a negative power")
        z = z.inverse()
        e = -e

    result = GaussianRational.one()
    for bit in bin(e)[2:]:
        result = result * result
        if bit == "1":
            result = result * z
    return result


# ---------------------------------------------------------------------------
# MPReal
# ---------------------------------------------------------------------------

class MPReal:
    """Immutable decimal floating value tagged with its precision."""

    __slots__ = ("mantissa", "exponent", "precision")

    def __init__(self, mantissa, exponent: int = 0, precision: int = 30):
        if precision < 1:
            raise DomainError(f"precision must be positive, got {precision}")
        mantissa = mpz(mantissa)
        exponent = int(exponent)
        if mantissa == 0:
            exponent = 0
        else:
            d = _num_digits(mantissa)
            if d > precision:
                mantissa = gmpy2.t_div(mantissa, _pow10(d - precision))
                exponent += d - precision
            stripped, zeros = gmpy2.remove(abs(mantissa), 10)
            if zeros:
                mantissa = stripped if mantissa > 0 else -stripped
                exponent += int(zeros)
        object.__setattr__(self, "mantissa", mantissa)
        object.__setattr__(self, "exponent", exponent)
        object.__setattr__(self, "precision", int(precision))

    def __setattr__(self, name, value):
        raise AttributeError("MPReal is immutable")

    # -- construction ------------------------------------------------------

    @classmethod
    def from_int(cls, value: IntLike, precision: int) -> "MPReal":
        return cls(mpz(value), 0, precision)

    @classmethod
    def from_rational(cls, value, precision: int) -> "MPReal":
        value = mpq(value)
        num, den = value.numerator, value.denominator
        if num == 0:
            return cls.zero(precision)
        s = precision + _num_digits(den) - _num_digits(num) + 2
        if s >= 0:
            q = gmpy2.t_div(num * _pow10(s), den)
        else:
            q = gmpy2.t_div(num, den * _pow10(-s))
        return cls(q, -s, precision)

    @classmethod
    def exact_int(cls, value: IntLike, precision: int) -> "MPReal":
        """An integer tagged with at least enough precision to hold it exactly."""
        value = mpz(value)
        return cls(value, 0, max(precision, _num_digits(value), 1))

    @classmethod
    def from_decimal_string(cls, text: str, precision: int) -> "MPReal":
        """Parse plain decimal text such as ``"-3.1415"`` or ``"1.5e-3"``."""
        text = text.strip().lower()
        exp = 0
        if "e" in text:
            text, exp_text = text.split("e", 1)
            exp = int(exp_text)
        if "." in text:
            whole, frac = text.split(".", 1)
        else:
            whole, frac = text, ""
        negative = whole.startswith("-")
        whole = whole.lstrip("+-") or "0"
        digits = parse_int(whole + frac) if (whole + frac) else mpz(0)
        if negative:
            digits = -digits
        return cls(digits, exp - len(frac), precision)

    @classmethod
    def parse(cls, text: str) -> "MPReal":
        """Parse the ``<mantissa>e<exponent10>@<precision>`` serialization."""
        try:
            body, prec_text = text.strip().split("@", 1)
            mant_text, exp_text = body.split("e", 1)
            return cls(parse_int(mant_text), int(exp_text), int(prec_text))
        except ValueError as e:
            raise DomainError(f"not an MPReal serialization: {text!r}") from e

    @classmethod
    def zero(cls, precision: int) -> "MPReal":
        return cls(0, 0, precision)

    # -- properties ----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.mantissa == 0

    @property
    def sign(self) -> int:
        return (self.mantissa > 0) - (self.mantissa < 0)

    @property
    def digits(self) -> int:
        return _num_digits(self.mantissa)

    @property
    def magnitude(self) -> int:
        """e such that 10**(e-1) <= |x| < 10**e (zero maps to -precision)."""
        if self.mantissa == 0:
            return -self.precision
        return self.exponent + self.digits

    @property
    def ulp_exponent(self) -> int:
        return self.magnitude - self.precision

    def with_precision(self, precision: int) -> "MPReal":
        """Re-tag with another precision, truncating when it is lower."""
        return MPReal(self.mantissa, self.exponent, precision)

    def to_rational(self) -> "mpq":
        if self.exponent >= 0:
            return mpq(self.mantissa * _pow10(self.exponent))
        return mpq(self.mantissa, _pow10(-self.exponent))

    def to_decimal_string(self, places: int) -> str:
        """Fixed-point text truncated to ``places`` decimals."""
        scaled = _shift(self.mantissa, self.exponent + places)
        negative = scaled < 0
        text = str(abs(scaled)).rjust(places + 1, "0")
        if places > 0:
            text = f"{text[:-places]}.{text[-places:]}"
        return ("-" if negative else "") + text

    # -- operators -----------------------------------------------------------

    def _coerce(self, other) -> "MPReal":
        if isinstance(other, MPReal):
            return other
        if isinstance(other, (int, type(mpz(0)))):
            return MPReal.exact_int(other, self.precision)
        if isinstance(other, type(mpq(0))):
            return MPReal.from_rational(other, self.precision + 2)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return sub(other, self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return div(self, other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return div(other, self)

    def __neg__(self) -> "MPReal":
        return MPReal(-self.mantissa, self.exponent, self.precision)

    def __abs__(self) -> "MPReal":
        return MPReal(abs(self.mantissa), self.exponent, self.precision)

    def _compare(self, other) -> int:
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare MPReal with {type(other).__name__}")
        if self.sign != other.sign:
            return (self.sign > other.sign) - (self.sign < other.sign)
        if self.sign == 0:
            return 0
        if self.magnitude != other.magnitude:
            bigger = self.magnitude > other.magnitude
            return self.sign if bigger else -self.sign
        e = min(self.exponent, other.exponent)
        a = self.mantissa * _pow10(self.exponent - e)
        b = other.mantissa * _pow10(other.exponent - e)
        return (a > b) - (a < b)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (MPReal, int, type(mpz(0)), type(mpq(0)))):
            return NotImplemented
        return self._compare(other) == 0

    def __lt__(self, other) -> bool:
        return self._compare(other) < 0

    def __le__(self, other) -> bool:
        return self._compare(other) <= 0

    def __gt__(self, other) -> bool:
        return self._compare(other) > 0

    def __ge__(self, other) -> bool:
        return self._compare(other) >= 0

    def __hash__(self) -> int:
        # equal values hash alike across MPReal, int, mpz and mpq
        return hash(self.to_rational())

    def __str__(self) -> str:
        return f"{self.mantissa}e{self.exponent}@{self.precision}"

    def __repr__(self) -> str:
        return f"MPReal({self})"


# ---------------------------------------------------------------------------
# Arithmetic
# ---------------------------------------------------------------------------

def add(a: MPReal, b: MPReal) -> MPReal:
    """Sum truncated to min(precision) digits."""
    p = min(a.precision, b.precision)
    if a.is_zero():
        return b.with_precision(p)
    if b.is_zero():
        return a.with_precision(p)
    ta, tb = a.magnitude, b.magnitude
    # an operand entirely below the result's last digit moves it by < 1 ulp
    if ta < tb - p - 2:
        return b.with_precision(p)
    if tb < ta - p - 2:
        return a.with_precision(p)
    e = min(a.exponent, b.exponent)
    m = a.mantissa * _pow10(a.exponent - e) + b.mantissa * _pow10(b.exponent - e)
    return MPReal(m, e, p)


def sub(a: MPReal, b: MPReal) -> MPReal:
    return add(a, -b)


def mul(a: MPReal, b: MPReal) -> MPReal:
    return MPReal(a.mantissa * b.mantissa, a.exponent + b.exponent,
                  min(a.precision, b.precision))


def div(a: MPReal, b: MPReal) -> MPReal:
    """Quotient truncated to min(precision) digits."""
    p = min(a.precision, b.precision)
    if b.is_zero():
        raise DomainError("division by a value indistinguishable from zero")
    if a.is_zero():
        return MPReal.zero(p)
    s = p + b.digits - a.digits + 2
    if s >= 0:
        q = gmpy2.t_div(a.mantissa * _pow10(s), b.mantissa)
    else:
        q = gmpy2.t_div(a.mantissa, b.mantissa * _pow10(-s))
    return MPReal(q, a.exponent - b.exponent - s, p)


def sqrt(a: MPReal) -> MPReal:
    """Square root truncated to the precision of ``a``."""
    if a.sign < 0:
        raise DomainError("square root of a negative value")
    p = a.precision
    if a.is_zero():
        return MPReal.zero(p)
    s = max(0, 2 * p + 2 - a.digits)
    if (a.exponent - s) % 2:
        s += 1
    root = _isqrt_newton(a.mantissa * _pow10(s))
    return MPReal(root, (a.exponent - s) // 2, p)


def floor_to_int(a: MPReal,
                 escalate: Optional[Callable[[int], MPReal]] = None,
                 max_escalations: int = 12) -> "mpz":
    """
    Greatest integer not exceeding ``a``, refusing values too close to an integer

    Args:
        a: Value to floor
        escalate: Callback recomputing the value at a given precision
        max_escalations: Maximum number of callback invocations

    Returns:
        The floor as a BigInt
    """
    for _ in range(max_escalations + 1):
        floor_value, ambiguous = _checked_floor(a)
        if not ambiguous:
            return floor_value
        needed = 2 * a.precision
        if escalate is None:
            raise FloorAmbiguityError(
                f"value {a} lies within {FLOOR_GUARD_ULPS} ulp of an integer", needed)
        a = escalate(needed)
    raise FloorAmbiguityError(
        f"floor still ambiguous after {max_escalations} escalations", 2 * a.precision)


def _checked_floor(a: MPReal) -> Tuple["mpz", bool]:
    if a.exponent >= 0:
        return a.mantissa * _pow10(a.exponent), True
    unit = _pow10(-a.exponent)
    floor_value = gmpy2.f_div(a.mantissa, unit)
    below = a.mantissa - floor_value * unit
    distance = min(below, unit - below)
    # distance * 10**exponent <= FLOOR_GUARD_ULPS * 10**ulp_exponent
    scale = a.ulp_exponent - a.exponent
    if scale >= 0:
        ambiguous = distance <= FLOOR_GUARD_ULPS * _pow10(scale)
    else:
        ambiguous = distance * _pow10(-scale) <= FLOOR_GUARD_ULPS
    return floor_value, ambiguous


def agreement_digits(a: MPReal, ref: MPReal) -> int:
    """
    Number of digits to which ``a`` agrees with the reference

    Args:
        a: Approximation
        ref: Reference value, held at a strictly higher precision

    Returns:
        |e| where |ref - a| = m * 10**e with 0.1 <= m < 1, or the reference
        precision when the difference vanishes at that precision
    """
    e = min(a.exponent, ref.exponent)
    diff = ref.mantissa * _pow10(ref.exponent - e) - a.mantissa * _pow10(a.exponent - e)
    if diff == 0:
        return ref.precision
    magnitude = _num_digits(diff) + e
    if magnitude <= ref.ulp_exponent:
        return ref.precision
    return abs(magnitude)


# ---------------------------------------------------------------------------
# Logarithms
# ---------------------------------------------------------------------------

def _atanh_series(u: MPReal) -> MPReal:
    """atanh(u) for |u| <= 1/3 by its odd power series."""
    total = u
    if u.is_zero():
        return total
    power = u
    u2 = u * u
    n = 1
    while True:
        power = power * u2
        term = power / (2 * n + 1)
        if term.is_zero() or term.magnitude < total.magnitude - total.precision - 1:
            return total
        total = total + term
        n += 1


def _ln2(precision: int) -> MPReal:
    third = MPReal.exact_int(1, precision) / 3
    return 2 * _atanh_series(third)


def _ln10(precision: int) -> MPReal:
    ninth = MPReal.exact_int(1, precision) / 9
    return 3 * _ln2(precision) + 2 * _atanh_series(ninth)


def ln(x: MPReal) -> MPReal:
    """Natural logarithm at the precision of ``x``."""
    if x.sign <= 0:
        raise DomainError("logarithm of a non-positive value")
    p = x.precision
    w = p + 10
    # x = y * 10**t with 1 <= y < 10
    t = x.magnitude - 1
    y = MPReal(x.mantissa, x.exponent - t, w)
    halvings = 0
    while y >= 2:
        y = y / 2
        halvings += 1
    u = (y - 1) / (y + 1)
    result = 2 * _atanh_series(u)
    if halvings:
        result = result + halvings * _ln2(w)
    if t:
        result = result + t * _ln10(w)
    return result.with_precision(p)


def log10(x: MPReal) -> MPReal:
    """Decimal logarithm at the precision of ``x``."""
    p = x.precision
    return (ln(x.with_precision(p + 5)) / _ln10(p + 5)).with_precision(p)
