#!/usr/bin/env python3
"""
Nested radicals of 2 and the integers A_k built from them.

a_0 = 0 and a_k = sqrt(2 + a_{k-1}). A_k is the floor of a_k / sqrt(2 - a_{k-1}),
an integer close to 2**(k+1) / pi.
"""

import sys
import os
import math
import logging
from dataclasses import dataclass
from typing import Optional
import colorama

# Initialize colorama for colored terminal output
colorama.init()

YELLOW = colorama.Fore.YELLOW
CYAN = colorama.Fore.CYAN
RESET = colorama.Fore.RESET

# Add parent directory to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from services.mpnum import MPReal, BigInt, sqrt, floor_to_int
from utils.precisionHandler import DomainError, FloorAmbiguityError, escalate_precision
from utils.piConfig import get_config_manager

logger = logging.getLogger('radicals')

# Fewest trustworthy digits left in 2 - a_{k-1} before a floor is attempted
MIN_EFFECTIVE_DIGITS = 5


@dataclass(frozen=True)
class RadicalPair:
    """a_k together with a_{k-1}; ``seed`` marks k = 0 where a_{k-1} is undefined"""
    a_k: MPReal
    a_k_minus_1: Optional[MPReal]
    k: int
    seed: bool = False


def nested_radical(k: int, precision: int) -> RadicalPair:
    """
    Compute a_k and a_{k-1} by forward recursion

    Args:
        k: Depth (k >= 0)
        precision: Significant digits of the results (>= 10)

    Returns:
        RadicalPair at the requested precision
    """
    if k < 0:
        raise DomainError(f"nested_radical: depth must be non-negative, got {k}")
    if precision < 10:
        raise DomainError(f"nested_radical: precision must be at least 10, got {precision}")

    if k == 0:
        return RadicalPair(MPReal.zero(precision), None, 0, seed=True)

    # each square root loses at most one ulp
    work = precision + len(str(k)) + 2
    two = MPReal.exact_int(2, work)
    previous = MPReal.zero(work)
    current = previous
    for _ in range(k):
        previous = current
        current = sqrt(two + current)

    return RadicalPair(current.with_precision(precision),
                       previous.with_precision(precision), k)


def _cancellation_free(pair: RadicalPair, precision: int) -> MPReal:
    """
    2 - a_{k-1}, tagged with the digits that survive the cancellation

    Args:
        pair: Radicals computed at ``precision``
        precision: Working precision of the pair

    Returns:
        Difference re-tagged to its effective precision
    """
    difference = MPReal.exact_int(2, precision) - pair.a_k_minus_1
    if difference.sign <= 0:
        raise FloorAmbiguityError(
            f"2 - a_{pair.k - 1} vanished at {precision} digits", 2 * precision)

    # 2 has magnitude 1, so everything above the difference's leading digit cancelled
    lost = 1 - difference.magnitude
    effective = precision - lost - 1
    if effective < MIN_EFFECTIVE_DIGITS:
        raise FloorAmbiguityError(
            f"only {effective} digits of 2 - a_{pair.k - 1} survive at {precision} digits",
            2 * precision)
    return difference.with_precision(effective)


def reduction_tangent(k: int, precision: int) -> MPReal:
    """
    sqrt(2 - a_{k-1}) / a_k, the tangent of pi / 2**(k+1)

    Args:
        k: Depth (k >= 1)
        precision: Significant digits requested

    Returns:
        The quotient, with at most ``precision`` digits
    """
    if k < 1:
        raise DomainError(f"reduction_tangent: depth must be at least 1, got {k}")
    # 2 - a_{k-1} is about (pi / 2**k)**2, so 2k log10(2) digits cancel
    work = precision + math.ceil(0.61 * k) + 5
    pair = nested_radical(k, work)
    difference = _cancellation_free(pair, work)
    return (sqrt(difference) / pair.a_k).with_precision(precision)


def _ak_at(k: int, *, precision: int) -> BigInt:
    pair = nested_radical(k, precision)
    difference = _cancellation_free(pair, precision)
    ratio = pair.a_k / sqrt(difference)
    logger.debug(f"{CYAN}A_{k}: ratio at {ratio.precision} effective digits{RESET}")
    return floor_to_int(ratio)


def compute_Ak(k: int) -> BigInt:
    """
    Exact A_k = floor(a_k / sqrt(2 - a_{k-1}))

    The quotient equals cot(pi / 2**(k+1)), irrational for every k >= 2, so
    doubling the precision always settles an ambiguous floor eventually.

    Args:
        k: Depth (k >= 1)

    Returns:
        A_k as a BigInt
    """
    if k < 1:
        raise DomainError(f"compute_Ak: depth must be at least 1, got {k}")
    if k == 1:
        # cot(pi/4) = 1 exactly; the floor of an exact integer is never decidable numerically
        return BigInt(1)

    settings = get_config_manager().settings
    start = math.ceil(0.302 * k) + 20
    solver = escalate_precision(max_attempts=settings.max_escalations + 1)(_ak_at)
    result = solver(k, precision=start)
    logger.debug(f"{CYAN}A_{k} = {result}{RESET}")
    return result
