#!/usr/bin/env python3
"""
Quadratically convergent pi iteration with argument reduction of the tangent.

The basic iteration sigma <- sigma + 2**-k (1 - tan(2**(k-1) sigma)) converges
to pi / 2**(k+1), but its tangent argument approaches pi/4 where the tangent
series is slow. Writing 2**(k-1) sigma = 2**(k-1) c - 2**(k-1) delta with a
constant c close to the limit and alpha = tan(2**(k-1) c) leaves a tangent of
the tiny 2**(k-1) delta, which a few series terms resolve to hundreds of digits.
"""

import sys
import os
import math
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Optional, Tuple, Union
from pydantic import BaseModel, Field
import colorama

# Initialize colorama for colored terminal output
colorama.init()

GREEN = colorama.Fore.GREEN
YELLOW = colorama.Fore.YELLOW
RED = colorama.Fore.RED
CYAN = colorama.Fore.CYAN
RESET = colorama.Fore.RESET

# Add parent directory to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from services.mpnum import MPReal, BigInt, BigRational, agreement_digits, digit_count
from services.machin import MachinFormula, expand_formula, formula_prefix, leading_formula
from services.series import (
    arctan_emi1, emi_order, tan_pq, tangent_order,
    tan_pow2_multiple, tan_nx_complex, tan_diff,
)
from utils.precisionHandler import DomainError, ConvergenceError, BudgetExceededError
from utils.piConfig import get_config_manager

logger = logging.getLogger('pi_iter')

AlphaValue = Union[BigRational, MPReal]

# Exact alpha is chosen automatically only below this size
AUTO_EXACT_DIGITS = 100_000

# Digits carried by one iteration step beyond its scheduled precision
STEP_GUARD = 5


class IterationConfig(BaseModel):
    """Inputs of one modified-iteration run"""
    k: int = Field(..., ge=1, description="Nested radical depth")
    leading_terms: int = Field(..., ge=1, description="Machin terms used to build c")
    seed_digits: int = Field(..., ge=1, description="Correct digits of the seed")
    max_n: int = Field(..., ge=1, description="Largest tangent-series order")
    rate_estimate: int = Field(..., ge=1, description="Expected digits per increment")
    base_precision: int = Field(..., ge=1, description="Precision offset of the schedule")
    alpha_mode: str = Field(default="auto", description="exact, numeric or auto")

    def precision_at(self, n: int) -> int:
        return self.base_precision + self.rate_estimate * n

    @property
    def final_precision(self) -> int:
        return self.precision_at(self.max_n)


class IterationTrace(BaseModel):
    """Digit counts of an iteration run"""
    before_digits: int = 0
    rows: List[Tuple[int, int]] = Field(default_factory=list)
    after_digits: int = 0

    def to_report(self) -> dict:
        return {"before": self.before_digits,
                "rows": [[n, d] for n, d in self.rows],
                "after": self.after_digits}


class SeedRecord(BaseModel):
    """Seed file contents"""
    pi: str = Field(..., description="MPReal serialization of the pi approximation")
    digits: int = Field(..., ge=0, description="Correct digits of the approximation")


@dataclass
class IterationState:
    """Constants and current values of a modified iteration"""
    sigma: MPReal
    delta: MPReal
    c: MPReal
    alpha: AlphaValue
    tau: Optional[MPReal] = None


# ---------------------------------------------------------------------------
# Reference values
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1)
def reference_formula() -> MachinFormula:
    """The seven-term formula from the depth-4 expansion."""
    formula, _ = expand_formula(4, 5)
    return formula


def _arctan_inverse(beta: BigRational, precision: int) -> MPReal:
    """arctan(1/beta) by the EMI series with enough terms for ``precision`` digits."""
    x = MPReal.from_rational(1 / BigRational(beta), precision)
    return arctan_emi1(x, emi_order(x, precision))


def _formula_sum(terms, precision: int) -> MPReal:
    total = MPReal.zero(precision)
    for term in terms:
        total = total + _arctan_inverse(term.beta, precision) * term.coeff
    return total


@lru_cache(maxsize=8)
def bootstrap_pi(digits: int) -> MPReal:
    """
    pi truncated to ``digits`` decimals, summed from the seven-term formula

    Args:
        digits: Number of decimals (>= 10)

    Returns:
        MPReal with precision digits + 1
    """
    if digits < 10:
        raise DomainError(f"bootstrap_pi: need at least 10 digits, got {digits}")
    work = digits + 10
    quarter = _formula_sum(reference_formula().terms, work)
    logger.debug(f"{CYAN}Bootstrapped {digits} digits of pi{RESET}")
    return (4 * quarter).with_precision(digits + 1)


def _reference_for(target_digits: int) -> MPReal:
    factor = get_config_manager().settings.reference_factor
    return bootstrap_pi(max(10, math.ceil(factor * target_digits)))


def _scaled_digits(sigma: MPReal, k: int, reference: MPReal) -> int:
    """Digits of 2**(k+1) * sigma, scaled exactly."""
    exact = sigma.with_precision(sigma.precision + math.ceil(0.302 * (k + 1)) + 2)
    return agreement_digits(exact * (BigInt(2) ** (k + 1)), reference)


# ---------------------------------------------------------------------------
# Constants c and alpha
# ---------------------------------------------------------------------------

def compute_c(k: int, formula: MachinFormula, leading_terms: int, precision: int) -> MPReal:
    """
    c = 2**-(k-1) * sum of the first ``leading_terms`` formula terms

    Args:
        k: Depth of the formula
        formula: Formula whose first term is 2**(k-1) arctan(1/A_k)
        leading_terms: Number of terms to sum
        precision: Significant digits of c

    Returns:
        c as an MPReal
    """
    if leading_terms < 1 or leading_terms > len(formula):
        raise DomainError(f"compute_c: cannot take {leading_terms} terms "
                          f"of a {len(formula)}-term formula")
    guard = get_config_manager().settings.internal_guard_digits
    work = precision + guard
    total = _formula_sum(formula.terms[:leading_terms], work)
    return (total / (BigInt(2) ** (k - 1))).with_precision(precision)


def _term_tangent(coeff: BigInt, beta: BigRational) -> BigRational:
    """Exact tan(coeff * arctan(1/beta))."""
    x = 1 / BigRational(beta)
    coeff = BigInt(coeff)
    if coeff == 1:
        return x
    if coeff > 0 and coeff & (coeff - 1) == 0:
        return tan_pow2_multiple(x, coeff.bit_length() - 1)
    return tan_nx_complex(x, coeff)


def exact_alpha_digits(terms) -> int:
    """Rough size in digits of the exact tangent of a sum of arctan terms."""
    return sum(abs(int(t.coeff)) * max(digit_count(t.beta.numerator),
                                       digit_count(t.beta.denominator))
               for t in terms)


def exact_tangent(terms) -> BigRational:
    """
    Exact tangent of sum coeff_j * arctan(1/beta_j)

    Args:
        terms: ArctanTerm sequence

    Returns:
        The rational tangent
    """
    budget = get_config_manager().settings.alpha_digit_budget
    estimate = exact_alpha_digits(terms)
    if estimate > budget:
        raise BudgetExceededError(
            f"exact alpha would have about {estimate} digits (budget {budget}); "
            f"use the numeric alpha mode")
    value = BigRational(0)
    for term in terms:
        value = tan_diff(value, -_term_tangent(term.coeff, term.beta))
    return value


def compute_alpha(k: int, formula: MachinFormula, leading_terms: int,
                  mode: str, precision: int) -> AlphaValue:
    """
    alpha = tan(2**(k-1) c)

    Args:
        k: Depth of the formula
        formula: Formula used for c
        leading_terms: Number of terms building c
        mode: "exact" for a rational, "numeric" for an MPReal, "auto" to pick by size
        precision: Digits of the numeric value

    Returns:
        BigRational (exact) or MPReal (numeric)
    """
    terms = formula.terms[:leading_terms]
    if mode == "auto":
        mode = "exact" if exact_alpha_digits(terms) <= AUTO_EXACT_DIGITS else "numeric"
        logger.debug(f"{CYAN}alpha mode resolved to {mode}{RESET}")

    if mode == "exact":
        alpha = exact_tangent(terms)
        logger.debug(f"{CYAN}exact alpha has {digit_count(alpha.denominator)} digit denominator{RESET}")
        return alpha
    if mode == "numeric":
        guard = get_config_manager().settings.internal_guard_digits
        work = precision + guard
        argument = compute_c(k, formula, leading_terms, work) * (BigInt(2) ** (k - 1))
        return tan_pq(argument, tangent_order(argument, work)).with_precision(precision)
    raise DomainError(f"compute_alpha: unknown mode {mode!r}")


def _alpha_at(alpha: AlphaValue, precision: int) -> MPReal:
    if isinstance(alpha, MPReal):
        return alpha.with_precision(precision)
    return MPReal.from_rational(alpha, precision)


# ---------------------------------------------------------------------------
# Iterations
# ---------------------------------------------------------------------------

def _reduced_step(state: IterationState, k: int, n: int, precision: int) -> MPReal:
    """One update of sigma with the tangent series truncated at order n."""
    work = precision + STEP_GUARD
    argument = state.delta.with_precision(work) * (BigInt(2) ** (k - 1))
    tau = tan_pq(argument, n)
    state.tau = tau
    alpha = _alpha_at(state.alpha, work)
    correction = 1 - (alpha - tau) / (1 + alpha * tau)
    updated = state.sigma.with_precision(work) + correction / (BigInt(2) ** k)
    return updated.with_precision(precision)


def prepare_state(config: IterationConfig, formula: MachinFormula,
                  seed_pi: MPReal) -> IterationState:
    """
    Hold c, alpha, sigma_1 = seed / 2**(k+1) and delta = c - sigma_1 at the run's working precision

    Args:
        config: Run configuration
        formula: Formula providing c
        seed_pi: Seed approximation of pi

    Returns:
        IterationState before the first update
    """
    guard = get_config_manager().settings.internal_guard_digits
    work = max(config.final_precision, 2 * config.seed_digits) + guard
    k = config.k
    sigma = seed_pi.with_precision(work) / (BigInt(2) ** (k + 1))
    c = compute_c(k, formula, config.leading_terms, work)
    alpha = compute_alpha(k, formula, config.leading_terms, config.alpha_mode, work)
    return IterationState(sigma=sigma, delta=c - sigma, c=c, alpha=alpha)


def iterate_modified(config: IterationConfig, formula: MachinFormula, seed_pi: MPReal,
                     on_row: Optional[Callable[[int, int], None]] = None,
                     on_start: Optional[Callable[[int], None]] = None
                     ) -> Tuple[MPReal, IterationTrace]:
    """
    Double the correct digits of a seed by the argument-reduced iteration

    For n = 1..max_n the tangent of 2**(k-1) delta is truncated at order n and
    the new sigma is cut to base_precision + rate_estimate * n digits. The run
    stops early once the configured number of consecutive rows agree.

    Args:
        config: Run configuration
        formula: Formula providing c and alpha
        seed_pi: Seed approximation of pi
        on_row: Called with (n, digits) as each row is computed
        on_start: Called with the digits of the seed before the first row

    Returns:
        Tuple of (final pi approximation, trace)
    """
    settings = get_config_manager().settings
    k = config.k
    target = max(2 * config.seed_digits, config.final_precision)
    reference = _reference_for(target)

    state = prepare_state(config, formula, seed_pi)
    trace = IterationTrace(before_digits=_scaled_digits(state.sigma, k, reference))
    logger.info(f"{CYAN}k={k}, {config.leading_terms} term(s): {trace.before_digits} digits "
                f"before iteration, precision {config.base_precision} + {config.rate_estimate}n{RESET}")
    if on_start is not None:
        on_start(trace.before_digits)

    saturation = 2 * trace.before_digits - 2
    sigma = state.sigma
    streak = 0
    for n in range(1, config.max_n + 1):
        sigma = _reduced_step(state, k, n, config.precision_at(n))
        digits = _scaled_digits(sigma, k, reference)

        if trace.rows:
            previous = trace.rows[-1][1]
            if digits < previous and previous < saturation:
                raise ConvergenceError(
                    f"iterate_modified: digits fell from {previous} to {digits} at n={n}; "
                    f"the precision schedule {config.base_precision} + {config.rate_estimate}n is too tight")
            streak = streak + 1 if digits == previous else 1
        else:
            streak = 1

        trace.rows.append((n, digits))
        logger.debug(f"{CYAN}n={n}: {digits} digits at precision {config.precision_at(n)}{RESET}")
        if on_row is not None:
            on_row(n, digits)
        if streak >= settings.saturation_rows:
            logger.info(f"{GREEN}Saturated at {digits} digits after n={n}{RESET}")
            break

    trace.after_digits = trace.rows[-1][1]
    exact = sigma.with_precision(sigma.precision + math.ceil(0.302 * (k + 1)) + 2)
    return exact * (BigInt(2) ** (k + 1)), trace


def measure_schedule(k: int, formula: MachinFormula, leading_terms: int,
                     seed_pi: MPReal, seed_digits: int,
                     alpha_mode: str = "auto") -> Tuple[int, int]:
    """
    Derive (base_precision, rate_estimate) from the first two untruncated rows

    Args:
        k: Depth
        formula: Formula providing c
        leading_terms: Number of terms building c
        seed_pi: Seed approximation
        seed_digits: Correct digits of the seed

    Returns:
        Tuple of (base precision, rate estimate)
    """
    settings = get_config_manager().settings
    wide = 2 * seed_digits + settings.internal_guard_digits
    trial = IterationConfig(k=k, leading_terms=leading_terms, seed_digits=seed_digits,
                            max_n=2, rate_estimate=1, base_precision=wide,
                            alpha_mode=alpha_mode)
    reference = _reference_for(2 * seed_digits)
    state = prepare_state(trial, formula, seed_pi)
    first = _scaled_digits(_reduced_step(state, k, 1, wide), k, reference)
    second = _scaled_digits(_reduced_step(state, k, 2, wide), k, reference)
    base = first + settings.guard_digits
    rate = max(1, second - first)
    logger.info(f"{CYAN}Measured schedule {base} + {rate}n (rows {first}, {second}){RESET}")
    return base, rate


def make_config(k: int, leading_terms: int, seed_digits: int, max_n: int,
                formula: Optional[MachinFormula] = None,
                seed_pi: Optional[MPReal] = None,
                alpha_mode: str = "auto") -> IterationConfig:
    """
    Build a run configuration, using a preset schedule when one matches

    Without a preset the schedule is measured, which needs ``formula`` and ``seed_pi``.
    """
    preset = get_config_manager().preset_for(k, leading_terms)
    if preset is not None:
        base, rate = preset.base_precision, preset.rate_estimate
    else:
        if formula is None or seed_pi is None:
            raise DomainError(f"no preset schedule for k={k}, terms={leading_terms}; "
                              f"a formula and seed are needed to measure one")
        base, rate = measure_schedule(k, formula, leading_terms, seed_pi, seed_digits, alpha_mode)
    return IterationConfig(k=k, leading_terms=leading_terms, seed_digits=seed_digits,
                           max_n=max_n, rate_estimate=rate, base_precision=base,
                           alpha_mode=alpha_mode)


def formula_for(k: int, leading_terms: int) -> MachinFormula:
    """Formula carrying the first ``leading_terms`` terms of the depth-k expansion."""
    if k == 4:
        return MachinFormula(reference_formula().terms[:leading_terms], "seven-term, k=4")
    if leading_terms == 1:
        return leading_formula(k)
    return formula_prefix(k, leading_terms)


# Stage layout of the reference chain: (k, leading terms, max_n)
CHAIN_STAGES = ((4, 1, 42), (4, 2, 42), (27, 1, 46))


def run_preset_chain(seed_digits: int = 100,
                     on_row: Optional[Callable[[int, int, int], None]] = None
                     ) -> List[Tuple[MPReal, IterationTrace]]:
    """
    Run the three preset configurations, each seeded with the previous output

    Args:
        seed_digits: Decimals of the truncated starting seed
        on_row: Called with (stage, n, digits)

    Returns:
        List of (pi approximation, trace) per stage
    """
    seed = bootstrap_pi(seed_digits)
    digits = seed_digits
    results = []
    for stage, (k, terms, max_n) in enumerate(CHAIN_STAGES, start=1):
        callback = (lambda n, d, s=stage: on_row(s, n, d)) if on_row else None
        config = make_config(k, terms, digits, max_n)
        pi_value, trace = iterate_modified(config, formula_for(k, terms), seed, callback)
        logger.info(f"{GREEN}Stage {stage}: {trace.before_digits} -> {trace.after_digits} digits{RESET}")
        results.append((pi_value, trace))
        seed, digits = pi_value, trace.after_digits
    return results


def iterate_basic(k: int, rounds: int, precision: int) -> Tuple[MPReal, IterationTrace]:
    """
    sigma <- sigma + 2**-k (1 - tan(2**(k-1) sigma)) from sigma_1 = 2**-k

    Args:
        k: Depth (>= 1)
        rounds: Number of updates
        precision: Working precision

    Returns:
        Tuple of (2**(k+1) sigma, per-round trace)
    """
    if k < 1:
        raise DomainError(f"iterate_basic: depth must be at least 1, got {k}")
    guard = get_config_manager().settings.internal_guard_digits
    work = precision + guard
    reference = _reference_for(precision)
    scale = BigInt(2) ** k

    sigma = MPReal.exact_int(1, work) / scale
    trace = IterationTrace(before_digits=_scaled_digits(sigma, k, reference))
    limit = precision - 5
    for r in range(1, rounds + 1):
        argument = sigma * (BigInt(2) ** (k - 1))
        tau = tan_pq(argument, tangent_order(argument, work))
        sigma = sigma + (1 - tau) / scale
        digits = _scaled_digits(sigma, k, reference)
        if trace.rows and digits < trace.rows[-1][1] and trace.rows[-1][1] < limit:
            raise ConvergenceError(f"iterate_basic: digits fell from {trace.rows[-1][1]} "
                                   f"to {digits} at round {r}")
        trace.rows.append((r, digits))
        logger.debug(f"{CYAN}round {r}: {digits} digits{RESET}")

    trace.after_digits = trace.rows[-1][1] if trace.rows else trace.before_digits
    return (sigma * (BigInt(2) ** (k + 1))).with_precision(precision), trace


def rational_single_step(k: int, formula: MachinFormula, terms: int,
                         precision: int) -> Tuple[int, int, MPReal, BigRational]:
    """
    One update whose tangent is the exact rational tangent of a formula prefix

    Args:
        k: Depth of the formula
        formula: Formula with integer betas in the selected prefix
        terms: Prefix length
        precision: Working precision

    Returns:
        Tuple of (digits before, digits after, updated sigma, exact tangent)
    """
    prefix = formula.terms[:terms]
    if any(not t.has_integer_beta() for t in prefix):
        raise DomainError(f"rational_single_step: the first {terms} terms have a non-integer beta")

    reference = _reference_for(precision)
    sigma = compute_c(k, formula, terms, precision)
    tangent = exact_tangent(prefix)
    correction = 1 - MPReal.from_rational(tangent, precision)
    updated = sigma + correction / (BigInt(2) ** k)

    before = _scaled_digits(sigma, k, reference)
    after = _scaled_digits(updated, k, reference)
    logger.info(f"{GREEN}{terms} terms: {before} digits before, {after} after one step{RESET}")
    return before, after, updated, tangent


# ---------------------------------------------------------------------------
# Seed files
# ---------------------------------------------------------------------------

def seed_to_json(pi_value: MPReal, digits: int) -> str:
    return SeedRecord(pi=str(pi_value), digits=digits).model_dump_json()


def seed_from_json(text: str) -> Tuple[MPReal, int]:
    try:
        record = SeedRecord.model_validate_json(text)
    except ValueError as e:
        raise DomainError(f"invalid seed file: {e}") from e
    return MPReal.parse(record.pi), record.digits
