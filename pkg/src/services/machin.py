#!/usr/bin/env python3
"""
Generation of two-term and multi-term Machin-like formulas for pi.

A formula asserts pi/4 = sum coeff_j * arctan(1/beta_j). Every coefficient
and every beta is kept exact (BigInt / BigRational); no floating values are
involved anywhere in this module.
"""

import sys
import os
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple
from pydantic import BaseModel, Field
import colorama

# Initialize colorama for colored terminal output
colorama.init()

GREEN = colorama.Fore.GREEN
YELLOW = colorama.Fore.YELLOW
CYAN = colorama.Fore.CYAN
RESET = colorama.Fore.RESET

# Add parent directory to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from services.mpnum import (
    BigInt, BigRational, GaussianRational, gauss_pow,
    format_int, format_rational, parse_int, parse_rational, rational_floor, is_integer,
    digit_count,
)
from services.radicals import compute_Ak
from utils.precisionHandler import DomainError, ConsistencyError, BudgetExceededError
from utils.piConfig import get_config_manager

logger = logging.getLogger('machin')


@dataclass(frozen=True)
class ArctanTerm:
    """coeff * arctan(1/beta)"""
    coeff: BigInt
    beta: BigRational

    def __post_init__(self):
        object.__setattr__(self, "coeff", BigInt(self.coeff))
        object.__setattr__(self, "beta", BigRational(self.beta))
        if self.beta == 0:
            raise DomainError("arctan term with beta = 0")

    def has_integer_beta(self) -> bool:
        return is_integer(self.beta)

    def __str__(self) -> str:
        return f"{self.coeff}*arctan(1/{format_rational(self.beta)})"


@dataclass
class MachinFormula:
    """Ordered arctan terms claimed to sum to pi/4"""
    terms: List[ArctanTerm]
    provenance: str = ""

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MachinFormula):
            return NotImplemented
        return self.terms == other.terms and self.provenance == other.provenance

    def __str__(self) -> str:
        return "pi/4 = " + " + ".join(str(t) for t in self.terms)


@dataclass
class ExpansionState:
    """Trace of the B_{m,k} recursion behind an expanded formula"""
    k: int
    A_k: BigInt
    B_list: List[BigRational] = field(default_factory=list)
    terminated: bool = False


# ---------------------------------------------------------------------------
# Wire format
# ---------------------------------------------------------------------------

class TermRecord(BaseModel):
    """One arctan term with every integer as a decimal string"""
    coeff: str = Field(..., description="Integer multiplier")
    beta_num: str = Field(..., description="Numerator of beta")
    beta_den: str = Field(default="1", description="Denominator of beta")


class FormulaRecord(BaseModel):
    """Formula file contents"""
    provenance: str = Field(default="", description="Where the formula came from")
    terms: List[TermRecord] = Field(default_factory=list)


def formula_to_record(formula: MachinFormula) -> FormulaRecord:
    return FormulaRecord(
        provenance=formula.provenance,
        terms=[TermRecord(coeff=format_int(t.coeff),
                          beta_num=format_int(t.beta.numerator),
                          beta_den=format_int(t.beta.denominator))
               for t in formula.terms],
    )


def formula_from_record(record: FormulaRecord) -> MachinFormula:
    terms = []
    for t in record.terms:
        den = parse_int(t.beta_den)
        if den == 0:
            raise DomainError(f"zero beta denominator in term {t.coeff}")
        terms.append(ArctanTerm(parse_int(t.coeff), BigRational(parse_int(t.beta_num), den)))
    return MachinFormula(terms, record.provenance)


def formula_to_json(formula: MachinFormula) -> str:
    return formula_to_record(formula).model_dump_json(indent=2)


def formula_from_json(text: str) -> MachinFormula:
    try:
        record = FormulaRecord.model_validate_json(text)
    except ValueError as e:
        raise DomainError(f"invalid formula JSON: {e}") from e
    return formula_from_record(record)


def save_formula(formula: MachinFormula, path: str) -> None:
    with open(path, 'w') as f:
        f.write(formula_to_json(formula))
    logger.info(f"{GREEN}Formula with {len(formula)} terms written to {path}{RESET}")


def load_formula(path: str) -> MachinFormula:
    with open(path, 'r') as f:
        return formula_from_json(f.read())


# ---------------------------------------------------------------------------
# Catalogue of classical formulas
# ---------------------------------------------------------------------------

_KNOWN: Dict[str, Tuple[str, List[Tuple[int, str]]]] = {
    "machin": ("Machin", [(4, "5"), (-1, "239")]),
    "hermann": ("Hermann", [(2, "2"), (-1, "7")]),
    "gauss": ("Gauss", [(12, "18"), (8, "57"), (-5, "239")]),
    "takano": ("Takano", [(44, "57"), (7, "239"), (-12, "682"), (24, "12943")]),
    "stormer": ("Stormer", [(12, "49"), (32, "57"), (-5, "239"), (12, "110443")]),
    "wetherfield": ("Wetherfield seven-term", [
        (83, "107"), (17, "1710"), (-22, "103697"), (-24, "2513489"),
        (-44, "18280007883"), (12, "7939642926390344818"),
        (22, "3054211727257704725384731479018"),
    ]),
    "wetherfield_split": ("Wetherfield identity split into integer betas", [
        (83, "107"), (17, "1710"), (-22, "103697"), (-12, "1256744"),
        (-22, "9140003941"), (12, "3158812219818"),
        (22, "167079344092131066905"),
    ]),
    "wetherfield_rational": ("Wetherfield five-term identity", [
        (83, "107"), (17, "1710"), (-22, "103697"),
        (-12, "2513489/2"), (-22, "18280007883/2"),
    ]),
}


def known_formula_names() -> List[str]:
    return sorted(_KNOWN)


def known_formula(name: str) -> MachinFormula:
    """
    Look up a classical formula by name

    Args:
        name: One of known_formula_names()

    Returns:
        The formula
    """
    try:
        provenance, entries = _KNOWN[name.lower()]
    except KeyError:
        raise DomainError(f"unknown formula {name!r}; choose from {', '.join(known_formula_names())}")
    return MachinFormula([ArctanTerm(c, parse_rational(b)) for c, b in entries], provenance)


# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------

def b1k_digit_estimate(A_k: BigInt, k: int) -> int:
    """Approximate digits of B_{1,k}; they double with every step in depth."""
    return digit_count(BigInt(A_k) ** 2) * 2 ** max(k - 2, 0)


def b1k_two_step(A_k: BigInt, k: int) -> BigRational:
    """
    Exact B_{1,k} by the u/v squaring recursion

    u_1 + i v_1 = (A + i)**2 / (A**2 + 1); each step squares it, and
    B_{1,k} = u_k / (1 - v_k).

    Args:
        A_k: The integer A_k (>= 2)
        k: Depth (>= 2)

    Returns:
        B_{1,k} as a reduced rational
    """
    if k < 2:
        raise DomainError(f"b1k_two_step: depth must be at least 2, got {k}")
    A = BigInt(A_k)
    if A < 2:
        raise DomainError(f"b1k_two_step: A_k must be at least 2, got {A}")

    budget = get_config_manager().settings.alpha_digit_budget
    estimate = b1k_digit_estimate(A, k)
    if estimate > budget:
        raise BudgetExceededError(
            f"B_(1,{k}) would have about {estimate} digits (budget {budget}); "
            f"only the leading term is available at this depth, use --terms 1")

    norm = A * A + 1
    u = BigRational(A * A - 1, norm)
    v = BigRational(2 * A, norm)
    for step in range(2, k + 1):
        u, v = u * u - v * v, 2 * u * v
        logger.debug(f"{CYAN}u/v step {step}: {u.numerator.bit_length()} bit numerator{RESET}")

    if v == 1:
        raise DomainError(f"b1k_two_step: v_{k} = 1, B_(1,{k}) has a zero denominator")
    return u / (1 - v)


def eta_general(gamma: BigRational, phi: BigInt) -> BigRational:
    """
    Exact eta with phi*arctan(1/gamma) + arctan(1/eta) = pi/4

    Args:
        gamma: Rational gamma
        phi: Positive integer multiplier

    Returns:
        eta = 2 / (((gamma + i)/(gamma - i))**phi - i) - i, which is real
    """
    if phi < 1:
        raise DomainError(f"eta_general: phi must be positive, got {phi}")
    i = GaussianRational.i()
    g = GaussianRational.lift(gamma)
    w = (g + i) / (g - i)
    denominator = gauss_pow(w, phi) - i
    if denominator.is_zero():
        raise DomainError(f"eta_general: zero denominator at gamma={format_rational(gamma)}, phi={phi}")
    eta = 2 / denominator - i
    if eta.im != 0:
        raise ConsistencyError(
            f"eta_general: imaginary residue {format_rational(eta.im)} "
            f"at gamma={format_rational(gamma)}, phi={phi}")
    return eta.re


def two_term_formula(gamma: BigRational, phi: BigInt) -> MachinFormula:
    """pi/4 = phi*arctan(1/gamma) + arctan(1/eta)"""
    eta = eta_general(gamma, phi)
    return MachinFormula(
        [ArctanTerm(phi, gamma), ArctanTerm(1, eta)],
        f"two-term, gamma={format_rational(gamma)}, phi={phi}",
    )


def leading_formula(k: int) -> MachinFormula:
    """The leading term 2**(k-1) * arctan(1/A_k) alone; not an identity by itself."""
    if k < 1:
        raise DomainError(f"leading_formula: depth must be at least 1, got {k}")
    return MachinFormula([ArctanTerm(BigInt(2) ** (k - 1), compute_Ak(k))],
                         f"leading term, k={k}")


def expand_formula(k: int, max_M: int) -> Tuple[MachinFormula, ExpansionState]:
    """
    Expand pi/4 = 2**(k-1) arctan(1/A_k) + sum of arctan(1/floor(B_m)) + arctan(1/B_{M+1})

    B_{m+1} = (1 + floor(B_m) B_m) / (floor(B_m) - B_m). The expansion stops as
    soon as some B is an integer, otherwise after max_M floor terms.

    Args:
        k: Depth (>= 2)
        max_M: Maximum number of floor terms (>= 0)

    Returns:
        Tuple of (formula, expansion state)
    """
    if k < 2:
        raise DomainError(f"expand_formula: depth must be at least 2, got {k}")
    if max_M < 0:
        raise DomainError(f"expand_formula: max_M must be non-negative, got {max_M}")

    A = compute_Ak(k)
    B = b1k_two_step(A, k)
    state = ExpansionState(k=k, A_k=A, B_list=[B])
    terms = [ArctanTerm(BigInt(2) ** (k - 1), A)]

    for m in range(1, max_M + 1):
        if is_integer(B):
            break
        floor_b = rational_floor(B)
        terms.append(ArctanTerm(1, floor_b))
        B = (1 + floor_b * B) / (floor_b - B)
        state.B_list.append(B)
        logger.debug(f"{CYAN}B_({m + 1},{k}): {len(str(B.numerator))}/{len(str(B.denominator))} digits{RESET}")

    state.terminated = is_integer(B)
    terms.append(ArctanTerm(1, B))

    if state.terminated:
        logger.info(f"{GREEN}k={k}: {len(terms)}-term formula with integer betas{RESET}")
    else:
        logger.info(f"{YELLOW}k={k}: expansion stopped after {max_M} floor terms, "
                    f"last beta is rational{RESET}")
    return MachinFormula(terms, f"expanded, k={k}, max_M={max_M}"), state


def formula_prefix(k: int, terms: int) -> MachinFormula:
    """
    First ``terms`` terms of the expansion at depth k

    One term needs only A_k, so it is available at any depth. Otherwise the
    expansion stops after the terms - 1 floor terms the prefix needs.
    """
    if terms < 1:
        raise DomainError(f"formula_prefix: need at least one term, got {terms}")
    if terms == 1:
        return leading_formula(k)
    formula, _ = expand_formula(k, terms - 1)
    if terms > len(formula):
        raise DomainError(f"formula_prefix: expansion at k={k} has only {len(formula)} terms")
    return MachinFormula(formula.terms[:terms], f"first {terms} terms, k={k}")


# ---------------------------------------------------------------------------
# Splitting
# ---------------------------------------------------------------------------

def split_arctan(z: BigRational) -> Tuple[BigInt, BigRational]:
    """
    arctan(1/z) = arctan(1/floor(z)) + arctan(residual)

    Args:
        z: Rational outside [0, 1)

    Returns:
        Tuple of (floor(z), residual) with residual = (floor(z) - z) / (1 + z floor(z))
    """
    z = BigRational(z)
    if 0 <= z < 1:
        raise DomainError(f"split_arctan: argument {format_rational(z)} lies in [0, 1)")
    floor_z = rational_floor(z)
    residual = (floor_z - z) / (1 + z * floor_z)
    return floor_z, residual


def split_term(formula: MachinFormula, index: int) -> MachinFormula:
    """
    Replace term ``index`` by the two terms from split_arctan, same coefficient

    Args:
        formula: Formula to rewrite
        index: Position of the term to split

    Returns:
        New formula (unchanged copy when the residual is zero)
    """
    term = formula.terms[index]
    floor_z, residual = split_arctan(term.beta)
    replacement = [ArctanTerm(term.coeff, floor_z)]
    if residual != 0:
        replacement.append(ArctanTerm(term.coeff, 1 / residual))
    terms = formula.terms[:index] + replacement + formula.terms[index + 1:]
    return MachinFormula(terms, f"{formula.provenance} (term {index} split)".strip())
