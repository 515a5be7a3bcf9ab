#!/usr/bin/env python3
"""
Validation of Machin-like formulas by the Gaussian product relation, and
Lehmer's measure of their efficiency.
"""

import sys
import os
import logging
from dataclasses import dataclass
from typing import Optional
import colorama

# Initialize colorama for colored terminal output
colorama.init()

GREEN = colorama.Fore.GREEN
YELLOW = colorama.Fore.YELLOW
RED = colorama.Fore.RED
RESET = colorama.Fore.RESET

# Add parent directory to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from services.mpnum import MPReal, GaussianRational, gauss_pow, format_rational, log10
from services.machin import MachinFormula
from utils.precisionHandler import DomainError
from utils.piConfig import get_config_manager

logger = logging.getLogger('validate')


@dataclass
class ValidationReport:
    """Outcome of validating and scoring one formula"""
    is_valid: bool
    product: GaussianRational
    lehmer: Optional[MPReal] = None
    rational_beta: bool = False

    def to_dict(self) -> dict:
        return {
            "valid": self.is_valid,
            "product_re": format_rational(self.product.re),
            "product_im": format_rational(self.product.im),
            "lehmer": str(self.lehmer) if self.lehmer is not None else None,
            "rational_beta": self.rational_beta,
        }


def gaussian_product(formula: MachinFormula) -> GaussianRational:
    """Exact product of (beta_j + i)**coeff_j over the terms"""
    product = GaussianRational.one()
    for term in formula.terms:
        factor = GaussianRational(term.beta, 1)
        product = product * gauss_pow(factor, term.coeff)
    return product


def lehmer_measure(formula: MachinFormula, precision: int) -> MPReal:
    """
    Sum of 1 / log10|beta_j|

    Args:
        formula: Formula to score
        precision: Significant digits of the result

    Returns:
        Lehmer's measure as an MPReal
    """
    work = precision + 5
    total = MPReal.zero(work)
    for term in formula.terms:
        size = abs(term.beta)
        if size <= 1:
            raise DomainError(
                f"lehmer_measure: |beta| = {format_rational(size)} is not above 1")
        total = total + 1 / log10(MPReal.from_rational(size, work))
    return total.with_precision(precision)


def check_product_relation(formula: MachinFormula,
                           lehmer_precision: Optional[int] = None) -> ValidationReport:
    """
    Check that prod (beta_j + i)**coeff_j has equal real and imaginary parts

    Args:
        formula: Formula to check
        lehmer_precision: Digits for the attached Lehmer measure (config default when None)

    Returns:
        ValidationReport; ``lehmer`` stays None when some |beta| <= 1
    """
    product = gaussian_product(formula)
    is_valid = product.re == product.im and not product.is_zero()
    rational_beta = not all(t.has_integer_beta() for t in formula.terms)

    if lehmer_precision is None:
        lehmer_precision = get_config_manager().settings.lehmer_precision
    try:
        lehmer = lehmer_measure(formula, lehmer_precision)
    except DomainError as e:
        logger.warning(f"{YELLOW}Lehmer measure undefined: {str(e)}{RESET}")
        lehmer = None

    if rational_beta:
        logger.warning(f"{YELLOW}Formula has non-integer betas; "
                       f"Lehmer's measure is only indicative{RESET}")
    if is_valid:
        logger.info(f"{GREEN}{len(formula)}-term formula satisfies the product relation{RESET}")
    else:
        logger.info(f"{RED}{len(formula)}-term formula fails the product relation{RESET}")

    return ValidationReport(is_valid, product, lehmer, rational_beta)
