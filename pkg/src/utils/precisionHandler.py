#!/usr/bin/env python3
"""
Error types and precision escalation for the numerics services
"""

import logging
from functools import wraps
from typing import Any, Callable, Optional, Tuple, Type
import colorama

# Initialize colorama for colored terminal output
colorama.init()

# Define colors for better logging
GREEN = colorama.Fore.GREEN
YELLOW = colorama.Fore.YELLOW
RED = colorama.Fore.RED
CYAN = colorama.Fore.CYAN
RESET = colorama.Fore.RESET

logger = logging.getLogger('precision_handler')


class NumericError(Exception):
    """Base class for errors raised by the numerics services"""
    pass


class DomainError(NumericError, ValueError):
    """Exception raised when an operation is called outside its domain"""
    pass


class FloorAmbiguityError(NumericError):
    """Exception raised when a floor cannot be decided at the working precision"""

    def __init__(self, message: str, needed_precision: int):
        super().__init__(message)
        self.needed_precision = needed_precision


class ConvergenceError(NumericError):
    """Exception raised when an iteration regresses, diverges or is starved of precision"""
    pass


class ConsistencyError(NumericError):
    """Exception raised when an internal algebraic invariant does not hold"""
    pass


class BudgetExceededError(NumericError):
    """Exception raised when an exact computation would exceed its digit budget"""
    pass


def escalate_precision(max_attempts: int = 12,
                       multiplier: float = 2.0,
                       exceptions: Tuple[Type[Exception], ...] = (FloorAmbiguityError,)):
    """
    Decorator re-running a computation at higher precision when it is ambiguous

    The decorated function must accept ``precision`` as a keyword argument.

    Args:
        max_attempts: Maximum number of attempts (the first one included)
        multiplier: Factor applied to the precision between attempts
        exceptions: Tuple of exceptions that trigger an escalation

    Returns:
        Decorated function with escalation logic
    """
    def decorator(func: Callable[..., Any]) -> Callable[..., Any]:
        @wraps(func)
        def wrapper(*args: Any, precision: int, **kwargs: Any) -> Any:
            last_exception: Optional[Exception] = None

            for attempt in range(1, max_attempts + 1):
                try:
                    return func(*args, precision=precision, **kwargs)
                except exceptions as e:
                    last_exception = e

                    if attempt < max_attempts:
                        next_precision = int(precision * multiplier)
                        needed = getattr(e, 'needed_precision', 0)
                        if needed > next_precision:
                            next_precision = needed

                        logger.warning(
                            f"{YELLOW}{func.__name__}: attempt {attempt}/{max_attempts} at "
                            f"{precision} digits was ambiguous ({str(e)}). "
                            f"Retrying at {next_precision} digits...{RESET}"
                        )
                        precision = next_precision
                    else:
                        logger.error(
                            f"{RED}{func.__name__}: all {max_attempts} attempts failed. "
                            f"Last error: {str(e)}{RESET}"
                        )

            raise last_exception

        return wrapper

    return decorator


def classify_exception(exception: Exception) -> Tuple[int, str]:
    """
    Classify an exception into a CLI exit code and a message

    Args:
        exception: Exception raised by a library call

    Returns:
        Tuple of (exit code, message)
    """
    if isinstance(exception, DomainError):
        return 1, f"domain error: {exception}"
    elif isinstance(exception, FloorAmbiguityError):
        return 1, f"ambiguous floor (needs {exception.needed_precision} digits): {exception}"
    elif isinstance(exception, ConvergenceError):
        return 1, f"convergence error: {exception}"
    elif isinstance(exception, ConsistencyError):
        return 1, f"internal consistency error: {exception}"
    elif isinstance(exception, BudgetExceededError):
        return 1, f"budget exceeded: {exception}"
    return 1, f"unexpected error: {exception}"
