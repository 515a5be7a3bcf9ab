#!/usr/bin/env python3
"""
Command-line entry point: Machin-like formula generation, validation and
scoring, arctangent convergence reports, and pi iteration runs.

Reports go to stdout; logs go to stderr.
"""

import asyncio
import argparse
import json
import sys
import os
import logging
from typing import Callable, List, Optional, Tuple
import colorama

# Initialize colorama for colored terminal output
colorama.init()

# Define colors for better logging
GREEN = colorama.Fore.GREEN
YELLOW = colorama.Fore.YELLOW
RED = colorama.Fore.RED
CYAN = colorama.Fore.CYAN
RESET = colorama.Fore.RESET

# Add parent directory to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

logger = logging.getLogger('cli')

try:
    import gmpy2  # noqa: F401
except ImportError:
    logger.error(f"{RED}gmpy2 is not installed. Run 'pip install gmpy2'{RESET}")
    sys.exit(1)

from services.mpnum import MPReal, agreement_digits, format_int, format_rational, parse_rational
from services.machin import (
    MachinFormula, expand_formula, known_formula, known_formula_names,
    load_formula, save_formula, formula_to_record,
)
from services.validate import check_product_relation, lehmer_measure
from services.series import (
    arctan_maclaurin, arctan_euler, arctan_emi1, arctan_emi, emi_order,
)
from services.pi_iter import (
    bootstrap_pi, formula_for, make_config, iterate_modified, iterate_basic,
    rational_single_step, seed_to_json, seed_from_json,
)
from utils.precisionHandler import NumericError, classify_exception
from utils.piConfig import get_config_manager
from utils.monitor import get_run_monitor

RULE = "-------------------------------"
SERIES_RULE = "---------------------------------"
COMPUTING = "...   COMPUTING     ..."

# Rows shown at each end of a compact table
COMPACT_HEAD = 5
COMPACT_TAIL = 10


def _out(line: str = "") -> None:
    print(line, flush=True)


def _row(n: int, value, wide: int = 17) -> str:
    pad = " " * (wide - len(str(n)) + 1)
    return f"{n}{pad}| {value}"


def _formula_from_args(args) -> MachinFormula:
    if args.known:
        return known_formula(args.known)
    if args.formula_file:
        return load_formula(args.formula_file)
    raise NumericError("a formula file or --known NAME is required")


async def _monitored(label: str, func: Callable, *func_args):
    """Run a blocking computation in a thread while sampling resources."""
    settings = get_config_manager().settings
    monitor = get_run_monitor(settings.stats_dir, settings.memory_threshold, settings.cpu_threshold)
    await monitor.start_monitoring(label)
    try:
        return await asyncio.to_thread(func, *func_args)
    finally:
        await monitor.stop()


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_machin_expand(args) -> int:
    formula, state = expand_formula(args.k, args.max_m)
    if args.out:
        save_formula(formula, args.out)

    if args.report == "json":
        _out(json.dumps({
            "k": state.k,
            "A_k": format_int(state.A_k),
            "terminated": state.terminated,
            "B": [format_rational(b) for b in state.B_list],
            "formula": formula_to_record(formula).model_dump(),
        }, indent=2))
        return 0

    status = "terminated" if state.terminated else f"stopped after {args.max_m} floor terms"
    _out(f"k = {state.k}, A_{state.k} = {state.A_k}, {status}")
    _out(RULE)
    _out("Coefficient | Beta")
    _out(RULE)
    for term in formula.terms:
        _out(_row(term.coeff, format_rational(term.beta), wide=11))
    _out(RULE)
    _out(f"{len(formula)} terms")
    return 0


def cmd_machin_validate(args) -> int:
    formula = _formula_from_args(args)
    report = check_product_relation(formula)

    if args.report == "json":
        _out(json.dumps(report.to_dict(), indent=2))
    else:
        _out("valid" if report.is_valid else "invalid")
        _out(f"product: {report.product}")
        if report.lehmer is not None:
            _out(f"lehmer: {report.lehmer.to_decimal_string(6)}")
        if report.rational_beta:
            _out("note: some beta values are not integers")
    return 0 if report.is_valid else 1


def cmd_machin_lehmer(args) -> int:
    formula = _formula_from_args(args)
    precision = args.precision or get_config_manager().settings.lehmer_precision
    measure = lehmer_measure(formula, precision)
    if args.report == "json":
        _out(json.dumps({"lehmer": str(measure), "terms": len(formula)}))
    else:
        _out(measure.to_decimal_string(6))
    return 0


def _arctan_evaluator(method: str, emi_m: int) -> Callable[[MPReal, int], MPReal]:
    if method == "maclaurin":
        return arctan_maclaurin
    if method == "euler":
        return arctan_euler
    if method == "emi1":
        return arctan_emi1
    return lambda x, n: arctan_emi(x, n, emi_m)


async def series_rows(x: MPReal, method: str, max_n: int, emi_m: int,
                      max_concurrent: int) -> List[Tuple[int, int]]:
    """
    Correct digits of the chosen arctan series for n = 1..max_n

    Rows are computed concurrently and returned sorted by n.
    """
    reference_precision = x.precision + 50
    x_ref = x.with_precision(reference_precision)
    reference = arctan_emi1(x_ref, emi_order(x_ref, reference_precision))
    evaluate = _arctan_evaluator(method, emi_m)
    semaphore = asyncio.Semaphore(max_concurrent)

    async def bounded_row(n: int) -> Tuple[int, int]:
        """Evaluate one row with concurrency limit"""
        async with semaphore:
            value = await asyncio.to_thread(evaluate, x, n)
            return n, agreement_digits(value, reference)

    rows = []
    for future in asyncio.as_completed([bounded_row(n) for n in range(1, max_n + 1)]):
        n, digits = await future
        logger.debug(f"{CYAN}{method} n={n}: {digits} digits{RESET}")
        rows.append((n, digits))
    rows.sort()
    return rows


def cmd_series_report(args) -> int:
    settings = get_config_manager().settings
    x = MPReal.from_rational(parse_rational(args.arctan_arg), args.precision)
    rows = asyncio.run(series_rows(x, args.method, args.max_n, args.emi_m, settings.max_concurrent))

    if args.report == "json":
        _out(json.dumps({"method": args.method, "arg": args.arctan_arg,
                         "rows": [[n, d] for n, d in rows]}))
        return 0

    _out("Increment of n | Correct digits")
    _out(SERIES_RULE)
    for n, digits in rows:
        _out(_row(n, digits, wide=14))
    return 0


def _print_heading(before_digits: int) -> None:
    _out(f"{before_digits} digits of π before iteration")
    _out(RULE)
    _out("Number of terms n | Digits of π")
    _out(RULE)


def _iteration_table_printer(max_n: int, compact: bool) -> Callable[[int, int], None]:
    def on_row(n: int, digits: int) -> None:
        get_run_monitor().update_stats(rows_computed=n)
        if not compact or n <= COMPACT_HEAD or n > max_n - COMPACT_TAIL:
            _out(_row(n, digits))
        elif n == COMPACT_HEAD + 1:
            _out(COMPUTING)

    return on_row


def cmd_pi_iterate(args) -> int:
    if args.seed_file:
        with open(args.seed_file, 'r') as f:
            seed, seed_digits = seed_from_json(f.read())
    else:
        seed_digits = args.seed_digits
        seed = bootstrap_pi(seed_digits)

    formula = formula_for(args.k, args.terms)
    config = make_config(args.k, args.terms, seed_digits, args.max_n,
                         formula=formula, seed_pi=seed, alpha_mode=args.alpha_mode)
    table = args.report == "table"
    on_row = _iteration_table_printer(args.max_n, args.compact) if table else None
    on_start = _print_heading if table else None

    label = f"pi_iterate_k{args.k}_t{args.terms}"
    pi_value, trace = asyncio.run(
        _monitored(label, iterate_modified, config, formula, seed, on_row, on_start))

    if args.out:
        with open(args.out, 'w') as f:
            f.write(seed_to_json(pi_value, trace.after_digits))
        logger.info(f"{GREEN}Seed with {trace.after_digits} digits written to {args.out}{RESET}")

    if table:
        _out(RULE)
        _out(f"{trace.after_digits} digits of π after iteration")
    else:
        _out(json.dumps(trace.to_report()))
    return 0


def cmd_pi_basic(args) -> int:
    label = f"pi_basic_k{args.k}"
    pi_value, trace = asyncio.run(_monitored(label, iterate_basic, args.k, args.rounds, args.precision))

    if args.report == "json":
        _out(json.dumps(trace.to_report()))
        return 0

    _out(f"{trace.before_digits} digits of π before iteration")
    _out(RULE)
    _out("Round             | Digits of π")
    _out(RULE)
    for r, digits in trace.rows:
        _out(_row(r, digits))
    _out(RULE)
    _out(f"{trace.after_digits} digits of π after iteration")
    return 0


def cmd_pi_rational_step(args) -> int:
    formula = formula_for(args.k, args.terms)
    before, after, _, tangent = rational_single_step(args.k, formula, args.terms, args.precision)

    if args.report == "json":
        _out(json.dumps({"tangent": format_rational(tangent), "before": before, "after": after}))
        return 0

    _out(f"tangent: {format_rational(tangent)}")
    _out(f"{before} digits of π before iteration")
    _out(f"{after} digits of π after iteration")
    return 0


def cmd_bootstrap(args) -> int:
    value = bootstrap_pi(args.digits)
    if args.report == "json":
        _out(json.dumps({"pi": str(value), "digits": args.digits}))
    else:
        _out(value.to_decimal_string(args.digits))
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    """
    Build the argument parser with one subparser per command

    Returns:
        Configured ArgumentParser
    """
    settings = get_config_manager().settings
    parser = argparse.ArgumentParser(prog="machin-pi",
                                     description="Machin-like formulas and pi iteration")
    report = argparse.ArgumentParser(add_help=False)
    report.add_argument("--report", choices=["table", "json"], default="table")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("machin-expand", parents=[report], help="expand a Machin-like formula at depth k")
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--max-m", type=_non_negative, default=settings.default_max_m)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_machin_expand)

    for name, handler, text in (("machin-validate", cmd_machin_validate, "check the product relation"),
                                ("machin-lehmer", cmd_machin_lehmer, "compute Lehmer's measure")):
        p = sub.add_parser(name, parents=[report], help=text)
        p.add_argument("formula_file", nargs="?")
        p.add_argument("--known", choices=known_formula_names())
        p.add_argument("--precision", type=_positive)
        p.set_defaults(handler=handler)

    p = sub.add_parser("series-report", parents=[report], help="arctan series convergence table")
    p.add_argument("--arctan-arg", required=True)
    p.add_argument("--method", choices=["maclaurin", "euler", "emi1", "emi"], default="emi1")
    p.add_argument("--emi-m", type=_positive, default=1)
    p.add_argument("--max-n", type=_positive, default=15)
    p.add_argument("--precision", type=_positive, default=500)
    p.set_defaults(handler=cmd_series_report)

    p = sub.add_parser(
        "pi-iterate", parents=[report], help="double the digits of a pi seed",
        description="Argument-reduced pi iteration. The error of a seed is squared and "
                    "divided by four, so a truncated --seed-digits seed ends a few digits "
                    "above a chained one. To reproduce the 100, 200, 402, 804 chain, "
                    "write each stage with --out and start the next with --seed-file.")
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--terms", type=_positive, default=1)
    seed = p.add_mutually_exclusive_group(required=True)
    seed.add_argument("--seed-digits", type=_positive, help="start from pi truncated to D decimals")
    seed.add_argument("--seed-file", help="start from the seed written by an earlier --out")
    p.add_argument("--max-n", type=_positive, default=42)
    p.add_argument("--alpha-mode", choices=["exact", "numeric", "auto"], default="auto")
    p.add_argument("--compact", action="store_true", help="show only the first and last rows")
    p.add_argument("--out", help="write the result as a seed file for the next stage")
    p.set_defaults(handler=cmd_pi_iterate)

    p = sub.add_parser("pi-basic", parents=[report], help="iteration without argument reduction")
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--rounds", type=_positive, default=5)
    p.add_argument("--precision", type=_positive, default=200)
    p.set_defaults(handler=cmd_pi_basic)

    p = sub.add_parser("pi-rational-step", parents=[report], help="one step with an exact rational tangent")
    p.add_argument("--k", type=_positive, default=4)
    p.add_argument("--terms", type=_positive, required=True)
    p.add_argument("--precision", type=_positive, default=100)
    p.set_defaults(handler=cmd_pi_rational_step)

    p = sub.add_parser("bootstrap", parents=[report], help="print pi truncated to D decimals")
    p.add_argument("--digits", type=_positive, required=True)
    p.set_defaults(handler=cmd_bootstrap)

    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments and run one subcommand

    Args:
        argv: Arguments without the program name

    Returns:
        Exit code
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("machin-validate", "machin-lehmer") and not (args.known or args.formula_file):
        parser.error(f"{args.command}: a formula file or --known NAME is required")

    try:
        return args.handler(args)
    except NumericError as e:
        code, message = classify_exception(e)
        logger.error(f"{RED}{args.command}: {message}{RESET}")
        sys.stderr.write(f"{args.command}: {message}\n")
        return code
    except (OSError, ValueError) as e:
        logger.error(f"{RED}{args.command}: {str(e)}{RESET}")
        sys.stderr.write(f"{args.command}: {e}\n")
        return 1


def main():
    """
    Main entry point when script is called directly
    """
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8")
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
