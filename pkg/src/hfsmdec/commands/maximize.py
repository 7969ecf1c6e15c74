"""``hfsmdec maximize`` — Rewrite a thin machine as a maximal HFSM."""

from __future__ import annotations

import argparse

from hfsmdec.config import Config
from hfsmdec.formatters import format_hfsm_json, write_output
from hfsmdec.hierarchy import maximize
from hfsmdec.log import get_logger
from hfsmdec.readers import load_hfsm


def register(subparsers: argparse._SubParsersAction) -> None:
    """Register the ``maximize`` subcommand."""
    parser = subparsers.add_parser(
        "maximize",
        help="Nest thin modules until every machine is prime (HFSM JSON output)",
    )
    parser.add_argument("input", help="Input FSM or thin HFSM (use '-' for stdin)")
    parser.add_argument(
        "-f",
        "--from-format",
        choices=["fsm", "hfsm", "json"],
        default=None,
        help="Input format (guessed from extension or content if not given)",
    )
    parser.add_argument(
        "-o", "--output", default=None, help="Output file (default: stdout)"
    )
    parser.set_defaults(func=run)


def run(args: argparse.Namespace, config: Config) -> int:
    """Execute the maximize command."""
    logger = get_logger()
    z = load_hfsm(args.input, args.from_format)
    result = maximize(z)
    write_output(format_hfsm_json(result), args.output)
    logger.info("order %d -> %d", z.order, result.order)
    return 0
