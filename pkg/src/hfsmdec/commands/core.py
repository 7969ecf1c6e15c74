"""``hfsmdec core`` — List the canonical contracted forms of a thin HFSM."""

from __future__ import annotations

import argparse

from hfsmdec.config import Config
from hfsmdec.formatters import format_core, write_output
from hfsmdec.hierarchy import core
from hfsmdec.log import get_logger
from hfsmdec.readers import load_hfsm


def register(subparsers: argparse._SubParsersAction) -> None:
    """Register the ``core`` subcommand."""
    parser = subparsers.add_parser(
        "core", help="Print the core: canonical contracted forms with multiplicity"
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
    """Execute the core command."""
    counts = core(load_hfsm(args.input, args.from_format))
    write_output(format_core(counts), args.output)
    get_logger().info("core of size %d", sum(counts.values()))
    return 0
