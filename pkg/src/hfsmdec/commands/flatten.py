"""``hfsmdec flatten`` — Expand every nested machine."""

from __future__ import annotations

import argparse

from hfsmdec.config import Config
from hfsmdec.formatters import format_fsm, resolve_output_format, write_output
from hfsmdec.hierarchy import laminar_modules
from hfsmdec.readers import load_fsm


def register(subparsers: argparse._SubParsersAction) -> None:
    """Register the ``flatten`` subcommand."""
    parser = subparsers.add_parser(
        "flatten", help="Print the single machine equivalent to an HFSM"
    )
    parser.add_argument("input", help="Input HFSM or FSM (use '-' for stdin)")
    parser.add_argument(
        "-f",
        "--from-format",
        choices=["fsm", "hfsm", "json"],
        default=None,
        help="Input format (guessed from extension or content if not given)",
    )
    parser.add_argument(
        "-t",
        "--to-format",
        "--format",
        dest="to_format",
        choices=["fsm", "json", "dot"],
        default=None,
        help="Output format (default: fsm)",
    )
    parser.add_argument(
        "-o", "--output", default=None, help="Output file (default: stdout)"
    )
    parser.add_argument(
        "--show-modules",
        action="store_true",
        help="Draw the nested thin modules of a maximal HFSM as DOT clusters",
    )
    parser.set_defaults(func=run)


def run(args: argparse.Namespace, config: Config) -> int:
    """Execute the flatten command."""
    z = load_fsm(args.input, args.from_format)
    fmt = resolve_output_format(args.output, args.to_format, default="fsm")
    modules = laminar_modules(z) if args.show_modules and fmt == "dot" else []
    write_output(format_fsm(z, fmt, modules=modules), args.output)
    return 0
