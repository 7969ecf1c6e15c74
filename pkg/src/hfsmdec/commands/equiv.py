"""``hfsmdec equiv`` — Compare two machines by their flattenings."""

from __future__ import annotations

import argparse

from hfsmdec.config import Config
from hfsmdec.fsm import equivalent
from hfsmdec.readers import load_fsm


def register(subparsers: argparse._SubParsersAction) -> None:
    """Register the ``equiv`` subcommand."""
    parser = subparsers.add_parser(
        "equiv",
        help="Exit 0 if two FSMs/HFSMs are equivalent, 1 otherwise",
    )
    parser.add_argument("first", help="First machine")
    parser.add_argument("second", help="Second machine")
    parser.add_argument(
        "-f",
        "--from-format",
        choices=["fsm", "hfsm", "json"],
        default=None,
        help="Input format for both files (guessed per file if not given)",
    )
    parser.set_defaults(func=run)


def run(args: argparse.Namespace, config: Config) -> int:
    """Execute the equiv command."""
    same = equivalent(
        load_fsm(args.first, args.from_format),
        load_fsm(args.second, args.from_format),
    )
    print("equivalent" if same else "not equivalent")
    return 0 if same else 1
