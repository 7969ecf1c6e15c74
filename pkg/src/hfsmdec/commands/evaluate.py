"""``hfsmdec eval`` — Run a word through a machine."""

from __future__ import annotations

import argparse

from hfsmdec.config import Config
from hfsmdec.fsm import eval_fsm
from hfsmdec.hfsm import Hfsm, eval_hfsm
from hfsmdec.readers import load_machine


def register(subparsers: argparse._SubParsersAction) -> None:
    """Register the ``eval`` subcommand."""
    parser = subparsers.add_parser(
        "eval", help="Print the state reached by a word, or 'undefined'"
    )
    parser.add_argument("input", help="Input FSM or HFSM (use '-' for stdin)")
    parser.add_argument("word", nargs="*", help="Symbols, one per argument")
    parser.add_argument(
        "-f",
        "--from-format",
        choices=["fsm", "hfsm", "json"],
        default=None,
        help="Input format (guessed from extension or content if not given)",
    )
    parser.set_defaults(func=run)


def run(args: argparse.Namespace, config: Config) -> int:
    """Execute the eval command."""
    machine = load_machine(args.input, args.from_format)
    if isinstance(machine, Hfsm):
        reached = eval_hfsm(machine, args.word)
    else:
        reached = eval_fsm(machine, args.word)
    print(reached if reached is not None else "undefined")
    return 0
