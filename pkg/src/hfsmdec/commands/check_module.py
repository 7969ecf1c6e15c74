"""``hfsmdec check-module`` — Test whether a state set is a (thin) module."""

from __future__ import annotations

import argparse

from hfsmdec.config import Config
from hfsmdec.errors import InputError
from hfsmdec.modules import analyze, is_thin_module
from hfsmdec.readers import load_fsm


def register(subparsers: argparse._SubParsersAction) -> None:
    """Register the ``check-module`` subcommand."""
    parser = subparsers.add_parser(
        "check-module",
        help="Report whether a state set is a module and whether it is thin",
    )
    parser.add_argument("input", help="Input machine (use '-' for stdin)")
    parser.add_argument(
        "-f",
        "--from-format",
        choices=["fsm", "hfsm", "json"],
        default=None,
        help="Input format (guessed from extension or content if not given)",
    )
    parser.add_argument(
        "--states",
        required=True,
        help="Comma-separated state ids, e.g. 2,3",
    )
    parser.set_defaults(func=run)


def parse_state_list(raw: str) -> list[str]:
    states = [s.strip() for s in raw.split(",") if s.strip()]
    if not states:
        raise InputError("--states needs at least one state id")
    return states


def run(args: argparse.Namespace, config: Config) -> int:
    """Print ``module: yes|no, thin: yes|no, entrance: <state>|none``.

    Exits 0 for a module, 1 otherwise.
    """
    z = load_fsm(args.input, args.from_format)
    info = analyze(z, parse_state_list(args.states))
    thin = is_thin_module(z, info.members)

    def yes(flag: bool) -> str:
        return "yes" if flag else "no"

    entrance = info.entrance if info.entrance is not None else "none"
    print(f"module: {yes(info.is_module)}, thin: {yes(thin)}, entrance: {entrance}")
    return 0 if info.is_module else 1
