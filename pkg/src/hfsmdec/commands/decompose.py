"""``hfsmdec decompose`` — Build the decomposition tree of a machine."""

from __future__ import annotations

import argparse

from hfsmdec.config import Config
from hfsmdec.decomposition import build_decomposition_tree, dimension
from hfsmdec.formatters import format_tree, resolve_output_format, write_output
from hfsmdec.log import get_logger
from hfsmdec.readers import load_fsm


def register(subparsers: argparse._SubParsersAction) -> None:
    """Register the ``decompose`` subcommand."""
    parser = subparsers.add_parser(
        "decompose",
        help="Compute the decomposition tree of indecomposable thin modules",
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
        "-t",
        "--to-format",
        "--format",
        dest="to_format",
        choices=["text", "dot", "json"],
        default=None,
        help="Output format (default: text)",
    )
    parser.add_argument(
        "-o", "--output", default=None, help="Output file (default: stdout)"
    )
    parser.add_argument(
        "--annotate",
        action="store_true",
        help="Label internal DOT nodes with their member sets",
    )
    parser.set_defaults(func=run)


def run(args: argparse.Namespace, config: Config) -> int:
    """Execute the decompose command."""
    logger = get_logger()
    z = load_fsm(args.input, args.from_format)
    tree = build_decomposition_tree(z)
    fmt = resolve_output_format(args.output, args.to_format, default="text")
    write_output(format_tree(tree, fmt, annotate=args.annotate), args.output)
    logger.info(
        "%s: %d indecomposable thin modules (%d non-singleton), %d tree arcs",
        z.name,
        len(tree),
        dimension(tree),
        tree.arc_count,
    )
    return 0
