"""``hfsmdec verify`` — Run the property suite on a file or random machines."""

from __future__ import annotations

import argparse

from hfsmdec.config import Config
from hfsmdec.errors import InputError
from hfsmdec.formatters import write_output
from hfsmdec.log import get_logger
from hfsmdec.readers import load_machine
from hfsmdec.verify import RandomBounds, verify_machine, verify_random


def register(subparsers: argparse._SubParsersAction) -> None:
    """Register the ``verify`` subcommand."""
    parser = subparsers.add_parser(
        "verify",
        help="Check every decomposition property against brute-force oracles",
    )
    parser.add_argument(
        "input", nargs="?", default=None, help="Machine to check (omit with --random)"
    )
    parser.add_argument(
        "-f",
        "--from-format",
        choices=["fsm", "hfsm", "json"],
        default=None,
        help="Input format (guessed from extension or content if not given)",
    )
    parser.add_argument(
        "--random", action="store_true", help="Check randomly generated machines"
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help="First random seed (or $HFSMDEC_SEED / .hfsmdec/seed; default 0)",
    )
    parser.add_argument(
        "--count", type=int, default=100, help="Number of random seeds (default: 100)"
    )
    parser.add_argument(
        "--max-n", type=int, default=7, help="Largest random machine (default: 7)"
    )
    parser.add_argument(
        "--max-k", type=int, default=3, help="Largest random alphabet (default: 3)"
    )
    parser.add_argument(
        "--max-splits",
        type=int,
        default=3,
        help="Most nestings in a random HFSM (default: 3)",
    )
    parser.add_argument(
        "--dump-dir",
        default=None,
        help=(
            "Directory for replayable counterexample files "
            "(or $HFSMDEC_DUMP_DIR / .hfsmdec/dump-dir; default: hfsmdec-counterexamples)"
        ),
    )
    parser.add_argument(
        "-o", "--output", default=None, help="Report file (default: stdout)"
    )
    parser.set_defaults(func=run)


def run(args: argparse.Namespace, config: Config) -> int:
    """Exit 0 when every property holds, 3 otherwise."""
    logger = get_logger()
    if args.random == (args.input is not None):
        raise InputError("give either an input file or --random")

    if args.random:
        if args.count < 1 or args.max_n < 1 or args.max_k < 1 or args.max_splits < 0:
            raise InputError("--count, --max-n and --max-k must be positive")
        bounds = RandomBounds(max_n=args.max_n, max_k=args.max_k, max_splits=args.max_splits)
        logger.info(
            "checking %d seeds from %d (n <= %d, k <= %d, %d job(s))",
            args.count,
            config.seed,
            args.max_n,
            args.max_k,
            config.jobs,
        )
        report = verify_random(config, args.count, bounds)
    else:
        report = verify_machine(load_machine(args.input, args.from_format), config)

    write_output(report.to_text(), args.output)
    if report.counterexamples:
        written = report.dump(config.dump_dir)
        logger.warning(
            "wrote %d counterexample(s) to %s", len(written), config.dump_dir
        )
    if not report.ok:
        logger.error("property suite failed")
        return 3
    return 0
