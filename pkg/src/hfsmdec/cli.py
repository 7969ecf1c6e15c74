"""``hfsmdec`` — command-line entry point."""

from __future__ import annotations

import argparse
import sys

from hfsmdec.config import ConfigError, resolve_config
from hfsmdec.errors import HfsmdecError
from hfsmdec.log import setup_logging, verbosity_from_flags


def build_parser() -> argparse.ArgumentParser:
    """Build the top-level argument parser with all subcommands."""

    parser = argparse.ArgumentParser(
        prog="hfsmdec",
        description="Thin modular decomposition of FSMs and maximal HFSMs",
    )

    # ── Global options ────────────────────────────────────────────────────
    parser.add_argument(
        "--oracle-limit",
        type=int,
        default=None,
        help="Largest machine for brute-force oracles "
        "(or $HFSMDEC_ORACLE_LIMIT / .hfsmdec/oracle-limit; default 14)",
    )
    parser.add_argument(
        "--jobs",
        type=int,
        default=None,
        help="Worker processes for verify (or $HFSMDEC_JOBS / .hfsmdec/jobs; default 1)",
    )
    parser.add_argument(
        "-q",
        "--quiet",
        action="store_true",
        default=False,
        help="Silent mode (no messages)",
    )
    parser.add_argument(
        "-v",
        action="count",
        default=0,
        dest="verbose",
        help="Increase verbosity (-v warnings, -vv info [default], -vvv debug)",
    )

    # ── Subcommands ───────────────────────────────────────────────────────
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    from hfsmdec.commands import (
        check_module,
        core,
        decompose,
        equiv,
        evaluate,
        flatten,
        maximize,
        stats,
        verify,
    )

    for command in (
        decompose,
        maximize,
        flatten,
        check_module,
        core,
        evaluate,
        equiv,
        stats,
        verify,
    ):
        command.register(subparsers)

    return parser


def main(argv: list[str] | None = None) -> int:
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    verbosity = verbosity_from_flags(args.quiet, args.verbose)
    logger = setup_logging(verbosity)

    if args.command is None:
        parser.print_help()
        return 0

    try:
        config = resolve_config(
            cli_seed=getattr(args, "seed", None),
            cli_oracle_limit=args.oracle_limit,
            cli_jobs=args.jobs,
            cli_dump_dir=getattr(args, "dump_dir", None),
        )
        return args.func(args, config)
    except ConfigError as e:
        logger.error("%s", e)
        return e.exit_code
    except HfsmdecError as e:
        logger.error("%s", e)
        return e.exit_code
    except FileNotFoundError as e:
        logger.error("%s", e)
        return 2
    except ValueError as e:
        logger.error("%s", e)
        return 2
    except KeyboardInterrupt:
        logger.info("Interrupted.")
        return 130
    except Exception as e:
        logger.error("Unexpected error: %s", e, exc_info=verbosity >= 3)
        return 3


if __name__ == "__main__":
    sys.exit(main())
