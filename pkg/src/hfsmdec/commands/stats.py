"""``hfsmdec stats`` — Summarize a machine and its decomposition."""

from __future__ import annotations

import argparse

from hfsmdec.config import Config
from hfsmdec.decomposition import arc_bound, build_decomposition_tree, dimension
from hfsmdec.hfsm import Hfsm, flatten, is_thin_hfsm
from hfsmdec.hierarchy import hfsm_dimension
from hfsmdec.readers import load_hfsm


def register(subparsers: argparse._SubParsersAction) -> None:
    """Register the ``stats`` subcommand."""
    parser = subparsers.add_parser(
        "stats", help="Print sizes, dimension and decomposition bounds"
    )
    parser.add_argument("input", help="Input FSM or HFSM (use '-' for stdin)")
    parser.add_argument(
        "-f",
        "--from-format",
        choices=["fsm", "hfsm", "json"],
        default=None,
        help="Input format (guessed from extension or content if not given)",
    )
    parser.set_defaults(func=run)


def stats_lines(z_hfsm: Hfsm) -> list[tuple[str, str]]:
    z = flatten(z_hfsm)
    tree = build_decomposition_tree(z)
    n = z.size
    low, high = (n + 1, 2 * n - 1) if n > 1 else (1, 1)
    count = len(tree)
    thin = is_thin_hfsm(z_hfsm)

    def verdict(ok: bool) -> str:
        return "ok" if ok else "VIOLATED"

    return [
        ("states", str(n)),
        ("symbols", str(len(z.alphabet))),
        ("arcs", str(len(z.transitions))),
        ("order", str(z_hfsm.order)),
        ("thin", "yes" if thin else "no"),
        ("dimension", str(hfsm_dimension(z_hfsm) if thin else dimension(tree))),
        ("indecomposable", f"{count} (bounds {low}..{high}: {verdict(low <= count <= high)})"),
        (
            "tree arcs",
            f"{tree.arc_count} (bound {arc_bound(z)}: "
            f"{verdict(tree.arc_count <= arc_bound(z))})",
        ),
        ("forest", "yes" if tree.is_tree() else "no"),
    ]


def run(args: argparse.Namespace, config: Config) -> int:
    """Print one ``key: value`` line per statistic."""
    lines = stats_lines(load_hfsm(args.input, args.from_format))
    width = max(len(k) for k, _ in lines)
    for key, val in lines:
        print(f"{key + ':':<{width + 1}} {val}")
    return 0
