"""Output formatting for machines, decomposition trees and cores."""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Iterable, Optional

from hfsmdec.decomposition import DecompTree
from hfsmdec.fsm import Fsm, State, block_name
from hfsmdec.hfsm import Hfsm
from hfsmdec.hierarchy import Core

# ── Format detection ──────────────────────────────────────────────────────────

OUTPUT_EXTENSION_MAP: dict[str, str] = {
    ".fsm": "fsm",
    ".hfsm": "json",
    ".json": "json",
    ".dot": "dot",
    ".gv": "dot",
    ".txt": "text",
}


def guess_output_format(filepath: str) -> Optional[str]:
    """Guess output format from file extension."""
    suffix = Path(filepath).suffix.lower()
    return OUTPUT_EXTENSION_MAP.get(suffix)


def resolve_output_format(
    outfile: Optional[str],
    explicit_format: Optional[str],
    default: str = "text",
) -> str:
    """Determine output format from explicit flag, outfile extension, or default."""
    if explicit_format:
        return explicit_format.lower()
    if outfile:
        fmt = guess_output_format(outfile)
        if fmt:
            return fmt
    return default


def _gvquote(s: str) -> str:
    return '"{}"'.format(s.replace("\\", "\\\\").replace('"', r"\""))


# ── Machines ──────────────────────────────────────────────────────────────────


def format_fsm_text(z: Fsm) -> str:
    """Serialize in the directive format read by ``parse_fsm_text``."""
    lines = [
        f"fsm {z.name}",
        " ".join(["alphabet", *z.sorted_alphabet()]),
        " ".join(["states", *z.sorted_states()]),
        f"start {z.start}",
    ]
    lines.extend(f"trans {src} {sym} {dst}" for src, sym, dst in z.arcs())
    return "\n".join(lines)


def format_hfsm_json(z: Hfsm) -> str:
    return json.dumps(z.to_dict(), indent=2)


def _laminar_parents(family: list[frozenset[State]]) -> dict[int, Optional[int]]:
    """Index of the smallest strictly larger set containing each set."""
    parents: dict[int, Optional[int]] = {}
    for i, s in enumerate(family):
        holders = [j for j, t in enumerate(family) if j != i and s < t]
        parents[i] = min(holders, key=lambda j: len(family[j])) if holders else None
    return parents


def fsm_to_dot(z: Fsm, modules: Iterable[frozenset[State]] = ()) -> str:
    """DOT digraph of ``z``; each of the laminar ``modules`` is drawn as a
    cluster."""
    family = sorted({frozenset(m) for m in modules}, key=lambda m: (len(m), sorted(m)))
    parents = _laminar_parents(family)
    owner: dict[State, Optional[int]] = {}
    for q in z.sorted_states():
        holders = [i for i, m in enumerate(family) if q in m]
        owner[q] = holders[0] if holders else None

    lines = [f"digraph {_gvquote(z.name)} {{", "  rankdir=LR;", "  node [shape=circle];"]
    lines.append("  __start [shape=point];")
    lines.append(f"  __start -> {_gvquote(z.start)};")

    def emit(cluster: Optional[int], indent: str) -> None:
        for i in range(len(family)):
            if parents[i] == cluster:
                lines.append(f"{indent}subgraph cluster_{i} {{")
                lines.append(f"{indent}  label={_gvquote(block_name(family[i]))};")
                lines.append(f"{indent}  color=grey;")
                emit(i, indent + "  ")
                lines.append(f"{indent}}}")
        for q in z.sorted_states():
            if owner[q] == cluster:
                lines.append(f"{indent}{_gvquote(q)};")

    emit(None, "  ")
    for src, sym, dst in z.arcs():
        lines.append(f"  {_gvquote(src)} -> {_gvquote(dst)} [label={_gvquote(sym)}];")
    lines.append("}")
    return "\n".join(lines)


def format_fsm(z: Fsm, fmt: str, *, modules: Iterable[frozenset[State]] = ()) -> str:
    fmt_lower = fmt.lower()
    if fmt_lower == "fsm":
        return format_fsm_text(z)
    elif fmt_lower == "json":
        return format_hfsm_json(Hfsm.flat(z))
    elif fmt_lower == "dot":
        return fsm_to_dot(z, modules)
    else:
        raise ValueError(f"Unsupported output format: '{fmt}'")


# ── Decomposition trees ───────────────────────────────────────────────────────


def tree_to_text(tree: DecompTree) -> str:
    """One internal node per line: id, module, covered node ids."""
    lines: list[str] = []
    for t in tree.internal_nodes():
        children = " ".join(str(c) for c in tree.children(t))
        lines.append(f"{t}\t{block_name(tree.members(t))}\t{children}")
    return "\n".join(lines)


def tree_to_dot(tree: DecompTree, *, annotate: bool = False) -> str:
    lines = [f"digraph {_gvquote(tree.fsm_name)} {{", "  node [shape=circle];"]
    for t in sorted(tree.graph.nodes):
        if tree.is_sink(t):
            label = tree.label(t)
        elif annotate:
            label = block_name(tree.members(t))
        else:
            label = ""
        lines.append(f"  {t} [label={_gvquote(label)}];")
    for a, b in tree.arcs():
        lines.append(f"  {a} -> {b};")
    lines.append("}")
    return "\n".join(lines)


def tree_to_json(tree: DecompTree) -> str:
    return json.dumps(tree.to_json(), indent=2)


def format_tree(tree: DecompTree, fmt: str, *, annotate: bool = False) -> str:
    fmt_lower = fmt.lower()
    if fmt_lower == "text":
        return tree_to_text(tree)
    elif fmt_lower == "dot":
        return tree_to_dot(tree, annotate=annotate)
    elif fmt_lower == "json":
        return tree_to_json(tree)
    else:
        raise ValueError(f"Unsupported output format: '{fmt}'")


# ── Cores ─────────────────────────────────────────────────────────────────────


def format_core(counts: Core) -> str:
    """``multiplicity<TAB>canonical machine`` per distinct form."""
    return "\n".join(f"{n}\t{form.render()}" for form, n in sorted(counts.items()))


# ── Output writing ────────────────────────────────────────────────────────────


def write_output(text: str, outfile: Optional[str] = None) -> None:
    """Write formatted output to file or stdout."""
    if outfile:
        Path(outfile).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")
