"""Loading machines from files.

Supports: the line-oriented FSM text format and HFSM JSON.
"""

from __future__ import annotations

import json
import sys
from collections import Counter
from pathlib import Path
from typing import Optional, Union

from hfsmdec.errors import InputError, ParseError, ValidationError
from hfsmdec.fsm import Fsm
from hfsmdec.hfsm import Hfsm, Nesting, flatten
from hfsmdec.log import get_logger

Machine = Union[Fsm, Hfsm]

# ── Format detection ──────────────────────────────────────────────────────────

EXTENSION_FORMAT_MAP: dict[str, str] = {
    ".fsm": "fsm",
    ".hfsm": "hfsm",
    ".json": "hfsm",
}

FORMAT_ALIASES: dict[str, str] = {"fsm": "fsm", "hfsm": "hfsm", "json": "hfsm"}


def guess_format(filepath: str) -> Optional[str]:
    """Guess input format from file extension. Returns None if unknown."""
    suffix = Path(filepath).suffix.lower()
    return EXTENSION_FORMAT_MAP.get(suffix)


def sniff_format(text: str) -> str:
    return "hfsm" if text.lstrip().startswith("{") else "fsm"


def detect_or_require_format(
    filepath: Optional[str],
    explicit_format: Optional[str],
    text: Optional[str] = None,
) -> str:
    """Determine the format, raising if it cannot be inferred."""
    if explicit_format:
        fmt = FORMAT_ALIASES.get(explicit_format.lower())
        if fmt is None:
            raise InputError(
                f"Unsupported input format: '{explicit_format}'. Supported: fsm, hfsm"
            )
        return fmt
    if filepath and filepath != "-":
        fmt = guess_format(filepath)
        if fmt:
            return fmt
    if text is not None and text.strip():
        return sniff_format(text)
    raise InputError(
        "Cannot determine input format. Use -f/--from-format to specify. "
        "Supported: fsm, hfsm"
    )


# ── FSM text ──────────────────────────────────────────────────────────────────


def _tokens(line: str) -> list[str]:
    found: list[str] = []
    for token in line.split():
        if token.startswith("#"):
            break
        found.append(token)
    return found


def parse_fsm_text(text: str, path: Optional[str] = None) -> Fsm:
    """Parse the ``fsm`` / ``alphabet`` / ``states`` / ``start`` / ``trans``
    directive format."""
    name: Optional[str] = None
    alphabet: list[str] = []
    states: list[str] = []
    start: Optional[str] = None
    start_line = 0
    trans: list[tuple[int, str, str, str]] = []

    def fail(message: str, lineno: int) -> ParseError:
        return ParseError(message, line=lineno, path=path)

    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = _tokens(line)
        if not tokens:
            continue
        directive, args = tokens[0], tokens[1:]
        if directive == "fsm":
            if len(args) != 1:
                raise fail("'fsm' takes exactly one name", lineno)
            if name is not None:
                raise fail("repeated 'fsm' directive", lineno)
            name = args[0]
        elif directive == "alphabet":
            alphabet.extend(args)
        elif directive == "states":
            states.extend(args)
        elif directive == "start":
            if len(args) != 1:
                raise fail("'start' takes exactly one state", lineno)
            if start is not None:
                raise fail("repeated 'start' directive", lineno)
            start, start_line = args[0], lineno
        elif directive == "trans":
            if len(args) != 3:
                raise fail("'trans' takes <src> <sym> <dst>", lineno)
            trans.append((lineno, args[0], args[1], args[2]))
        else:
            raise fail(f"unknown directive '{directive}'", lineno)

    state_set = set(states)
    if len(state_set) != len(states):
        duplicates = sorted(q for q, c in Counter(states).items() if c > 1)
        raise ParseError(f"duplicate states: {', '.join(duplicates)}", path=path)
    if not states:
        raise ParseError("no 'states' directive", path=path)
    if start is None:
        raise ParseError("no 'start' directive", path=path)
    if start not in state_set:
        raise fail(f"start state '{start}' is not declared", start_line)

    symbols = set(alphabet)
    arcs: list[tuple[str, str, str]] = []
    seen: dict[tuple[str, str], int] = {}
    for lineno, src, sym, dst in trans:
        for q in (src, dst):
            if q not in state_set:
                raise fail(f"undeclared state '{q}'", lineno)
        if sym not in symbols:
            raise fail(f"symbol '{sym}' is not in the alphabet", lineno)
        if (src, sym) in seen:
            raise fail(
                f"duplicate transition for ({src}, {sym}); first given on line "
                f"{seen[(src, sym)]}",
                lineno,
            )
        seen[(src, sym)] = lineno
        arcs.append((src, sym, dst))

    if name is None:
        name = Path(path).stem if path and path != "-" else "fsm"
    return Fsm.build(states, alphabet, arcs, start, name=name)


# ── HFSM JSON ─────────────────────────────────────────────────────────────────


def _require(obj: dict, key: str, kind: type, where: str) -> object:
    if key not in obj:
        raise ValidationError("missing field", field=f"{where}{key}")
    value = obj[key]
    if not isinstance(value, kind):
        raise ValidationError(
            f"expected {kind.__name__}, got {type(value).__name__}",
            field=f"{where}{key}",
        )
    return value


def _strings(values: list, field: str) -> list[str]:
    for i, v in enumerate(values):
        if not isinstance(v, str) or not v or any(c.isspace() for c in v):
            raise ValidationError(
                "expected a nonempty token without whitespace", field=f"{field}[{i}]"
            )
    return values


def parse_hfsm_json(text: str, path: Optional[str] = None) -> Hfsm:
    """Parse and validate the HFSM JSON format."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno, path=path) from None
    if not isinstance(data, dict):
        raise ValidationError("expected a JSON object", field="$")

    alphabet = _strings(_require(data, "alphabet", list, ""), "alphabet")
    root = _require(data, "root", str, "")
    machines: list[Fsm] = []
    for i, raw in enumerate(_require(data, "machines", list, "")):
        where = f"machines[{i}]."
        if not isinstance(raw, dict):
            raise ValidationError("expected an object", field=f"machines[{i}]")
        name = _require(raw, "name", str, where)
        states = _strings(_require(raw, "states", list, where), f"{where}states")
        start = _require(raw, "start", str, where)
        arcs: list[tuple[str, str, str]] = []
        seen: set[tuple[str, str]] = set()
        for j, arc in enumerate(_require(raw, "transitions", list, where)):
            field = f"{where}transitions[{j}]"
            if (
                not isinstance(arc, list)
                or len(arc) != 3
                or not all(isinstance(t, str) for t in arc)
            ):
                raise ValidationError("expected [src, sym, dst]", field=field)
            if (arc[0], arc[1]) in seen:
                raise ValidationError(
                    f"duplicate transition for ({arc[0]}, {arc[1]})", field=field
                )
            seen.add((arc[0], arc[1]))
            arcs.append((arc[0], arc[1], arc[2]))
        try:
            machines.append(Fsm.build(states, alphabet, arcs, start, name=name))
        except InputError as e:
            raise ValidationError(str(e), field=f"machines[{i}]") from None

    nesting: list[Nesting] = []
    for i, raw in enumerate(data.get("nesting", [])):
        where = f"nesting[{i}]."
        if not isinstance(raw, dict):
            raise ValidationError("expected an object", field=f"nesting[{i}]")
        nesting.append(
            Nesting(
                parent=_require(raw, "parent", str, where),
                state=_require(raw, "state", str, where),
                child=_require(raw, "child", str, where),
            )
        )
    return Hfsm.build(machines, root, nesting, alphabet=alphabet)


# ── Loading ───────────────────────────────────────────────────────────────────


def read_text(filepath: str) -> str:
    if filepath == "-":
        return sys.stdin.read()
    p = Path(filepath)
    if not p.exists():
        raise FileNotFoundError(f"Input file not found: {filepath}")
    return p.read_text(encoding="utf-8")


def load_machine(filepath: str, fmt: Optional[str] = None) -> Machine:
    """Read an FSM or an HFSM, depending on the resolved format."""
    text = read_text(filepath)
    resolved = detect_or_require_format(filepath, fmt, text)
    get_logger().info("Reading %s (format: %s)", filepath, resolved)
    if resolved == "fsm":
        return parse_fsm_text(text, path=filepath)
    return parse_hfsm_json(text, path=filepath)


def load_fsm(filepath: str, fmt: Optional[str] = None) -> Fsm:
    """Read a flat machine; HFSM input is flattened."""
    machine = load_machine(filepath, fmt)
    if isinstance(machine, Hfsm):
        get_logger().debug("flattening %d machines from %s", machine.order, filepath)
        return flatten(machine)
    return machine


def load_hfsm(filepath: str, fmt: Optional[str] = None) -> Hfsm:
    """Read an HFSM; FSM input becomes an order-1 HFSM."""
    machine = load_machine(filepath, fmt)
    if isinstance(machine, Fsm):
        return Hfsm.flat(machine)
    return machine
