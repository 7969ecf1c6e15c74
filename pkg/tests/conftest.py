"""Shared machines used across the test modules."""

from __future__ import annotations

from pathlib import Path
from typing import Callable

import pytest

from hfsmdec.formatters import format_fsm_text, format_hfsm_json
from hfsmdec.fsm import Fsm
from hfsmdec.hfsm import Hfsm, Nesting


def path_machine(n: int) -> Fsm:
    """``1 -x-> 2 -x-> ... -x-> n`` started at 1."""
    states = [str(i) for i in range(1, n + 1)]
    arcs = [(states[i], "x", states[i + 1]) for i in range(n - 1)]
    return Fsm.build(states, ["x"], arcs, "1", name=f"p{n}")


@pytest.fixture
def s1() -> Fsm:
    return Fsm.build(["1"], ["x"], [], "1", name="s1")


@pytest.fixture
def path() -> Callable[[int], Fsm]:
    return path_machine


@pytest.fixture
def p4() -> Fsm:
    return path_machine(4)


@pytest.fixture
def c3() -> Fsm:
    return Fsm.build(
        ["1", "2", "3"],
        ["a"],
        [("1", "a", "2"), ("2", "a", "3"), ("3", "a", "1")],
        "1",
        name="c3",
    )


@pytest.fixture
def h1() -> Hfsm:
    root = Fsm.build(["A", "c"], ["x", "y"], [("A", "y", "c")], "A", name="R")
    nested = Fsm.build(["a", "b"], ["x", "y"], [("a", "x", "b")], "a", name="N")
    return Hfsm.build([root, nested], "R", [Nesting("R", "A", "N")])


@pytest.fixture
def flat_h1() -> Fsm:
    return Fsm.build(
        ["a", "b", "c"],
        ["x", "y"],
        [("a", "x", "b"), ("a", "y", "c"), ("b", "y", "c")],
        "a",
        name="R",
    )


@pytest.fixture
def overlapping_non_thin() -> Fsm:
    """Exactly two non-trivial modules, {1,2,3} and {2,3,4}; neither is thin,
    and neither their union nor their intersection is a module."""
    return Fsm.build(
        ["0", "1", "2", "3", "4"],
        ["x", "y"],
        [
            ("1", "x", "2"),
            ("1", "y", "0"),
            ("2", "x", "1"),
            ("2", "y", "3"),
            ("3", "x", "4"),
            ("3", "y", "2"),
            ("4", "x", "4"),
        ],
        "2",
        name="overlap",
    )


@pytest.fixture
def non_thin_hfsm() -> Hfsm:
    """N nests at A but loops on x while its flattening also leaves on x."""
    root = Fsm.build(["A", "c"], ["x", "y"], [("A", "x", "c")], "A", name="R")
    nested = Fsm.build(
        ["a", "d"], ["x", "y"], [("a", "x", "a"), ("a", "y", "d")], "a", name="N"
    )
    return Hfsm.build([root, nested], "R", [Nesting("R", "A", "N")])


@pytest.fixture
def write_fsm(tmp_path: Path) -> Callable[[Fsm, str], str]:
    def _write(z: Fsm, name: str) -> str:
        path = tmp_path / name
        path.write_text(format_fsm_text(z) + "\n", encoding="utf-8")
        return str(path)

    return _write


@pytest.fixture
def write_hfsm(tmp_path: Path) -> Callable[[Hfsm, str], str]:
    def _write(z: Hfsm, name: str) -> str:
        path = tmp_path / name
        path.write_text(format_hfsm_json(z) + "\n", encoding="utf-8")
        return str(path)

    return _write
