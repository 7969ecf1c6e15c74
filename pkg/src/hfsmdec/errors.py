"""Exception hierarchy shared by the library and the command line.

Every exception carries the process exit code the CLI reports for it.
"""

from __future__ import annotations

from typing import Optional


class HfsmdecError(Exception):
    """Base class for all errors raised by hfsmdec."""

    exit_code: int = 3


class InputError(HfsmdecError):
    """The caller supplied a machine, state set or file that cannot be used."""

    exit_code = 2


class ParseError(InputError):
    """Malformed FSM text or HFSM JSON."""

    def __init__(
        self,
        message: str,
        *,
        line: Optional[int] = None,
        path: Optional[str] = None,
    ) -> None:
        self.line = line
        self.path = path
        where = ""
        if path:
            where = f"{path}:"
        if line is not None:
            where = f"{where}{line}:"
        super().__init__(f"{where} {message}" if where else message)


class ValidationError(InputError):
    """A loaded HFSM violates a structural rule; ``field`` names the culprit."""

    def __init__(self, message: str, *, field: str = "") -> None:
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class UnknownStateError(InputError):
    """A state id that does not belong to the machine."""


class UnknownSymbolError(InputError):
    """A symbol outside the machine's alphabet."""


class StateCollisionError(InputError):
    """Two machines (or a machine and a generated block) share a state id."""


class QuotientError(InputError):
    """A block has arcs on one symbol into two different blocks."""


class NotAModuleError(InputError):
    """The state set is not a module of the machine."""


class NotThinError(InputError):
    """The state set, or a nested machine, is not a thin module."""


class InaccessibleError(InputError):
    """The operation needs every state reachable from the start state."""


class OracleLimitError(InputError):
    """Brute-force enumeration requested above the configured size bound."""


class InvariantError(HfsmdecError):
    """An internal consistency check failed."""

    exit_code = 3
