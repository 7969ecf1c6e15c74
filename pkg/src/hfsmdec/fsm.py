"""Deterministic finite state machines and their quotient algebra.

An :class:`Fsm` is a labelled pseudodigraph with a start state: at most one
arc leaves a state on each symbol, and a missing arc means the transition is
undefined.  The functions below build new machines from old ones (quotient,
contraction, restriction, expansion) and never mutate their inputs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from hfsmdec.errors import (
    InaccessibleError,
    InputError,
    QuotientError,
    StateCollisionError,
    UnknownStateError,
    UnknownSymbolError,
)
from hfsmdec.log import get_logger

State = str
Symbol = str
Arc = tuple[State, Symbol, State]


@dataclass(frozen=True, slots=True)
class Fsm:
    """An FSM ``(states, alphabet, transitions, start)``.

    Equality compares states, transitions and start only.  ``alphabet`` and
    ``name`` are carried along but do not take part in comparison.
    """

    states: frozenset[State]
    alphabet: frozenset[Symbol] = field(compare=False)
    transitions: Mapping[tuple[State, Symbol], State]
    start: State
    name: str = field(default="fsm", compare=False)
    _out: dict[State, dict[Symbol, State]] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        if self.start not in self.states:
            raise UnknownStateError(f"start state {self.start!r} is not a state")
        out: dict[State, dict[Symbol, State]] = {q: {} for q in self.states}
        for (src, sym), dst in self.transitions.items():
            if src not in self.states:
                raise UnknownStateError(f"transition source {src!r} is not a state")
            if dst not in self.states:
                raise UnknownStateError(f"transition target {dst!r} is not a state")
            if sym not in self.alphabet:
                raise UnknownSymbolError(f"symbol {sym!r} is not in the alphabet")
            out[src][sym] = dst
        object.__setattr__(self, "_out", out)

    def __hash__(self) -> int:
        return hash((self.states, frozenset(self.transitions.items()), self.start))

    @classmethod
    def build(
        cls,
        states: Iterable[State],
        alphabet: Iterable[Symbol],
        arcs: Iterable[Arc],
        start: State,
        name: str = "fsm",
    ) -> Fsm:
        """Construct from arc triples, rejecting a second arc on the same symbol."""
        transitions: dict[tuple[State, Symbol], State] = {}
        for src, sym, dst in arcs:
            key = (src, sym)
            if key in transitions and transitions[key] != dst:
                raise InputError(
                    f"nondeterministic transition: {src!r} has two {sym!r}-arcs"
                )
            transitions[key] = dst
        return cls(
            states=frozenset(states),
            alphabet=frozenset(alphabet),
            transitions=transitions,
            start=start,
            name=name,
        )

    # ── Queries ───────────────────────────────────────────────────────────

    @property
    def size(self) -> int:
        return len(self.states)

    def delta(self, q: State, x: Symbol) -> Optional[State]:
        """Single-step transition; ``None`` when undefined."""
        return self._out[q].get(x)

    def out_arcs(self, q: State) -> Mapping[Symbol, State]:
        return self._out[q]

    def arcs(self) -> Iterator[Arc]:
        """All arcs in sorted (source, symbol) order."""
        for src, sym in sorted(self.transitions):
            yield src, sym, self.transitions[(src, sym)]

    def sorted_states(self) -> list[State]:
        return sorted(self.states)

    def sorted_alphabet(self) -> list[Symbol]:
        return sorted(self.alphabet)

    def require_state(self, q: State) -> State:
        if q not in self.states:
            raise UnknownStateError(f"{q!r} is not a state of {self.name}")
        return q

    def require_states(self, members: Iterable[State]) -> frozenset[State]:
        found = frozenset(members)
        unknown = sorted(found - self.states)
        if unknown:
            raise UnknownStateError(
                f"not states of {self.name}: {', '.join(unknown)}"
            )
        return found

    def renamed(self, name: str) -> Fsm:
        return Fsm(
            states=self.states,
            alphabet=self.alphabet,
            transitions=self.transitions,
            start=self.start,
            name=name,
        )


def block_name(members: Iterable[State]) -> State:
    """State id for a contracted block: ``{m1,m2,...}`` over sorted members."""
    ordered = sorted(members)
    if len(ordered) == 1:
        return ordered[0]
    return "{" + ",".join(ordered) + "}"


# ── Execution ─────────────────────────────────────────────────────────────


def check_word(alphabet: frozenset[Symbol], word: Sequence[Symbol]) -> None:
    for sym in word:
        if sym not in alphabet:
            raise UnknownSymbolError(f"symbol {sym!r} is not in the alphabet")


def eval_fsm(z: Fsm, word: Sequence[Symbol]) -> Optional[State]:
    """Run ``word`` from the start state; ``None`` once a step is undefined."""
    check_word(z.alphabet, word)
    q: Optional[State] = z.start
    for sym in word:
        q = z.delta(q, sym)
        if q is None:
            return None
    return q


def bfs_order(z: Fsm) -> list[State]:
    """States reachable from start, in breadth-first visit order."""
    symbols = z.sorted_alphabet()
    seen = {z.start}
    order = [z.start]
    queue = deque([z.start])
    while queue:
        q = queue.popleft()
        out = z.out_arcs(q)
        for sym in symbols:
            r = out.get(sym)
            if r is not None and r not in seen:
                seen.add(r)
                order.append(r)
                queue.append(r)
    return order


def is_accessible(z: Fsm) -> bool:
    return len(bfs_order(z)) == len(z.states)


def accessible_part(z: Fsm) -> Fsm:
    """The sub-machine induced on states reachable from the start state."""
    reachable = frozenset(bfs_order(z))
    if len(reachable) == len(z.states):
        return z
    get_logger().debug(
        "%s: dropping %d unreachable state(s)", z.name, len(z.states) - len(reachable)
    )
    return _induced(z, reachable, z.start, z.name)


def require_accessible(z: Fsm) -> Fsm:
    if not is_accessible(z):
        unreachable = sorted(z.states - frozenset(bfs_order(z)))
        raise InaccessibleError(
            f"{z.name} has states unreachable from {z.start!r}: "
            + ", ".join(unreachable)
        )
    return z


def reverse_bfs_order(z: Fsm) -> list[State]:
    """Breadth-first order from start (sorted-symbol tie-break), reversed."""
    order = bfs_order(z)
    if len(order) != len(z.states):
        require_accessible(z)
    order.reverse()
    return order


# ── Quotient algebra ──────────────────────────────────────────────────────


def _induced(z: Fsm, members: frozenset[State], start: State, name: str) -> Fsm:
    transitions = {
        key: dst
        for key, dst in z.transitions.items()
        if key[0] in members and dst in members
    }
    return Fsm(
        states=members,
        alphabet=z.alphabet,
        transitions=transitions,
        start=start,
        name=name,
    )


def quotient(z: Fsm, partition: Iterable[Iterable[State]]) -> Fsm:
    """The quotient machine over a partition of the states.

    Singleton blocks keep their state id; larger blocks are named by
    :func:`block_name`.  Arcs between members of one multi-state block are
    dropped.  Raises :class:`QuotientError` when a block would need two
    different targets on one symbol.
    """
    blocks = [frozenset(b) for b in partition]
    block_of: dict[State, State] = {}
    names: set[State] = set()
    for block in blocks:
        if not block:
            raise InputError("partition contains an empty block")
        z.require_states(block)
        label = block_name(block)
        if label in names:
            raise StateCollisionError(f"duplicate block name {label!r}")
        if len(block) > 1 and label in z.states and label not in block:
            raise StateCollisionError(
                f"block name {label!r} collides with an existing state"
            )
        names.add(label)
        for q in block:
            if q in block_of:
                raise InputError(f"state {q!r} appears in two blocks")
            block_of[q] = label
    missing = sorted(z.states - block_of.keys())
    if missing:
        raise InputError(f"partition does not cover: {', '.join(missing)}")

    size = {block_name(b): len(b) for b in blocks}
    transitions: dict[tuple[State, Symbol], State] = {}
    for (src, sym), dst in z.transitions.items():
        bs, bd = block_of[src], block_of[dst]
        if bs == bd and size[bs] > 1:
            continue
        previous = transitions.get((bs, sym))
        if previous is not None and previous != bd:
            raise QuotientError(
                f"block {bs} has {sym!r}-arcs into {previous} and {bd}"
            )
        transitions[(bs, sym)] = bd
    return Fsm(
        states=frozenset(names),
        alphabet=z.alphabet,
        transitions=transitions,
        start=block_of[z.start],
        name=z.name,
    )


def contract(z: Fsm, sets: Iterable[Iterable[State]]) -> Fsm:
    """Contract each of the disjoint ``sets`` to a single block state."""
    chosen = [frozenset(s) for s in sets]
    covered: set[State] = set()
    for s in chosen:
        if not s:
            raise InputError("cannot contract an empty set")
        if covered & s:
            raise InputError("contracted sets must be pairwise disjoint")
        covered |= s
    if not chosen:
        return z
    rest = [frozenset([q]) for q in z.states - covered]
    return quotient(z, chosen + rest)


def restriction_start(z: Fsm, members: frozenset[State]) -> State:
    """Start of ``z[members]``: the global start if inside, else the member
    receiving most arcs from outside (ties to the smallest id)."""
    if z.start in members:
        return z.start
    incoming = {q: 0 for q in members}
    for (src, _), dst in z.transitions.items():
        if dst in members and src not in members:
            incoming[dst] += 1
    return min(members, key=lambda q: (-incoming[q], q))


def restrict(z: Fsm, members: Iterable[State], name: Optional[str] = None) -> Fsm:
    """The induced sub-machine on ``members``."""
    chosen = z.require_states(members)
    if not chosen:
        raise InputError("cannot restrict to an empty set")
    return _induced(
        z,
        chosen,
        restriction_start(z, chosen),
        name if name is not None else z.name,
    )


def expand(g: Fsm, v: State, h: Fsm) -> Fsm:
    """Substitute machine ``h`` for state ``v`` of ``g``.

    Arcs of ``g`` into ``v`` enter ``h`` at its start.  A state of ``h``
    without an arc on some symbol inherits ``v``'s arc on that symbol; when
    that arc is a self-loop on ``v`` it re-enters ``h`` at its start.
    """
    g.require_state(v)
    clash = sorted((g.states - {v}) & h.states)
    if clash:
        raise StateCollisionError(
            f"cannot expand {h.name} into {g.name}: shared states {', '.join(clash)}"
        )
    alphabet = g.alphabet | h.alphabet
    transitions: dict[tuple[State, Symbol], State] = {}
    for (src, sym), dst in g.transitions.items():
        if src == v:
            continue
        transitions[(src, sym)] = h.start if dst == v else dst
    fallback = g.out_arcs(v)
    for q in h.states:
        own = h.out_arcs(q)
        for sym in alphabet:
            dst = own.get(sym)
            if dst is None:
                dst = fallback.get(sym)
                if dst == v:
                    dst = h.start
            if dst is not None:
                transitions[(q, sym)] = dst
    return Fsm(
        states=(g.states - {v}) | h.states,
        alphabet=alphabet,
        transitions=transitions,
        start=h.start if v == g.start else g.start,
        name=g.name,
    )


def equivalent(y: Fsm, z: Fsm) -> bool:
    """Accessible machines are equivalent exactly when they are equal."""
    return accessible_part(y) == accessible_part(z)


fsm_equal = equivalent
