"""Hierarchical FSMs: named machines nested inside states of other machines.

State ids are unique across all machines of an :class:`Hfsm`, so a state
identifies its machine.  Running an HFSM always rests on a state that hosts
no machine: entering a host state descends to the nested start state, and a
symbol the current machine cannot handle is retried from the host state one
level up.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from hfsmdec.errors import (
    InputError,
    UnknownStateError,
    ValidationError,
)
from hfsmdec.fsm import Fsm, State, Symbol, check_word, equivalent, expand
from hfsmdec.log import get_logger
from hfsmdec.modules import is_thin_module

MachineKey = tuple[frozenset[State], frozenset, State]


@dataclass(frozen=True, slots=True)
class Nesting:
    """Machine ``child`` sits inside state ``state`` of machine ``parent``."""

    parent: str
    state: State
    child: str

    def to_dict(self) -> dict[str, str]:
        return {"parent": self.parent, "state": self.state, "child": self.child}


@dataclass(frozen=True, eq=False)
class Hfsm:
    machines: Mapping[str, Fsm]
    root: str
    nesting: tuple[Nesting, ...] = ()
    alphabet: frozenset[Symbol] = frozenset()
    _owner: dict[State, str] = field(init=False, repr=False)
    _child_at: dict[State, str] = field(init=False, repr=False)
    _host_of: dict[str, Nesting] = field(init=False, repr=False)
    _children: dict[str, list[str]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.root not in self.machines:
            raise ValidationError(f"unknown machine {self.root!r}", field="root")
        alphabet = self.alphabet or frozenset().union(
            *(m.alphabet for m in self.machines.values())
        )
        object.__setattr__(self, "alphabet", frozenset(alphabet))

        owner: dict[State, str] = {}
        for name in sorted(self.machines):
            machine = self.machines[name]
            extra = sorted(machine.alphabet - self.alphabet)
            if extra:
                raise ValidationError(
                    f"symbols outside the alphabet: {', '.join(extra)}",
                    field=f"machines[{name}].transitions",
                )
            for q in machine.sorted_states():
                if q in owner:
                    raise ValidationError(
                        f"state {q!r} also belongs to machine {owner[q]!r}",
                        field=f"machines[{name}].states",
                    )
                owner[q] = name

        child_at: dict[State, str] = {}
        host_of: dict[str, Nesting] = {}
        children: dict[str, list[str]] = {name: [] for name in self.machines}
        for i, arc in enumerate(self.nesting):
            where = f"nesting[{i}]"
            if arc.parent not in self.machines:
                raise ValidationError(
                    f"unknown machine {arc.parent!r}", field=f"{where}.parent"
                )
            if arc.child not in self.machines:
                raise ValidationError(
                    f"unknown machine {arc.child!r}", field=f"{where}.child"
                )
            if arc.child == self.root:
                raise ValidationError("the root cannot be nested", field=f"{where}.child")
            if arc.state not in self.machines[arc.parent].states:
                raise ValidationError(
                    f"{arc.state!r} is not a state of {arc.parent!r}",
                    field=f"{where}.state",
                )
            if arc.state in child_at:
                raise ValidationError(
                    f"state {arc.state!r} already hosts {child_at[arc.state]!r}",
                    field=f"{where}.state",
                )
            if arc.child in host_of:
                raise ValidationError(
                    f"machine {arc.child!r} is nested twice", field=f"{where}.child"
                )
            child_at[arc.state] = arc.child
            host_of[arc.child] = arc
            children[arc.parent].append(arc.child)

        for name in self.machines:
            seen = {name}
            cur = name
            while cur != self.root:
                arc = host_of.get(cur)
                if arc is None:
                    raise ValidationError(
                        f"machine {name!r} is not reachable from the root",
                        field="nesting",
                    )
                cur = arc.parent
                if cur in seen:
                    raise ValidationError(
                        f"nesting cycle through {name!r}", field="nesting"
                    )
                seen.add(cur)

        for kids in children.values():
            kids.sort()
        object.__setattr__(self, "_owner", owner)
        object.__setattr__(self, "_child_at", child_at)
        object.__setattr__(self, "_host_of", host_of)
        object.__setattr__(self, "_children", children)

    @classmethod
    def build(
        cls,
        machines: Iterable[Fsm],
        root: str,
        nesting: Iterable[Nesting | tuple[str, State, str]] = (),
        alphabet: Optional[Iterable[Symbol]] = None,
    ) -> Hfsm:
        by_name: dict[str, Fsm] = {}
        for i, machine in enumerate(machines):
            if machine.name in by_name:
                raise ValidationError(
                    f"duplicate machine name {machine.name!r}",
                    field=f"machines[{i}].name",
                )
            by_name[machine.name] = machine
        arcs = tuple(a if isinstance(a, Nesting) else Nesting(*a) for a in nesting)
        return cls(
            machines=by_name,
            root=root,
            nesting=arcs,
            alphabet=frozenset(alphabet) if alphabet is not None else frozenset(),
        )

    @classmethod
    def flat(cls, z: Fsm) -> Hfsm:
        """An order-1 HFSM around a single machine."""
        return cls(machines={z.name: z}, root=z.name, alphabet=z.alphabet)

    # ── Structure ─────────────────────────────────────────────────────────

    @property
    def order(self) -> int:
        return len(self.machines)

    def machine(self, name: str) -> Fsm:
        try:
            return self.machines[name]
        except KeyError:
            raise InputError(f"unknown machine {name!r}") from None

    def machine_of(self, q: State) -> str:
        try:
            return self._owner[q]
        except KeyError:
            raise UnknownStateError(f"{q!r} is not a state of any machine") from None

    def child_at(self, q: State) -> Optional[str]:
        return self._child_at.get(q)

    def host_of(self, name: str) -> Optional[Nesting]:
        return self._host_of.get(name)

    def children(self, name: str) -> list[str]:
        return list(self._children[name])

    def depth(self, name: str) -> int:
        d = 0
        while name != self.root:
            name = self._host_of[name].parent
            d += 1
        return d

    def subtree(self, name: str) -> list[str]:
        """``name`` and every machine nested below it, parents first."""
        found = [name]
        for current in found:
            found.extend(self._children[current])
        return found

    def subtree_states(self, name: str) -> frozenset[State]:
        """States of the flattened subtree: every state below ``name`` that
        hosts no machine."""
        return frozenset(
            q
            for m in self.subtree(name)
            for q in self.machines[m].states
            if q not in self._child_at
        )

    def states(self) -> frozenset[State]:
        return frozenset(self._owner)

    def with_machines(
        self, machines: Mapping[str, Fsm], nesting: Iterable[Nesting]
    ) -> Hfsm:
        return Hfsm(
            machines=dict(machines),
            root=self.root,
            nesting=tuple(sorted(nesting, key=lambda a: (a.parent, a.state))),
            alphabet=self.alphabet,
        )

    def to_dict(self) -> dict:
        return {
            "alphabet": sorted(self.alphabet),
            "root": self.root,
            "machines": [
                {
                    "name": name,
                    "states": self.machines[name].sorted_states(),
                    "start": self.machines[name].start,
                    "transitions": [list(a) for a in self.machines[name].arcs()],
                }
                for name in sorted(self.machines)
            ],
            "nesting": [
                a.to_dict() for a in sorted(self.nesting, key=lambda a: (a.parent, a.state))
            ],
        }


# ── Execution ─────────────────────────────────────────────────────────────


def nested_start(z: Hfsm, name: str) -> State:
    """Follow start states down through nested machines."""
    q = z.machine(name).start
    while True:
        child = z.child_at(q)
        if child is None:
            return q
        q = z.machines[child].start


def _enter(z: Hfsm, q: State) -> State:
    child = z.child_at(q)
    return q if child is None else nested_start(z, child)


def hierarchical_step(z: Hfsm, q: State, x: Symbol) -> Optional[State]:
    """One hierarchical transition; ``None`` when no enclosing machine has an
    arc on ``x``."""
    name = z.machine_of(q)
    check_word(z.alphabet, [x])
    while True:
        target = z.machines[name].delta(q, x)
        if target is not None:
            return _enter(z, target)
        arc = z.host_of(name)
        if arc is None:
            return None
        q, name = arc.state, arc.parent


def eval_hfsm(z: Hfsm, word: Sequence[Symbol]) -> Optional[State]:
    check_word(z.alphabet, word)
    q: Optional[State] = nested_start(z, z.root)
    for sym in word:
        q = hierarchical_step(z, q, sym)
        if q is None:
            return None
    return q


# ── Flattening ────────────────────────────────────────────────────────────


def expand_one(z: Hfsm, name: str) -> Hfsm:
    """Merge machine ``name`` into its parent at its host state.

    Machines nested inside ``name`` move to the parent.
    """
    arc = z.host_of(name)
    if name not in z.machines:
        raise InputError(f"unknown machine {name!r}")
    if arc is None:
        raise InputError(f"{name!r} is the root machine and cannot be expanded")
    parent = z.machines[arc.parent]
    merged = expand(parent, arc.state, z.machines[name])
    machines = {k: m for k, m in z.machines.items() if k != name}
    machines[arc.parent] = merged
    nesting = [
        Nesting(arc.parent, a.state, a.child) if a.parent == name else a
        for a in z.nesting
        if a.child != name
    ]
    return z.with_machines(machines, nesting)


def flatten(z: Hfsm) -> Fsm:
    """The single equivalent machine, built by expanding deepest leaves first."""
    while z.order > 1:
        leaves = [
            name for name in z.machines if name != z.root and not z.children(name)
        ]
        name = min(leaves, key=lambda m: (-z.depth(m), m))
        z = expand_one(z, name)
    return z.machines[z.root]


def hfsm_equivalent(y: Hfsm, z: Hfsm) -> bool:
    return equivalent(flatten(y), flatten(z))


def is_thin_hfsm(z: Hfsm) -> bool:
    """Every nested machine flattens to a thin module of the whole."""
    flat = flatten(z)
    for name in sorted(z.machines):
        if name == z.root:
            continue
        if not is_thin_module(flat, z.subtree_states(name)):
            get_logger().debug("machine %s is not a thin module", name)
            return False
    return True


# ── Refinement ────────────────────────────────────────────────────────────


def machine_key(m: Fsm) -> MachineKey:
    return (m.states, frozenset(m.transitions.items()), m.start)


def structural_key(z: Hfsm) -> tuple:
    """Machine-name-insensitive identity of an HFSM."""
    return (
        machine_key(z.machines[z.root]),
        frozenset((a.state, machine_key(z.machines[a.child])) for a in z.nesting),
    )


def refines(z: Hfsm, y: Hfsm) -> bool:
    """Whether expanding some nested machines of ``z`` yields ``y``."""
    steps = z.order - y.order
    if steps < 0:
        return False
    target = structural_key(y)
    seen: set[tuple] = set()
    frontier = [z]
    for _ in range(steps):
        following: list[Hfsm] = []
        for current in frontier:
            for name in sorted(current.machines):
                if name == current.root:
                    continue
                nxt = expand_one(current, name)
                key = structural_key(nxt)
                if key not in seen:
                    seen.add(key)
                    following.append(nxt)
        frontier = following
    return any(structural_key(candidate) == target for candidate in frontier)
