"""Random accessible FSMs and random thin HFSMs for the property suite.

Machines are grown from a random spanning arborescence rooted at the start
state, so every state is reachable; further labelled arcs are then added
with probability ``density`` wherever determinism allows.  The sampling is
not uniform over accessible machines: shallow bushy arborescences are
favoured because each state attaches to a uniformly chosen earlier state.
"""

from __future__ import annotations

import random
import string

from hfsmdec.decomposition import build_decomposition_tree
from hfsmdec.errors import InputError
from hfsmdec.fsm import Fsm, State, Symbol
from hfsmdec.hfsm import Hfsm
from hfsmdec.hierarchy import split_machine


def symbols(k: int) -> list[Symbol]:
    if not 1 <= k <= len(string.ascii_lowercase):
        raise InputError(f"alphabet size must be between 1 and 26, got {k}")
    return list(string.ascii_lowercase[:k])


def random_fsm(
    rng: random.Random,
    n: int,
    k: int,
    density: float = 0.5,
    name: str = "rand",
) -> Fsm:
    """An accessible machine on states ``1..n`` over ``a, b, ...``."""
    if n < 1:
        raise InputError(f"need at least one state, got {n}")
    alphabet = symbols(k)
    states = [str(i) for i in range(1, n + 1)]
    transitions: dict[tuple[State, Symbol], State] = {}

    order = states[1:]
    rng.shuffle(order)
    attached = [states[0]]
    for q in order:
        open_slots = [
            (p, sym) for p in attached for sym in alphabet if (p, sym) not in transitions
        ]
        transitions[rng.choice(open_slots)] = q
        attached.append(q)

    for p in states:
        for sym in alphabet:
            if (p, sym) not in transitions and rng.random() < density:
                transitions[(p, sym)] = rng.choice(states)

    return Fsm(
        states=frozenset(states),
        alphabet=frozenset(alphabet),
        transitions=transitions,
        start=states[0],
        name=name,
    )


def random_thin_hfsm(
    rng: random.Random,
    n: int,
    k: int,
    splits: int,
    density: float = 0.5,
) -> Hfsm:
    """Nest up to ``splits`` randomly chosen thin modules of at least two
    states, starting from a random flat machine."""
    z = Hfsm.flat(random_fsm(rng, n, k, density))
    for _ in range(splits):
        choices: list[tuple[str, frozenset[State]]] = []
        for name in sorted(z.machines):
            machine = z.machines[name]
            tree = build_decomposition_tree(machine)
            choices.extend(
                (name, m) for m in tree.modules() if 2 <= len(m) < machine.size
            )
        if not choices:
            break
        name, module = rng.choice(choices)
        z = split_machine(z, name, module)
    return z


def random_word(rng: random.Random, alphabet: list[Symbol], max_len: int) -> list[Symbol]:
    return [rng.choice(alphabet) for _ in range(rng.randint(0, max_len))]
