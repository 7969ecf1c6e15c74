"""Contracted forms, cores and maximization of thin HFSMs."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional

from hfsmdec.decomposition import DecompTree, build_decomposition_tree, dimension
from hfsmdec.errors import (
    InaccessibleError,
    InvariantError,
    NotAModuleError,
    NotThinError,
    StateCollisionError,
)
from hfsmdec.fsm import (
    Fsm,
    State,
    Symbol,
    accessible_part,
    bfs_order,
    block_name,
    contract,
    restrict,
)
from hfsmdec.hfsm import Hfsm, Nesting, is_thin_hfsm, structural_key
from hfsmdec.log import get_logger
from hfsmdec.modules import (
    StateSet,
    enumerate_thin_modules,
    is_module,
    is_thin_module,
)

Core = Counter


@dataclass(frozen=True, slots=True, order=True)
class CanonicalFsm:
    """A machine with states renumbered by breadth-first visit from start."""

    size: int
    transitions: tuple[tuple[int, Symbol, int], ...]

    def render(self) -> str:
        arcs = " ".join(f"{i}-{sym}->{j}" for i, sym, j in self.transitions)
        return f"n={self.size} {arcs}".rstrip()


def canonical_form(f: Fsm) -> CanonicalFsm:
    order = bfs_order(f)
    if len(order) != f.size:
        raise InaccessibleError(f"{f.name} is not accessible from its start state")
    number = {q: i for i, q in enumerate(order)}
    return CanonicalFsm(
        size=f.size,
        transitions=tuple(sorted((number[q], sym, number[r]) for q, sym, r in f.arcs())),
    )


def _tree_for(z: Fsm, tree: Optional[DecompTree]) -> DecompTree:
    return tree if tree is not None else build_decomposition_tree(z)


def maximal_thin_submodules(
    z: Fsm, module: Iterable[State], tree: Optional[DecompTree] = None
) -> frozenset[StateSet]:
    """The thin modules strictly inside ``module`` that no other proper thin
    submodule contains.

    Grows candidate sets from each state by absorbing tree nodes that contain
    or overlap them without reaching the whole of ``module``.
    """
    k = z.require_states(module)
    if not is_thin_module(z, k):
        raise NotThinError(f"{sorted(k)} is not a thin module of {z.name}")
    if len(k) == 1:
        return frozenset()
    tree = _tree_for(z, tree)
    candidates = [
        tree.members(t) for t in sorted(tree.nodes_inside(k)) if tree.members(t) != k
    ]

    def growths(h: StateSet) -> list[StateSet]:
        found: list[StateSet] = []
        for c in candidates:
            if c <= h:
                continue
            if h < c:
                found.append(c)
            elif c & h:
                union = h | c
                if union != k:
                    found.append(union)
        return found

    terminals: set[StateSet] = set()
    if k in tree:
        # indecomposable: the maximal submodules partition k
        for q in sorted(k):
            if any(q in t for t in terminals):
                continue
            h: StateSet = frozenset([q])
            while True:
                bigger = growths(h)
                if not bigger:
                    break
                h = bigger[0]
            terminals.add(h)
    else:
        seen: set[StateSet] = set()
        stack: list[StateSet] = [frozenset([q]) for q in sorted(k)]
        while stack:
            h = stack.pop()
            if h in seen:
                continue
            seen.add(h)
            bigger = growths(h)
            if bigger:
                stack.extend(bigger)
            else:
                terminals.add(h)
    return frozenset(t for t in terminals if not any(t < o for o in terminals))


def contracted_form(
    z: Fsm, module: Iterable[State], tree: Optional[DecompTree] = None
) -> Fsm:
    """Restrict to ``module`` and contract its maximal thin submodules."""
    k = z.require_states(module)
    subs = sorted(maximal_thin_submodules(z, k, tree), key=sorted)
    for i, a in enumerate(subs):
        for b in subs[i + 1 :]:
            if a & b:
                raise InvariantError(
                    f"maximal submodules {sorted(a)} and {sorted(b)} of "
                    f"{sorted(k)} intersect"
                )
    inner = restrict(z, k, name=f"{z.name}[{block_name(k)}]")
    return contract(inner, [s for s in subs if len(s) > 1])


# ── HFSM invariants ───────────────────────────────────────────────────────


def _machine_tree(machine: Fsm) -> tuple[Fsm, DecompTree]:
    reachable = accessible_part(machine)
    if reachable.size != machine.size:
        get_logger().warning(
            "machine %s: ignoring %d unreachable state(s)",
            machine.name,
            machine.size - reachable.size,
        )
    return reachable, build_decomposition_tree(reachable)


def _require_thin(z: Hfsm) -> None:
    if not is_thin_hfsm(z):
        raise NotThinError("the HFSM is not thin")


def core(z: Hfsm) -> Core:
    """Canonical contracted forms of every machine's non-singleton
    indecomposable thin modules, with multiplicity."""
    _require_thin(z)
    counts: Core = Counter()
    for name in sorted(z.machines):
        machine, tree = _machine_tree(z.machines[name])
        for t in tree.internal_nodes():
            counts[canonical_form(contracted_form(machine, tree.members(t), tree))] += 1
    return counts


def machine_forms(z: Hfsm) -> Core:
    """Canonical forms of the machines themselves, with multiplicity."""
    return Counter(canonical_form(m) for m in z.machines.values())


def hfsm_dimension(z: Hfsm) -> int:
    return sum(dimension(_machine_tree(m)[1]) for m in z.machines.values())


# ── Maximization ──────────────────────────────────────────────────────────


def nested_machine_name(parent: str, members: Iterable[State]) -> str:
    return f"{parent}/{','.join(sorted(members))}"


def split_machine(z: Hfsm, name: str, module: Iterable[State]) -> Hfsm:
    """Contract ``module`` inside machine ``name`` and nest its restriction
    at the new block state."""
    machine = z.machine(name)
    m = machine.require_states(module)
    if not is_module(machine, m):
        raise NotAModuleError(f"{sorted(m)} is not a module of {name}")
    if not is_thin_module(machine, m):
        raise NotThinError(f"{sorted(m)} is not a thin module of {name}")
    block = block_name(m)
    if block in z.states():
        raise StateCollisionError(f"block name {block!r} is already a state")
    child = nested_machine_name(name, m)
    if child in z.machines:
        raise StateCollisionError(f"machine name {child!r} is already taken")
    machines = dict(z.machines)
    machines[name] = contract(machine, [m])
    machines[child] = restrict(machine, m, name=child)
    nesting = [
        Nesting(child, a.state, a.child) if a.parent == name and a.state in m else a
        for a in z.nesting
    ]
    nesting.append(Nesting(name, block, child))
    return z.with_machines(machines, nesting)


def _smallest_nontrivial(machine: Fsm) -> Optional[StateSet]:
    """Smallest indecomposable thin module of the accessible part, short of
    all of it, that is also thin in ``machine`` itself."""
    reachable, tree = _machine_tree(machine)
    for t in tree.internal_nodes():
        members = tree.members(t)
        if len(members) >= reachable.size:
            continue
        if reachable.size == machine.size or is_thin_module(machine, members):
            return members
    return None


def maximize(z: Hfsm) -> Hfsm:
    """An equivalent thin HFSM in which every machine is prime.

    Repeatedly nests the smallest non-trivial indecomposable thin module of
    some machine.  Machines are visited by name and modules of equal size
    are taken in order of their sorted members, so a path 1-2-3-4 nests
    {1,2} and then {3,4} side by side.  Other maximal HFSMs of the same
    machine, such as nesting {3,4} and then {2,{3,4}}, have the same order
    and flattening but a different shape.
    """
    _require_thin(z)
    logger = get_logger()
    pending = sorted(z.machines)
    while pending:
        name = pending.pop(0)
        module = _smallest_nontrivial(z.machines[name])
        if module is None:
            continue
        logger.debug("nesting %s out of machine %s", sorted(module), name)
        z = split_machine(z, name, module)
        pending = sorted(set(pending) | {name, nested_machine_name(name, module)})
    return z


def is_maximal(z: Hfsm) -> bool:
    """No machine contains a non-trivial thin module."""
    _require_thin(z)
    for machine in z.machines.values():
        if _smallest_nontrivial(machine) is not None:
            return False
    return True


def maximal_equivalent_order(z: Fsm, limit: int = 6) -> int:
    """Largest order among thin HFSMs reachable from ``z`` by nesting
    non-trivial thin modules, found by exhaustive search."""
    start = Hfsm.flat(z)
    best = start.order
    seen = {structural_key(start)}
    stack = [start]
    while stack:
        current = stack.pop()
        best = max(best, current.order)
        for name in sorted(current.machines):
            machine = current.machines[name]
            for module in sorted(enumerate_thin_modules(machine, limit), key=sorted):
                if len(module) < 2 or len(module) == machine.size:
                    continue
                nxt = split_machine(current, name, module)
                key = structural_key(nxt)
                if key not in seen:
                    seen.add(key)
                    stack.append(nxt)
    return best


def laminar_modules(z: Fsm) -> list[StateSet]:
    """The flattened state sets of the nested machines of ``maximize(z)``,
    a laminar family of thin modules of ``z``."""
    nested = maximize(Hfsm.flat(z))
    return sorted(
        (nested.subtree_states(name) for name in nested.machines if name != nested.root),
        key=lambda m: (len(m), sorted(m)),
    )
