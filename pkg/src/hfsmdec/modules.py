"""Module and thin-module predicates, closure helpers and brute-force oracles.

A *module* of a machine is a state set that can be folded into one nested
state without changing behaviour.  Concretely (and this is what
:func:`is_module` checks) a nonempty set ``M`` is a module when

* it has at most one start node, counting the machine's start state as a
  start node of every set that contains it, and
* for every symbol ``x``, if some member has an ``x``-arc leaving ``M`` then
  all such arcs go to the same state and every member has an ``x``-arc.

A module is *thin* when, for every symbol, it either has no exit or contains
no cycle on that symbol.

The ``enumerate_*`` functions visit every subset of the states and are
guarded by an oracle size limit.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Literal, Mapping, Optional

import networkx as nx

from hfsmdec.config import DEFAULT_ORACLE_LIMIT
from hfsmdec.errors import (
    InputError,
    InvariantError,
    NotThinError,
    OracleLimitError,
    QuotientError,
)
from hfsmdec.fsm import (
    Fsm,
    State,
    Symbol,
    block_name,
    contract,
    equivalent,
    expand,
    restrict,
)

StateSet = frozenset[State]
ModuleFamily = frozenset[StateSet]


@dataclass(frozen=True, slots=True)
class ModuleSet:
    """Entrance and exit data of a state set."""

    members: StateSet
    entrances: StateSet
    exits: Mapping[Symbol, StateSet]
    complete_symbols: frozenset[Symbol]
    start_member: Optional[State] = None

    @property
    def contains_start(self) -> bool:
        return self.start_member is not None

    @property
    def starts(self) -> StateSet:
        """Entrances, plus the machine's start state when it is a member."""
        if self.start_member is None:
            return self.entrances
        return self.entrances | {self.start_member}

    @property
    def entrance(self) -> Optional[State]:
        """The unique start node, if there is exactly one."""
        starts = self.starts
        if len(starts) == 1:
            return next(iter(starts))
        return None

    @property
    def is_module(self) -> bool:
        if len(self.starts) > 1:
            return False
        for sym, targets in self.exits.items():
            if len(targets) > 1 or sym not in self.complete_symbols:
                return False
        return True


def analyze(z: Fsm, members: Iterable[State]) -> ModuleSet:
    """Compute entrances, exits and per-symbol completeness of ``members``.

    ``entrances`` lists members with an arc from outside; the machine's start
    state is reported through ``contains_start`` rather than as an entrance.
    """
    m = z.require_states(members)
    if not m:
        raise InputError("module candidates must be nonempty")
    entrances: set[State] = set()
    exits: dict[Symbol, set[State]] = {}
    arc_counts: dict[Symbol, int] = {}
    for (src, sym), dst in z.transitions.items():
        inside_src = src in m
        inside_dst = dst in m
        if inside_src:
            arc_counts[sym] = arc_counts.get(sym, 0) + 1
            if not inside_dst:
                exits.setdefault(sym, set()).add(dst)
        elif inside_dst:
            entrances.add(dst)
    complete = frozenset(sym for sym, count in arc_counts.items() if count == len(m))
    return ModuleSet(
        members=m,
        entrances=frozenset(entrances),
        exits={sym: frozenset(t) for sym, t in exits.items()},
        complete_symbols=complete,
        start_member=z.start if z.start in m else None,
    )


def is_module(z: Fsm, members: Iterable[State]) -> bool:
    return analyze(z, members).is_module


def has_cycle_on(z: Fsm, members: StateSet, sym: Symbol) -> bool:
    """Whether the ``sym``-arcs with both ends in ``members`` contain a cycle."""
    done: set[State] = set()
    for q in members:
        if q in done:
            continue
        path: list[State] = []
        on_path: set[State] = set()
        cur: Optional[State] = q
        while cur is not None and cur in members and cur not in done:
            if cur in on_path:
                return True
            on_path.add(cur)
            path.append(cur)
            cur = z.delta(cur, sym)
        done.update(path)
    return False


def is_thin_module(z: Fsm, members: Iterable[State]) -> bool:
    info = analyze(z, members)
    if not info.is_module:
        return False
    return not any(has_cycle_on(z, info.members, sym) for sym in info.exits)


def is_module_abstract(z: Fsm, members: Iterable[State]) -> bool:
    """Contract ``members``, expand the restriction back in, compare with ``z``."""
    m = z.require_states(members)
    if not m:
        raise InputError("module candidates must be nonempty")
    try:
        contracted = contract(z, [m])
    except QuotientError:
        return False
    rebuilt = expand(contracted, block_name(m), restrict(z, m))
    return equivalent(rebuilt, z)


# ── Set families ──────────────────────────────────────────────────────────


def overlapping(a: Iterable[State], b: Iterable[State]) -> bool:
    """Properly intersecting: they meet and neither contains the other."""
    sa, sb = frozenset(a), frozenset(b)
    return bool(sa & sb) and not sa <= sb and not sb <= sa


def overlap_graph(family: Iterable[StateSet]) -> nx.Graph:
    members = list(family)
    graph = nx.Graph()
    graph.add_nodes_from(range(len(members)))
    for i, j in combinations(range(len(members)), 2):
        if overlapping(members[i], members[j]):
            graph.add_edge(i, j)
    return graph


def family_overlapping(family: Iterable[Iterable[State]]) -> bool:
    """Whether the overlap graph of ``family`` is connected."""
    members = [frozenset(s) for s in family]
    if not members:
        return False
    return nx.is_connected(overlap_graph(members))


# ── Brute-force oracles ───────────────────────────────────────────────────


def _check_limit(z: Fsm, limit: int) -> None:
    if z.size > limit:
        raise OracleLimitError(
            f"brute-force oracle limited to {limit} states; {z.name} has {z.size}"
        )


def subsets(z: Fsm, limit: int = DEFAULT_ORACLE_LIMIT) -> Iterator[StateSet]:
    """Every nonempty subset of the states, smallest first."""
    _check_limit(z, limit)
    ordered = z.sorted_states()
    for k in range(1, len(ordered) + 1):
        for combo in combinations(ordered, k):
            yield frozenset(combo)


def enumerate_modules(z: Fsm, limit: int = DEFAULT_ORACLE_LIMIT) -> ModuleFamily:
    return frozenset(m for m in subsets(z, limit) if is_module(z, m))


def enumerate_thin_modules(z: Fsm, limit: int = DEFAULT_ORACLE_LIMIT) -> ModuleFamily:
    return frozenset(m for m in subsets(z, limit) if is_thin_module(z, m))


def is_decomposable(m: StateSet, family: Iterable[StateSet]) -> bool:
    """Whether ``m`` is the union of an overlapping subfamily of its proper
    members in ``family``."""
    proper = [s for s in family if s < m and len(s) > 1]
    if len(proper) < 2:
        return False
    graph = overlap_graph(proper)
    for component in nx.connected_components(graph):
        if len(component) < 2:
            continue
        union: set[State] = set()
        for i in component:
            union |= proper[i]
        if union == m:
            return True
    return False


def enumerate_indecomposable_thin(
    z: Fsm,
    limit: int = DEFAULT_ORACLE_LIMIT,
    thin: Optional[ModuleFamily] = None,
) -> ModuleFamily:
    family = thin if thin is not None else enumerate_thin_modules(z, limit)
    return frozenset(m for m in family if not is_decomposable(m, family))


def representative(
    z: Fsm,
    q: State,
    method: Literal["tree", "oracle"] = "tree",
    limit: int = DEFAULT_ORACLE_LIMIT,
) -> ModuleSet:
    """The intersection of all thin modules containing ``q`` as a non-start
    member."""
    z.require_state(q)
    if q == z.start:
        raise InputError(f"{q!r} is the start state; its representative is undefined")
    if method == "oracle":
        members: Optional[StateSet] = None
        for m in enumerate_thin_modules(z, limit):
            if q in m and q not in analyze(z, m).starts:
                members = m if members is None else members & m
        if members is None:
            raise InvariantError(f"no thin module contains {q!r}")
        return analyze(z, members)
    if method == "tree":
        from hfsmdec.decomposition import representative_members

        return analyze(z, representative_members(z, q))
    raise ValueError(f"Unsupported representative method: '{method}'")


def is_strong(z: Fsm, members: Iterable[State], limit: int = DEFAULT_ORACLE_LIMIT) -> bool:
    """No thin module overlaps ``members``."""
    m = z.require_states(members)
    if not is_thin_module(z, m):
        raise NotThinError(f"{sorted(m)} is not a thin module of {z.name}")
    return not any(overlapping(m, other) for other in enumerate_thin_modules(z, limit))


def exit_paths_stay_inside(z: Fsm, members: Iterable[State]) -> bool:
    """For each exit of ``members`` on a symbol, every member reaches that
    exit along arcs on the same symbol without leaving the set first."""
    info = analyze(z, members)
    for sym, targets in info.exits.items():
        for target in targets:
            for q in info.members:
                seen: set[State] = set()
                cur: Optional[State] = q
                while cur is not None and cur in info.members and cur not in seen:
                    seen.add(cur)
                    cur = z.delta(cur, sym)
                if cur != target:
                    return False
    return True


def underlying_graph(z: Fsm) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(z.states)
    graph.add_edges_from((src, dst) for src, _, dst in z.arcs())
    return graph


def connected_components(z: Fsm) -> list[StateSet]:
    return sorted(
        (frozenset(c) for c in nx.weakly_connected_components(underlying_graph(z))),
        key=lambda c: sorted(c),
    )


# ── Undirected graphs ─────────────────────────────────────────────────────


def is_graph_module(graph: nx.Graph, members: Iterable) -> bool:
    """Every outside vertex is adjacent to all of ``members`` or to none."""
    m = frozenset(members)
    for v in graph.nodes:
        if v in m:
            continue
        hits = sum(1 for u in graph.neighbors(v) if u in m)
        if hits not in (0, len(m)):
            return False
    return True


def is_graph_module_abstract(graph: nx.Graph, members: Iterable) -> bool:
    """Contract ``members`` to one vertex, substitute the induced subgraph
    back, and compare edge sets with ``graph``."""
    m = frozenset(members)
    block = ("block", tuple(sorted(map(str, m))))
    contracted = nx.Graph()
    contracted.add_nodes_from(v for v in graph.nodes if v not in m)
    contracted.add_node(block)
    for u, v in graph.edges:
        cu = block if u in m else u
        cv = block if v in m else v
        if cu != cv:
            contracted.add_edge(cu, cv)

    rebuilt = nx.Graph(contracted)
    rebuilt.remove_node(block)
    rebuilt.add_nodes_from(m)
    rebuilt.add_edges_from(graph.subgraph(m).edges)
    for g in contracted.neighbors(block):
        rebuilt.add_edges_from((g, h) for h in m)

    def edge_set(gr: nx.Graph) -> set[frozenset]:
        return {frozenset(e) for e in gr.edges}

    return set(rebuilt.nodes) == set(graph.nodes) and edge_set(rebuilt) == edge_set(graph)
