"""Decomposition trees: construction and queries.

For every state ``v`` an auxiliary digraph ``G_v`` is built whose ancestor
sets are exactly the thin modules entered at ``v``.  Visiting the states in
reverse breadth-first order and taking ancestor sets of strongly connected
components in topological order produces every indecomposable thin module
once, smallest first.  Each one is inserted into the tree below the
modules it covers, so the tree is the transitive reduction of the
inclusion order.

The per-state work runs on integer indices; :func:`build_gv` exposes the
same construction with state ids and case tags for inspection.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

import networkx as nx

from hfsmdec.errors import (
    InvariantError,
    NotThinError,
    UnknownStateError,
)
from hfsmdec.fsm import Fsm, State, require_accessible, reverse_bfs_order
from hfsmdec.log import get_logger, log_timing
from hfsmdec.modules import StateSet, family_overlapping

CASE_FORWARD = "a"
CASE_BACKWARD = "b"
CASE_EXIT_PATH = "c"
CASE_MISSING_ARC = "d"


class _Indexed:
    """Integer view of a machine: states in sorted order, per-symbol successor
    arrays (``-1`` for undefined)."""

    __slots__ = ("names", "index", "succ", "start", "n", "position")

    def __init__(self, z: Fsm) -> None:
        self.names = z.sorted_states()
        self.index = {q: i for i, q in enumerate(self.names)}
        self.n = len(self.names)
        self.succ: list[list[int]] = []
        for sym in z.sorted_alphabet():
            row = [-1] * self.n
            for i, q in enumerate(self.names):
                r = z.delta(q, sym)
                if r is not None:
                    row[i] = self.index[r]
            self.succ.append(row)
        self.start = self.index[z.start]
        # scratch per symbol, -1 everywhere between calls of _build_gv
        self.position: list[list[int]] = [[-1] * self.n for _ in self.succ]


class _Gv:
    """``G_v`` on indices: successor and predecessor lists plus the surviving
    node mask."""

    __slots__ = ("v", "succs", "preds", "alive", "tagged")

    def __init__(
        self,
        v: int,
        succs: list[list[int]],
        preds: list[list[int]],
        alive: list[bool],
        tagged: Optional[list[tuple[int, int, str]]],
    ) -> None:
        self.v = v
        self.succs = succs
        self.preds = preds
        self.alive = alive
        self.tagged = tagged

    def ancestors(self, q: int) -> set[int]:
        """``q`` and every surviving node with a path to it."""
        preds, alive = self.preds, self.alive
        found = {q}
        queue = deque([q])
        while queue:
            w = queue.popleft()
            for u in preds[w]:
                if alive[u] and u not in found:
                    found.add(u)
                    queue.append(u)
        return found


def _x_walk(succ_x: list[int], position_x: list[int], v: int) -> list[int]:
    """Distinct nodes on the path from ``v`` along one symbol, in order.

    Marks each node's place in ``position_x``; the caller clears them.
    """
    walk = [v]
    position_x[v] = 0
    cur = succ_x[v]
    while cur != -1 and position_x[cur] == -1:
        position_x[cur] = len(walk)
        walk.append(cur)
        cur = succ_x[cur]
    return walk


def _build_gv(ix: _Indexed, v: int, record: bool = False) -> _Gv:
    n = ix.n
    succs: list[list[int]] = [[] for _ in range(n)]
    preds: list[list[int]] = [[] for _ in range(n)]
    tagged: Optional[list[tuple[int, int, str]]] = [] if record else None
    lanes = []
    for row, position in zip(ix.succ, ix.position):
        walk = _x_walk(row, position, v)
        lanes.append((row, position, walk, walk[-1]))

    for u in range(n):
        for row, position, walk, last in lanes:
            w = row[u]
            if w == -1:
                if last != u:
                    succs[last].append(u)
                    preds[u].append(last)
                    if tagged is not None:
                        tagged.append((last, u, CASE_MISSING_ARC))
                continue
            if w == v:
                continue
            succs[u].append(w)
            preds[w].append(u)
            if tagged is not None:
                tagged.append((u, w, CASE_FORWARD))
            j = position[w]
            if j != -1:
                t = walk[j - 1]
                if t != u:
                    succs[t].append(u)
                    preds[u].append(t)
                    if tagged is not None:
                        tagged.append((t, u, CASE_EXIT_PATH))
            else:
                succs[w].append(u)
                preds[u].append(w)
                if tagged is not None:
                    tagged.append((w, u, CASE_BACKWARD))

    for _, position, walk, _ in lanes:
        for q in walk:
            position[q] = -1

    alive = [True] * n
    g = ix.start
    if v != g:
        alive[g] = False
        queue = deque([g])
        while queue:
            u = queue.popleft()
            for w in succs[u]:
                if alive[w]:
                    alive[w] = False
                    queue.append(w)
    return _Gv(v, succs, preds, alive, tagged)


def _strongly_connected(gv: _Gv) -> list[list[int]]:
    """Strongly connected components of the surviving nodes, sources first.

    Iterative Tarjan; components come out sinks first and are reversed.
    """
    succs, alive = gv.succs, gv.alive
    n = len(succs)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0
    for root in range(n):
        if not alive[root] or index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, 0)]
        while work:
            node, i = work[-1]
            outs = succs[node]
            descended = False
            while i < len(outs):
                w = outs[i]
                i += 1
                if not alive[w]:
                    continue
                if index[w] == -1:
                    work[-1] = (node, i)
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                    descended = True
                    break
                if on_stack[w] and index[w] < low[node]:
                    low[node] = index[w]
            if descended:
                continue
            work.pop()
            if low[node] == index[node]:
                component: list[int] = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    component.append(w)
                    if w == node:
                        break
                components.append(sorted(component))
            if work:
                parent = work[-1][0]
                if low[node] < low[parent]:
                    low[parent] = low[node]
    components.reverse()
    return components


# ── Inspectable G_v ───────────────────────────────────────────────────────


@dataclass(frozen=True, slots=True)
class GvGraph:
    """``G_v`` with state ids; each arc is ``(tail, head, case)``."""

    focus: State
    nodes: StateSet
    arcs: frozenset[tuple[State, State, str]]

    @property
    def pairs(self) -> frozenset[tuple[State, State]]:
        """Distinct arcs between surviving nodes, ignoring case tags."""
        return frozenset(
            (t, h) for t, h, _ in self.arcs if t in self.nodes and h in self.nodes
        )


def build_gv(z: Fsm, v: State) -> GvGraph:
    require_accessible(z)
    z.require_state(v)
    ix = _Indexed(z)
    gv = _build_gv(ix, ix.index[v], record=True)
    names = ix.names
    tagged = gv.tagged or []
    return GvGraph(
        focus=v,
        nodes=frozenset(names[i] for i in range(ix.n) if gv.alive[i]),
        arcs=frozenset((names[t], names[h], c) for t, h, c in tagged),
    )


def up_set(g: GvGraph, q: State) -> StateSet:
    """``q`` together with its ancestors in ``g``."""
    if q not in g.nodes:
        raise UnknownStateError(f"{q!r} is not a node of G_{g.focus}")
    preds: dict[State, list[State]] = {}
    for tail, head in g.pairs:
        preds.setdefault(head, []).append(tail)
    found = {q}
    queue = deque([q])
    while queue:
        w = queue.popleft()
        for u in preds.get(w, ()):
            if u not in found:
                found.add(u)
                queue.append(u)
    return frozenset(found)


def representative_members(z: Fsm, q: State) -> StateSet:
    """Intersect ``q``'s ancestor sets over every ``G_v`` (``v != q``) that
    keeps ``q``."""
    require_accessible(z)
    ix = _Indexed(z)
    qi = ix.index[z.require_state(q)]
    result: Optional[set[int]] = None
    for v in range(ix.n):
        if v == qi:
            continue
        gv = _build_gv(ix, v)
        if not gv.alive[qi]:
            continue
        up = gv.ancestors(qi)
        result = up if result is None else result & up
    if result is None:
        raise InvariantError(f"no thin module contains {q!r} as a non-start member")
    return frozenset(ix.names[i] for i in result)


# ── Decomposition tree ────────────────────────────────────────────────────


class DecompTree:
    """Transitively reduced inclusion dag of indecomposable thin modules.

    Stored as a :class:`networkx.DiGraph` with arcs from a module to the
    modules it covers.  Nodes ``0..n-1`` are the sinks, one per state in
    sorted order; every node carries its ``members``.
    """

    def __init__(self, z: Fsm) -> None:
        self.fsm_name = z.name
        self.states: StateSet = z.states
        self.graph = nx.DiGraph()
        self._by_members: dict[StateSet, int] = {}
        self._sink: dict[State, int] = {}
        for q in z.sorted_states():
            t = self.graph.number_of_nodes()
            members = frozenset([q])
            self.graph.add_node(t, state=q, members=members)
            self._sink[q] = t
            self._by_members[members] = t

    def __len__(self) -> int:
        return self.graph.number_of_nodes()

    def __contains__(self, members: object) -> bool:
        return members in self._by_members

    @property
    def arc_count(self) -> int:
        return self.graph.number_of_edges()

    def sink(self, q: State) -> int:
        try:
            return self._sink[q]
        except KeyError:
            raise UnknownStateError(f"{q!r} is not a state of {self.fsm_name}") from None

    def node_of(self, members: Iterable[State]) -> int:
        key = frozenset(members)
        try:
            return self._by_members[key]
        except KeyError:
            raise NotThinError(
                f"{sorted(key)} is not an indecomposable thin module"
            ) from None

    def members(self, t: int) -> StateSet:
        return self.graph.nodes[t]["members"]

    def label(self, t: int) -> Optional[State]:
        return self.graph.nodes[t].get("state")

    def is_sink(self, t: int) -> bool:
        return self.label(t) is not None

    def children(self, t: int) -> list[int]:
        return sorted(self.graph.successors(t))

    def parents(self, t: int) -> list[int]:
        return sorted(self.graph.predecessors(t))

    def internal_nodes(self) -> list[int]:
        """Non-sink nodes, smallest module first, ties by sorted members."""
        return sorted(
            (t for t in self.graph.nodes if not self.is_sink(t)),
            key=lambda t: (len(self.members(t)), sorted(self.members(t))),
        )

    def modules(self) -> list[StateSet]:
        return [self.members(t) for t in self.internal_nodes()]

    def roots(self) -> list[int]:
        return sorted(t for t in self.graph.nodes if self.graph.in_degree(t) == 0)

    def arcs(self) -> Iterator[tuple[int, int]]:
        yield from sorted(self.graph.edges)

    def is_tree(self) -> bool:
        """Whether every node has at most one parent."""
        return nx.is_branching(self.graph)

    def nodes_inside(self, members: StateSet) -> set[int]:
        """Nodes whose module lies within ``members``.

        Sweeps upwards from the sinks: a node is reached once all of its
        children have been.
        """
        queue = deque(self.sink(q) for q in sorted(members))
        inside = set(queue)
        remaining: dict[int, int] = {}
        while queue:
            t = queue.popleft()
            for p in self.graph.predecessors(t):
                left = remaining.get(p)
                if left is None:
                    left = self.graph.out_degree(p)
                left -= 1
                remaining[p] = left
                if left == 0:
                    inside.add(p)
                    queue.append(p)
        return inside

    def maximal_inside(self, members: StateSet) -> list[int]:
        inside = self.nodes_inside(members)
        return sorted(
            t for t in inside if not any(p in inside for p in self.graph.predecessors(t))
        )

    def to_json(self) -> dict:
        return {
            "fsm": self.fsm_name,
            "nodes": [
                {
                    "id": t,
                    **({"state": self.label(t)} if self.is_sink(t) else {}),
                    "members": sorted(self.members(t)),
                }
                for t in sorted(self.graph.nodes)
            ],
            "arcs": [list(arc) for arc in self.arcs()],
        }


def add_module(tree: DecompTree, module: Iterable[State]) -> int:
    """Insert ``module`` above the present modules it covers; return its node.

    Every indecomposable thin module strictly inside ``module`` must already
    be in the tree.
    """
    k = frozenset(module)
    unknown = sorted(k - tree.states)
    if unknown:
        raise UnknownStateError(f"not states of {tree.fsm_name}: {', '.join(unknown)}")
    if k in tree:
        raise InvariantError(f"module {sorted(k)} is already in the tree")
    apices = tree.maximal_inside(k)
    t = tree.graph.number_of_nodes()
    tree.graph.add_node(t, members=k)
    tree._by_members[k] = t
    tree.graph.add_edges_from((t, apex) for apex in apices)
    get_logger().debug("added module %s covering %d node(s)", sorted(k), len(apices))
    return t


def build_decomposition_tree(z: Fsm) -> DecompTree:
    """The decomposition tree of an accessible machine."""
    require_accessible(z)
    tree = DecompTree(z)
    ix = _Indexed(z)
    used = [False] * ix.n
    with log_timing(f"decomposition of {z.name} ({ix.n} states)"):
        for name in reverse_bfs_order(z):
            v = ix.index[name]
            gv = _build_gv(ix, v)
            for component in _strongly_connected(gv):
                if component == [v]:
                    continue
                unused = [q for q in component if not used[q]]
                if not unused:
                    continue
                found = gv.ancestors(unused[0])
                add_module(tree, (ix.names[i] for i in found))
                for i in found:
                    if i != v:
                        used[i] = True
    return tree


def down_set(tree: DecompTree, t: int) -> StateSet:
    """States labelling the sinks reachable from ``t``."""
    if t not in tree.graph:
        raise UnknownStateError(f"no tree node {t}")
    reach = nx.descendants(tree.graph, t) | {t}
    return frozenset(tree.label(s) for s in reach if tree.is_sink(s))


def is_thin_module_via_tree(tree: DecompTree, members: Iterable[State]) -> bool:
    m = frozenset(members)
    if not m or not m <= tree.states:
        return False
    maximal = tree.maximal_inside(m)
    covered: set[State] = set()
    for t in maximal:
        covered |= tree.members(t)
    return covered == m and family_overlapping(tree.members(t) for t in maximal)


def minimal_decomposition(tree: DecompTree, members: Iterable[State]) -> frozenset[int]:
    """The unique smallest set of tree nodes whose overlapping union is
    ``members``."""
    m = frozenset(members)
    if not is_thin_module_via_tree(tree, m):
        raise NotThinError(f"{sorted(m)} is not a thin module of {tree.fsm_name}")
    return frozenset(tree.maximal_inside(m))


def dimension(tree: DecompTree) -> int:
    """Number of non-singleton indecomposable thin modules."""
    return len(tree) - len(tree.states)


def transitive_reduction_matches(tree: DecompTree) -> bool:
    """Recompute the inclusion order over all nodes and compare its
    transitive reduction with the tree's arcs."""
    inclusion = nx.DiGraph()
    nodes = sorted(tree.graph.nodes)
    inclusion.add_nodes_from(nodes)
    for a in nodes:
        ma = tree.members(a)
        for b in nodes:
            if a != b and tree.members(b) < ma:
                inclusion.add_edge(a, b)
    reduced = nx.transitive_reduction(inclusion)
    return set(reduced.edges) == set(tree.graph.edges)


def arc_bound(z: Fsm) -> int:
    """Upper bound on the tree's arc count: ``4n - 2 + |arcs of z|``."""
    return 4 * z.size - 2 + len(z.transitions)
