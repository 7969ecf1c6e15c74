"""Property suite: every structural guarantee checked against brute force.

:func:`check_fsm` and :func:`check_hfsm` run the properties on one input and
return a :class:`VerifyReport`; :func:`verify_random` drives them over a
seeded corpus of random machines, optionally in a process pool.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Callable, Optional, Union

import networkx as nx

from hfsmdec.config import Config
from hfsmdec.decomposition import (
    arc_bound,
    build_decomposition_tree,
    build_gv,
    dimension,
    is_thin_module_via_tree,
    minimal_decomposition,
    transitive_reduction_matches,
    up_set,
)
from hfsmdec.errors import InputError, InvariantError, StateCollisionError
from hfsmdec.formatters import format_fsm_text, format_hfsm_json
from hfsmdec.fsm import Fsm, accessible_part, block_name, contract, eval_fsm, restrict
from hfsmdec.generators import random_fsm, random_thin_hfsm, random_word
from hfsmdec.hfsm import (
    Hfsm,
    eval_hfsm,
    expand_one,
    flatten,
    hfsm_equivalent,
    is_thin_hfsm,
    refines,
)
from hfsmdec.hierarchy import (
    core,
    hfsm_dimension,
    is_maximal,
    machine_forms,
    maximal_equivalent_order,
    maximize,
)
from hfsmdec.log import get_logger, log_timing
from hfsmdec.modules import (
    StateSet,
    analyze,
    connected_components,
    enumerate_indecomposable_thin,
    enumerate_thin_modules,
    exit_paths_stay_inside,
    family_overlapping,
    is_graph_module,
    is_graph_module_abstract,
    is_module,
    is_module_abstract,
    is_strong,
    is_thin_module,
    overlapping,
    representative,
    subsets,
    underlying_graph,
)

PROPERTIES: dict[str, str] = {
    "module-definitions": "arc conditions agree with contract-then-expand",
    "trivial-modules": "singletons, the whole machine and components are modules",
    "closure": "union and intersection of overlapping thin modules are thin",
    "restriction": "modules inside a module are the modules of its restriction",
    "contraction": "thinness of a superset survives contracting a thin submodule",
    "exit-paths": "members reach each exit along arcs on its symbol",
    "graph-modules": "graph module conditions agree with contract-then-expand",
    "tree-vs-oracle": "tree modules are exactly the indecomposable thin modules",
    "tree-queries": "tree answers thin-module queries on every subset",
    "v-modules": "ancestor sets of G_v are exactly the thin modules entered at v",
    "representatives": "representatives are indecomposable and cover the tree",
    "count-bounds": "indecomposable count lies in [n+1, 2n-1]",
    "arc-bound": "tree arcs stay within 4n-2 plus the machine's arcs",
    "transitive-reduction": "tree arcs form the reduced inclusion order",
    "tree-shape": "the tree is a forest iff every indecomposable module is strong",
    "hfsm-semantics": "hierarchical runs agree with the flattened machine",
    "flatten-order": "flattening does not depend on the expansion order",
    "expand-one": "expanding one nested machine keeps behaviour",
    "core-invariance": "the core survives flattening",
    "dimension-invariance": "HFSM dimension equals the flattened tree's",
    "maximize": "maximization is equivalent, prime and of order equal to dimension",
    "core-machines": "a maximal HFSM's machines are its core",
    "maximal-is-maximum": "no nesting of thin modules beats a maximal HFSM",
    "internal-invariants": "no internal consistency check breaks",
}

SAMPLE_PAIRS = 40
WORDS_PER_HFSM = 100
MAX_WORD_LEN = 20
REFINES_MAX_STEPS = 4
MAXIMUM_ORACLE_LIMIT = 6


@dataclass(frozen=True, slots=True)
class Counterexample:
    """A failed check, already serialized so it can be replayed."""

    prop: str
    detail: str
    text: str
    suffix: str


@dataclass
class PropertyTally:
    passed: int = 0
    failed: int = 0


@dataclass
class VerifyReport:
    tallies: dict[str, PropertyTally] = field(
        default_factory=lambda: {name: PropertyTally() for name in PROPERTIES}
    )
    counterexamples: list[Counterexample] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(t.failed == 0 for t in self.tallies.values())

    def record(
        self,
        prop: str,
        ok: bool,
        machine: Union[Fsm, Hfsm],
        detail: str = "",
    ) -> bool:
        tally = self.tallies[prop]
        if ok:
            tally.passed += 1
            return True
        tally.failed += 1
        if isinstance(machine, Hfsm):
            text, suffix = format_hfsm_json(machine), ".hfsm"
        else:
            header = f"# property: {prop}\n" + (f"# {detail}\n" if detail else "")
            text, suffix = header + format_fsm_text(machine), ".fsm"
        self.counterexamples.append(Counterexample(prop, detail, text, suffix))
        get_logger().warning("property %s failed: %s", prop, detail or "(no detail)")
        return False

    def merge(self, other: VerifyReport) -> None:
        for name, tally in other.tallies.items():
            mine = self.tallies[name]
            mine.passed += tally.passed
            mine.failed += tally.failed
        self.counterexamples.extend(other.counterexamples)
        self.notes.extend(other.notes)

    def to_text(self) -> str:
        width = max(len(name) for name in PROPERTIES)
        lines = [
            f"{name:<{width}}  {t.passed:>7} passed  {t.failed:>5} failed"
            for name, t in self.tallies.items()
        ]
        lines.extend(self.notes)
        for i, c in enumerate(self.counterexamples):
            lines.append(f"counterexample {i}: {c.prop}: {c.detail}")
        lines.append("all properties hold" if self.ok else "PROPERTY FAILURES")
        return "\n".join(lines)

    def dump(self, directory: str) -> list[Path]:
        """Write one replayable file per counterexample."""
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        written: list[Path] = []
        for i, c in enumerate(self.counterexamples):
            path = out / f"{i:03d}-{c.prop}{c.suffix}"
            path.write_text(c.text + "\n", encoding="utf-8")
            written.append(path)
        return written


def _fmt(members: StateSet) -> str:
    return block_name(members) if len(members) > 1 else "{" + ",".join(members) + "}"


def _sample(rng: random.Random, items: list, count: int) -> list:
    return items if len(items) <= count else rng.sample(items, count)


# ── Flat machines ─────────────────────────────────────────────────────────


def _check_module_theory(
    z: Fsm,
    every: list[StateSet],
    thin: frozenset[StateSet],
    rng: random.Random,
    report: VerifyReport,
) -> None:
    modules = [m for m in every if is_module(z, m)]
    for m in every:
        report.record(
            "module-definitions",
            is_module(z, m) == is_module_abstract(z, m),
            z,
            f"subset {_fmt(m)}",
        )

    trivial = [frozenset([q]) for q in z.sorted_states()] + [z.states]
    components = connected_components(z)
    for k in range(1, len(components) + 1):
        for combo in combinations(components, k):
            trivial.append(frozenset().union(*combo))
    for m in trivial:
        report.record("trivial-modules", is_module(z, m), z, f"subset {_fmt(m)}")

    thin_list = sorted(thin, key=lambda m: (len(m), sorted(m)))
    for a, b in combinations(thin_list, 2):
        if overlapping(a, b):
            ok = is_thin_module(z, a | b) and is_thin_module(z, a & b)
            report.record("closure", ok, z, f"{_fmt(a)} and {_fmt(b)}")

    pairs = [(x, y) for x in modules for y in every if y <= x]
    for x, y in _sample(rng, pairs, SAMPLE_PAIRS):
        inner = restrict(z, x)
        report.record(
            "restriction",
            is_module(z, y) == is_module(inner, y),
            z,
            f"{_fmt(y)} inside {_fmt(x)}",
        )

    pairs = [(x, y) for x in thin_list for y in every if x <= y]
    for x, y in _sample(rng, pairs, SAMPLE_PAIRS):
        try:
            contracted = contract(z, [x])
        except StateCollisionError:
            continue
        image = (y - x) | {block_name(x)}
        report.record(
            "contraction",
            is_thin_module(z, y) == is_thin_module(contracted, image),
            z,
            f"{_fmt(y)} over {_fmt(x)}",
        )

    for m in thin_list:
        report.record("exit-paths", exit_paths_stay_inside(z, m), z, f"subset {_fmt(m)}")

    graph = nx.Graph(underlying_graph(z).to_undirected())
    graph.remove_edges_from(list(nx.selfloop_edges(graph)))
    for m in every:
        report.record(
            "graph-modules",
            is_graph_module(graph, m) == is_graph_module_abstract(graph, m),
            z,
            f"subset {_fmt(m)}",
        )


def _check_tree_against_oracle(
    z: Fsm,
    every: list[StateSet],
    thin: frozenset[StateSet],
    report: VerifyReport,
    limit: int,
) -> None:
    tree = build_decomposition_tree(z)
    indecomposable = enumerate_indecomposable_thin(z, limit, thin)
    expected = {m for m in indecomposable if len(m) > 1}
    found = set(tree.modules())
    report.record(
        "tree-vs-oracle",
        found == expected,
        z,
        f"missing {sorted(map(_fmt, expected - found))}, "
        f"extra {sorted(map(_fmt, found - expected))}",
    )

    for m in every:
        ok = is_thin_module_via_tree(tree, m) == (m in thin)
        if ok and m in thin:
            family = [tree.members(t) for t in minimal_decomposition(tree, m)]
            ok = frozenset().union(*family) == m and family_overlapping(family)
        report.record("tree-queries", ok, z, f"subset {_fmt(m)}")

    for v in z.sorted_states():
        g = build_gv(z, v)
        ups = {q: up_set(g, q) for q in sorted(g.nodes)}
        for q, up in ups.items():
            info = analyze(z, up)
            ok = is_thin_module(z, up) and info.starts == {v}
            report.record("v-modules", ok, z, f"up-set of {q} in G_{v} is {_fmt(up)}")
        for m in thin:
            if analyze(z, m).starts != {v}:
                continue
            ok = m <= g.nodes and frozenset().union(*(ups[q] for q in m)) == m
            report.record("v-modules", ok, z, f"{v}-module {_fmt(m)}")

    images: set[StateSet] = set()
    for q in z.sorted_states():
        if q == z.start:
            continue
        fast = representative(z, q, method="tree").members
        slow = representative(z, q, method="oracle", limit=limit).members
        images.add(fast)
        report.record(
            "representatives",
            fast == slow and fast in indecomposable,
            z,
            f"state {q}: tree {_fmt(fast)}, oracle {_fmt(slow)}",
        )
    report.record(
        "representatives",
        images == expected,
        z,
        f"not a representative: {sorted(map(_fmt, expected - images))}",
    )

    strong = all(is_strong(z, m, limit) for m in indecomposable)
    report.record("tree-shape", tree.is_tree() == strong, z, f"forest {tree.is_tree()}")


def check_fsm(
    z: Fsm,
    *,
    rng: Optional[random.Random] = None,
    limit: int = 14,
    report: Optional[VerifyReport] = None,
) -> VerifyReport:
    """Run the flat-machine properties on an accessible ``z``."""
    report = report or VerifyReport()
    _guarded(report, z, _check_flat, z, rng or random.Random(0), limit, report)
    return report


def _guarded(
    report: VerifyReport, machine: Union[Fsm, Hfsm], check: Callable[..., None], *args
) -> None:
    """Run ``check``; a broken internal invariant counts as a failed property."""
    try:
        check(*args)
    except InvariantError as e:
        report.record("internal-invariants", False, machine, str(e))
    else:
        report.record("internal-invariants", True, machine)


def _check_flat(z: Fsm, rng: random.Random, limit: int, report: VerifyReport) -> None:
    tree = build_decomposition_tree(z)
    n = z.size
    low, high = (n + 1, 2 * n - 1) if n > 1 else (1, 1)
    report.record(
        "count-bounds", low <= len(tree) <= high, z, f"{len(tree)} not in [{low}, {high}]"
    )
    report.record(
        "arc-bound", tree.arc_count <= arc_bound(z), z, f"{tree.arc_count} arcs"
    )
    report.record("transitive-reduction", transitive_reduction_matches(tree), z)

    if n > limit:
        report.notes.append(
            f"{z.name}: {n} states exceed the oracle limit {limit}; "
            "brute-force properties skipped"
        )
        return
    every = list(subsets(z, limit))
    thin = enumerate_thin_modules(z, limit)
    _check_module_theory(z, every, thin, rng, report)
    _check_tree_against_oracle(z, every, thin, report, limit)


# ── HFSMs ─────────────────────────────────────────────────────────────────


def _flatten_by_name_desc(z: Hfsm) -> Fsm:
    while z.order > 1:
        leaves = [m for m in z.machines if m != z.root and not z.children(m)]
        z = expand_one(z, max(leaves))
    return z.machines[z.root]


def check_hfsm(
    z: Hfsm,
    *,
    rng: Optional[random.Random] = None,
    report: Optional[VerifyReport] = None,
) -> VerifyReport:
    """Run the HFSM properties on a thin ``z`` with accessible machines."""
    report = report or VerifyReport()
    _guarded(report, z, _check_hierarchical, z, rng or random.Random(0), report)
    return report


def _check_hierarchical(z: Hfsm, rng: random.Random, report: VerifyReport) -> None:
    flat = flatten(z)
    alphabet = sorted(z.alphabet)

    ok = True
    if alphabet:
        for _ in range(WORDS_PER_HFSM):
            word = random_word(rng, alphabet, MAX_WORD_LEN)
            if eval_hfsm(z, word) != eval_fsm(flat, word):
                ok = False
                break
    report.record("hfsm-semantics", ok, z, "run differs from the flattened machine")
    report.record("flatten-order", _flatten_by_name_desc(z) == flat, z)
    for name in sorted(z.machines):
        if name != z.root:
            report.record(
                "expand-one",
                hfsm_equivalent(expand_one(z, name), z),
                z,
                f"expanding {name}",
            )

    if not is_thin_hfsm(z):
        report.notes.append("HFSM is not thin; core and maximization properties skipped")
        return
    flat_h = Hfsm.flat(flat)
    report.record("core-invariance", core(z) == core(flat_h), z)
    dim = hfsm_dimension(z)
    report.record(
        "dimension-invariance",
        dim == dimension(build_decomposition_tree(flat)),
        z,
        f"dimension {dim}",
    )

    best = maximize(z)
    ok = is_maximal(best) and hfsm_equivalent(best, z)
    if flat.size > 1:
        ok = ok and best.order == dim
    if ok and best.order - z.order <= REFINES_MAX_STEPS:
        ok = refines(best, z)
    report.record("maximize", ok, z, f"order {best.order}, dimension {dim}")
    if flat.size > 1:
        report.record("core-machines", machine_forms(best) == core(best) == core(z), z)
    if 1 < flat.size <= MAXIMUM_ORACLE_LIMIT:
        report.record(
            "maximal-is-maximum",
            maximal_equivalent_order(flat) == best.order,
            z,
            f"maximal order {best.order}",
        )


# ── Random corpus ─────────────────────────────────────────────────────────


@dataclass(frozen=True, slots=True)
class RandomBounds:
    max_n: int = 7
    max_k: int = 3
    max_splits: int = 3


def check_seed(seed: int, bounds: RandomBounds, limit: int) -> VerifyReport:
    """Properties for the machines drawn from one seed."""
    rng = random.Random(seed)
    n = rng.randint(1, bounds.max_n)
    k = rng.randint(1, bounds.max_k)
    density = rng.uniform(0.2, 0.8)
    report = VerifyReport()
    z = random_fsm(rng, n, k, density, name=f"seed{seed}")
    check_fsm(z, rng=rng, limit=limit, report=report)
    h = random_thin_hfsm(rng, n, k, rng.randint(0, bounds.max_splits), density)
    check_hfsm(h, rng=rng, report=report)
    return report


def _check_seed_args(args: tuple[int, RandomBounds, int]) -> VerifyReport:
    return check_seed(*args)


def verify_random(
    config: Config,
    count: int,
    bounds: RandomBounds,
    progress: Optional[Callable[[int], None]] = None,
) -> VerifyReport:
    """Check ``count`` seeds starting at ``config.seed``; results are merged
    in seed order whatever the number of jobs."""
    config.require_oracle_size(bounds.max_n)
    seeds = [config.seed + i for i in range(count)]
    work = [(s, bounds, config.oracle_limit) for s in seeds]
    total = VerifyReport()
    with log_timing(f"verification of {count} random seeds"):
        if config.jobs > 1:
            with ProcessPoolExecutor(max_workers=config.jobs) as pool:
                results = pool.map(_check_seed_args, work)
                for i, report in enumerate(results):
                    total.merge(report)
                    if progress:
                        progress(i)
        else:
            for i, args in enumerate(work):
                total.merge(_check_seed_args(args))
                if progress:
                    progress(i)
    return total


def verify_machine(
    machine: Union[Fsm, Hfsm], config: Config
) -> VerifyReport:
    """Properties for a machine read from a file."""
    rng = random.Random(config.seed)
    report = VerifyReport()
    if isinstance(machine, Hfsm):
        try:
            check_hfsm(machine, rng=rng, report=report)
        except InputError as e:
            report.notes.append(f"HFSM properties skipped: {e}")
        machine = flatten(machine)
    z = accessible_part(machine)
    check_fsm(z, rng=rng, limit=config.oracle_limit, report=report)
    tree = build_decomposition_tree(z)
    n = z.size
    low, high = (n + 1, 2 * n - 1) if n > 1 else (1, 1)
    report.notes.append(
        f"{z.name}: {len(tree)} indecomposable thin modules "
        f"(bounds {low}..{high}), {tree.arc_count} tree arcs (bound {arc_bound(z)})"
    )
    return report
