from collections import Counter

import pytest

from hfsmdec.errors import (
    InaccessibleError,
    NotAModuleError,
    NotThinError,
    StateCollisionError,
)
from hfsmdec.fsm import Fsm
from hfsmdec.hfsm import (
    Hfsm,
    Nesting,
    flatten,
    hfsm_equivalent,
    refines,
    structural_key,
)
from hfsmdec.hierarchy import (
    CanonicalFsm,
    canonical_form,
    contracted_form,
    core,
    hfsm_dimension,
    is_maximal,
    laminar_modules,
    machine_forms,
    maximal_equivalent_order,
    maximal_thin_submodules,
    maximize,
    split_machine,
)

X_PAIR = CanonicalFsm(2, ((0, "x", 1),))
Y_PAIR = CanonicalFsm(2, ((0, "y", 1),))


@pytest.fixture
def p4_with_stray() -> Hfsm:
    """H1's root around a path 1-2-3-4 plus a state ``u`` nothing reaches."""
    root = Fsm.build(["A", "c"], ["x", "y"], [("A", "y", "c")], "A", name="R")
    nested = Fsm.build(
        ["1", "2", "3", "4", "u"],
        ["x", "y"],
        [("1", "x", "2"), ("2", "x", "3"), ("3", "x", "4")],
        "1",
        name="N",
    )
    return Hfsm.build([root, nested], "R", [Nesting("R", "A", "N")])


class TestCanonicalForm:
    def test_relabelling_invariant(self, c3):
        relabelled = Fsm.build(
            ["p", "q", "r"], ["a"], [("q", "a", "r"), ("r", "a", "p"), ("p", "a", "q")], "q"
        )
        assert canonical_form(relabelled) == canonical_form(c3)

    def test_symbols_matter(self):
        a = Fsm.build(["s", "t"], ["x", "y"], [("s", "x", "t")], "s")
        b = Fsm.build(["s", "t"], ["x", "y"], [("s", "y", "t")], "s")
        assert canonical_form(a) == X_PAIR
        assert canonical_form(b) == Y_PAIR

    def test_render(self):
        assert X_PAIR.render() == "n=2 0-x->1"
        assert CanonicalFsm(1, ()).render() == "n=1"

    def test_inaccessible(self):
        with pytest.raises(InaccessibleError):
            canonical_form(Fsm.build(["1", "2"], ["x"], [], "1"))


class TestSubmodules:
    def test_decomposable_module(self, p4):
        assert maximal_thin_submodules(p4, {"1", "2", "3"}) == {
            frozenset({"1", "2"}),
            frozenset({"2", "3"}),
        }

    def test_indecomposable_module_is_partitioned(self, flat_h1):
        assert maximal_thin_submodules(flat_h1, {"a", "b", "c"}) == {
            frozenset({"a", "b"}),
            frozenset({"c"}),
        }

    def test_whole_path(self, p4):
        assert maximal_thin_submodules(p4, p4.states) == {
            frozenset({"1", "2", "3"}),
            frozenset({"2", "3", "4"}),
        }

    def test_singleton(self, p4):
        assert maximal_thin_submodules(p4, {"2"}) == frozenset()

    def test_not_thin(self, flat_h1):
        with pytest.raises(NotThinError):
            maximal_thin_submodules(flat_h1, {"b", "c"})

    def test_contracted_form(self, p4, flat_h1):
        assert canonical_form(contracted_form(p4, {"1", "2"})) == X_PAIR
        top = contracted_form(flat_h1, {"a", "b", "c"})
        assert top.states == {"{a,b}", "c"}
        assert set(top.arcs()) == {("{a,b}", "y", "c")}


class TestCore:
    def test_path(self, p4):
        assert core(Hfsm.flat(p4)) == Counter({X_PAIR: 3})

    def test_invariant_under_nesting(self, h1, flat_h1):
        expected = Counter({X_PAIR: 1, Y_PAIR: 1})
        assert core(h1) == expected
        assert core(Hfsm.flat(flat_h1)) == expected

    def test_dimension(self, h1, p4, s1):
        assert hfsm_dimension(h1) == 2
        assert hfsm_dimension(Hfsm.flat(p4)) == 3
        assert hfsm_dimension(Hfsm.flat(s1)) == 0

    def test_requires_thin(self, non_thin_hfsm):
        with pytest.raises(NotThinError):
            core(non_thin_hfsm)


class TestMaximize:
    def test_path(self, p4):
        z = Hfsm.flat(p4)
        best = maximize(z)
        assert best.order == 3
        assert sorted(best.machines) == ["p4", "p4/1,2", "p4/3,4"]
        assert set(best.machines["p4"].arcs()) == {("{1,2}", "x", "{3,4}")}
        assert is_maximal(best)
        assert not is_maximal(z)
        assert hfsm_equivalent(best, z)
        assert refines(best, z)

    def test_order_is_dimension(self, p4, h1, flat_h1):
        for z in (Hfsm.flat(p4), h1, Hfsm.flat(flat_h1)):
            assert maximize(z).order == hfsm_dimension(z)

    def test_machines_are_the_core(self, p4, h1):
        for z in (Hfsm.flat(p4), h1):
            assert machine_forms(maximize(z)) == core(z)

    def test_already_maximal(self, h1):
        assert is_maximal(h1)
        assert maximize(h1).order == h1.order

    def test_prime_machine_unchanged(self, overlapping_non_thin):
        z = Hfsm.flat(overlapping_non_thin)
        assert maximize(z).order == 1

    def test_requires_thin(self, non_thin_hfsm):
        with pytest.raises(NotThinError):
            maximize(non_thin_hfsm)

    def test_matches_exhaustive_search(self, p4, flat_h1, path):
        assert maximal_equivalent_order(p4) == 3
        assert maximal_equivalent_order(path(3)) == 2
        assert maximal_equivalent_order(flat_h1) == 2

    def test_laminar_modules(self, p4):
        assert laminar_modules(p4) == [frozenset({"1", "2"}), frozenset({"3", "4"})]

    def test_path_differs_from_chained_nesting(self, p4):
        z = Hfsm.flat(p4)
        chained = split_machine(z, "p4", {"3", "4"})
        chained = split_machine(chained, "p4", {"2", "{3,4}"})
        best = maximize(z)
        assert is_maximal(chained)
        assert is_maximal(best)
        assert chained.order == best.order == 3
        assert hfsm_equivalent(best, chained)
        assert structural_key(best) != structural_key(chained)
        assert refines(best, split_machine(z, "p4", {"1", "2"}))

    def test_ignores_unreachable_states(self, p4_with_stray):
        best = maximize(p4_with_stray)
        assert is_maximal(best)
        assert hfsm_equivalent(best, p4_with_stray)
        assert sorted(best.machines) == ["N", "N/1,2", "N/3,4", "R"]
        assert best.machines["N"].states == {"{1,2}", "{3,4}", "u"}


class TestSplitMachine:
    def test_children_move_with_module(self, p4):
        z = split_machine(Hfsm.flat(p4), "p4", {"1", "2"})
        z = split_machine(z, "p4", {"{1,2}", "3"})
        assert z.host_of("p4/1,2").parent == "p4/3,{1,2}"
        assert flatten(z) == p4

    def test_collision(self, p4):
        z = split_machine(Hfsm.flat(p4), "p4", {"1", "2"})
        with pytest.raises(StateCollisionError):
            split_machine(z, "p4/1,2", {"1", "2"})

    def test_rejects_non_modules(self, p4, overlapping_non_thin):
        with pytest.raises(NotAModuleError):
            split_machine(Hfsm.flat(p4), "p4", {"1", "3"})
        with pytest.raises(NotThinError):
            split_machine(Hfsm.flat(overlapping_non_thin), "overlap", {"1", "2", "3"})
