"""Hypothesis checks of the decomposition against the brute-force oracles."""

from hypothesis import given

from hfsmdec.decomposition import (
    arc_bound,
    build_decomposition_tree,
    is_thin_module_via_tree,
    transitive_reduction_matches,
)
from hfsmdec.fsm import Fsm
from hfsmdec.hfsm import Hfsm, flatten, hfsm_equivalent, is_thin_hfsm
from hfsmdec.hierarchy import core, hfsm_dimension, is_maximal, maximize
from hfsmdec.modules import (
    enumerate_indecomposable_thin,
    enumerate_thin_modules,
    is_module,
    is_module_abstract,
    subsets,
)
from hfsmdec.verify import VerifyReport, check_fsm, check_hfsm

from .strategies import PROPERTY_SETTINGS, accessible_fsms, thin_hfsms


class TestTreeAgainstOracle:
    @PROPERTY_SETTINGS
    @given(accessible_fsms())
    def test_tree_holds_the_indecomposable_thin_modules(self, z: Fsm):
        tree = build_decomposition_tree(z)
        assert set(tree.modules()) | {frozenset([q]) for q in z.states} == set(
            enumerate_indecomposable_thin(z)
        )

    @PROPERTY_SETTINGS
    @given(accessible_fsms())
    def test_thin_queries(self, z: Fsm):
        tree = build_decomposition_tree(z)
        thin = enumerate_thin_modules(z)
        for m in subsets(z):
            assert is_thin_module_via_tree(tree, m) == (m in thin)

    @PROPERTY_SETTINGS
    @given(accessible_fsms())
    def test_bounds(self, z: Fsm):
        tree = build_decomposition_tree(z)
        if z.size > 1:
            assert z.size + 1 <= len(tree) <= 2 * z.size - 1
        assert tree.arc_count <= arc_bound(z)
        assert transitive_reduction_matches(tree)


class TestModuleDefinitions:
    @PROPERTY_SETTINGS
    @given(accessible_fsms(max_n=5))
    def test_definitions_agree(self, z: Fsm):
        for m in subsets(z):
            assert is_module(z, m) == is_module_abstract(z, m)


class TestHfsm:
    @PROPERTY_SETTINGS
    @given(thin_hfsms())
    def test_core_and_dimension_invariance(self, z: Hfsm):
        flat = Hfsm.flat(flatten(z))
        assert core(z) == core(flat)
        assert hfsm_dimension(z) == hfsm_dimension(flat)

    @PROPERTY_SETTINGS
    @given(thin_hfsms())
    def test_maximize(self, z: Hfsm):
        best = maximize(z)
        assert is_thin_hfsm(best)
        assert is_maximal(best)
        assert hfsm_equivalent(best, z)
        if flatten(z).size > 1:
            assert best.order == hfsm_dimension(z)


class TestVerifyHarness:
    @PROPERTY_SETTINGS
    @given(accessible_fsms(max_n=5))
    def test_check_fsm_passes(self, z: Fsm):
        assert check_fsm(z).ok

    @PROPERTY_SETTINGS
    @given(thin_hfsms(max_n=6))
    def test_check_hfsm_passes(self, z: Hfsm):
        report = check_hfsm(z, report=VerifyReport())
        assert report.ok
