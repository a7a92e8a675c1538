"""Single-root reshaping of multi-root solutions on one demand component."""

import itertools
from fractions import Fraction

import pytest

from bcrforest.errors import NotSteinerTree
from bcrforest.generators import gen_lower_bound
from bcrforest.model import Arc, make_instance, terminals
from bcrforest.solution import (
    BcrSolution,
    cost,
    is_half_integral,
    tree_cost,
    verify_tree_bcr,
)
from bcrforest.steiner import (
    build_arborescence,
    reorient_source,
    supply_profile,
    to_tree_bcr,
)


def _chain_instance():
    """Path a - b - c with chained demands (a,b) and (b,c)."""
    return make_instance(
        ["a", "b", "c"],
        [("a", "b", Fraction(1)), ("b", "c", Fraction(1))],
        [("a", "b"), ("b", "c")],
    )


def _chain_solution():
    """Root c covers (a,b); root b covers (b,c)."""
    return BcrSolution.from_sparse(
        {
            ("c", Arc("a", "b")): Fraction(1),
            ("c", Arc("b", "c")): Fraction(1),
            ("b", Arc("c", "b")): Fraction(1),
        },
        {("c", 0): Fraction(1), ("b", 1): Fraction(1)},
    )


class TestBuildArborescence:
    def test_chain_order_and_arcs(self):
        state = build_arborescence(_chain_instance(), "a")
        assert state.root == "a"
        assert state.order == ("a", "b", "c")
        assert state.arborescence == (Arc("a", "b"), Arc("b", "c"))
        assert state.position("c") == 2

    def test_other_root_reverses(self):
        state = build_arborescence(_chain_instance(), "c")
        assert state.order == ("c", "b", "a")

    def test_star_breadth_first(self):
        inst = make_instance(
            ["h", "p", "q", "r"],
            [("h", "p", 1), ("h", "q", 1), ("h", "r", 1)],
            [("h", "p"), ("h", "q"), ("h", "r")],
        )
        state = build_arborescence(inst, "h")
        assert state.order == ("h", "p", "q", "r")
        assert set(state.arborescence) == {Arc("h", "p"), Arc("h", "q"), Arc("h", "r")}

    def test_two_components_rejected(self):
        inst, _sol = gen_lower_bound(2)
        with pytest.raises(NotSteinerTree):
            build_arborescence(inst, min(terminals(inst)))

    def test_root_outside_component_rejected(self):
        inst = make_instance(
            ["a", "b", "x"],
            [("a", "b", 1), ("b", "x", 1)],
            [("a", "b")],
        )
        with pytest.raises(NotSteinerTree):
            build_arborescence(inst, "x")


class TestSupplyProfile:
    def test_prefix_maxima_and_increments(self):
        inst = _chain_instance()
        sol = BcrSolution.from_sparse(
            {},
            {("c", 0): Fraction(1, 2), ("c", 1): Fraction(1)},
        )
        state = build_arborescence(inst, "a")
        maxima, increments = supply_profile(sol, inst, "c", state)
        # Pair 0 touches a and b, pair 1 touches b and c.
        assert maxima == (Fraction(1, 2), Fraction(1), Fraction(1))
        assert increments == (Fraction(1, 2), Fraction(1, 2), Fraction(0))

    def test_source_without_coverage(self):
        inst = _chain_instance()
        state = build_arborescence(inst, "a")
        maxima, increments = supply_profile(
            BcrSolution.from_sparse({}, {}), inst, "b", state
        )
        assert maxima == (Fraction(0),) * 3
        assert increments == (Fraction(0),) * 3


class TestReorientSource:
    def test_far_root_flips_its_path(self):
        inst = _chain_instance()
        sol = _chain_solution()
        state = build_arborescence(inst, "a")
        adjusted = reorient_source(sol, inst, "c", state)
        # c's unit duty toward a travels a->b->c; reversed it points at a.
        assert adjusted == {Arc("b", "a"): Fraction(1), Arc("c", "b"): Fraction(1)}

    def test_self_supply_untouched(self):
        inst = _chain_instance()
        sol = _chain_solution()
        state = build_arborescence(inst, "a")
        adjusted = reorient_source(sol, inst, "b", state)
        assert adjusted == {Arc("c", "b"): Fraction(1)}


class TestToTreeBcr:
    def test_chain_hand_oracle(self):
        inst = _chain_instance()
        sol = _chain_solution()
        tree = to_tree_bcr(sol, inst)
        assert tree.root == "a"
        assert tree.x == {Arc("b", "a"): Fraction(1), Arc("c", "b"): Fraction(2)}
        assert verify_tree_bcr(inst, tree).feasible
        assert tree_cost(inst, tree) == cost(inst, sol) == Fraction(3)

    def test_explicit_root_choice(self):
        inst = _chain_instance()
        sol = _chain_solution()
        tree = to_tree_bcr(sol, inst, r0="c")
        assert tree.root == "c"
        assert verify_tree_bcr(inst, tree).feasible
        assert tree_cost(inst, tree) == Fraction(3)

    def test_multi_component_rejected(self):
        inst, sol = gen_lower_bound(3)
        with pytest.raises(NotSteinerTree):
            to_tree_bcr(sol, inst)

    def test_corpus_feasible_and_cost_preserving(self, single_component_corpus):
        for seed, inst, sol in single_component_corpus:
            tree = to_tree_bcr(sol, inst)
            verdict = verify_tree_bcr(inst, tree)
            assert verdict.feasible, (seed, verdict.violation)
            assert tree_cost(inst, tree) == cost(inst, sol), seed
            assert is_half_integral(sol)

    def test_cut_audit_by_enumeration(self, single_component_corpus):
        """Every root-avoiding terminal cut sees a full unit leaving it."""
        audited = 0
        for _seed, inst, sol in single_component_corpus:
            if len(inst.vertices) > 8:
                continue
            tree = to_tree_bcr(sol, inst)
            terms = set(terminals(inst))
            others = [v for v in inst.vertices if v != tree.root]
            for r in range(1, len(others) + 1):
                for combo in itertools.combinations(others, r):
                    side = frozenset(combo)
                    if not (side & terms):
                        continue
                    outgoing = sum(
                        (
                            v
                            for arc, v in tree.x.items()
                            if arc.tail in side and arc.head not in side
                        ),
                        Fraction(0),
                    )
                    assert outgoing >= 1, (side, outgoing)
            audited += 1
        assert audited >= 5
