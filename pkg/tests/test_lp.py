"""Exact LP solver: tableau mechanics, differential oracles, and relaxation values.

The tableau tests replay random programs against an exhaustive
vertex-enumeration oracle written directly over the original constraints with
Fraction arithmetic, so any canonicalization slip in the sparse pivoting shows
up as a value mismatch.
"""

import itertools
import random
from fractions import Fraction

import pytest
from gmpy2 import mpq

from bcrforest.errors import (
    IterationCapExceeded,
    SizeExceeded,
    SolverError,
)
from bcrforest.generators import gen_lower_bound, gen_random_halfintegral
from bcrforest.lp import _Tableau, _to_fraction, _to_mpq, solve_forest_bcr, solve_tree_bcr
from bcrforest.model import make_instance, shortest_paths, terminals
from bcrforest.solution import cost, tree_cost, verify_primal, verify_tree_bcr

# ---------------------------------------------------------------------------
# Independent oracle: exact vertex enumeration for min c.x, A x >= b, x >= 0.
# ---------------------------------------------------------------------------


def _gauss_solve(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Solve a square rational system; None when singular."""
    n = len(rows)
    aug = [list(row) + [r] for row, r in zip(rows, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * p for v, p in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def _enumerate_optimum(
    costs: list[Fraction],
    ge_rows: list[tuple[list[Fraction], Fraction]],
    eq_rows: list[tuple[list[Fraction], Fraction]] = (),
) -> Fraction:
    """Minimum of c.x over {A x >= b, E x = f, x >= 0} via basic solutions."""
    n = len(costs)
    pool: list[tuple[list[Fraction], Fraction]] = list(ge_rows)
    for j in range(n):
        unit = [Fraction(0)] * n
        unit[j] = Fraction(1)
        pool.append((unit, Fraction(0)))
    fixed = list(eq_rows)
    free_slots = n - len(fixed)
    assert free_slots >= 0
    best: Fraction | None = None
    for chosen in itertools.combinations(range(len(pool)), free_slots):
        tight = fixed + [pool[i] for i in chosen]
        point = _gauss_solve([row for row, _ in tight], [r for _, r in tight])
        if point is None:
            continue
        if any(v < 0 for v in point):
            continue
        if any(
            sum(a * v for a, v in zip(row, point)) < b for row, b in ge_rows
        ):
            continue
        if any(
            sum(a * v for a, v in zip(row, point)) != b for row, b in eq_rows
        ):
            continue
        value = sum(c * v for c, v in zip(costs, point))
        if best is None or value < best:
            best = value
    assert best is not None, "oracle found no feasible vertex"
    return best


def _rand_fraction(rng: random.Random, positive: bool = False) -> Fraction:
    value = Fraction(rng.randint(1 if positive else 0, 8), rng.choice([1, 1, 2]))
    return value


class TestTableauDifferential:
    def test_ge_only_random_programs(self):
        """Pure >= programs with nonnegative data, 40 seeded cases."""
        for seed in range(40):
            rng = random.Random(seed)
            n = rng.randint(2, 4)
            m = rng.randint(1, 4)
            costs = [_rand_fraction(rng) for _ in range(n)]
            ge_rows = []
            for _ in range(m):
                row = [_rand_fraction(rng) for _ in range(n)]
                if all(v == 0 for v in row):
                    row[rng.randrange(n)] = Fraction(1)
                ge_rows.append((row, _rand_fraction(rng)))

            tableau = _Tableau()
            cols = [tableau.add_column(_to_mpq(c)) for c in costs]
            for row, b in ge_rows:
                coeffs = {cols[j]: _to_mpq(a) for j, a in enumerate(row) if a != 0}
                tableau.add_ge_row(coeffs, _to_mpq(b))
            tableau.dual_simplex()

            point = [_to_fraction(tableau.value_of(c)) for c in cols]
            for row, b in ge_rows:
                assert sum(a * v for a, v in zip(row, point)) >= b, seed
            assert all(v >= 0 for v in point), seed
            assert all(r >= 0 for r in tableau.red), seed
            got = _to_fraction(tableau.objective())
            assert got == sum(c * v for c, v in zip(costs, point)), seed
            assert got == _enumerate_optimum(costs, ge_rows), seed

    def test_coverage_pattern_random_programs(self):
        """Equality rows with designated basic columns plus coupling cuts.

        Mirrors the relaxation's shape: zero-cost share variables on a
        simplex per group, positive-cost flow variables, and cut rows with a
        negative share coefficient.  25 seeded cases.
        """
        for seed in range(25):
            rng = random.Random(1000 + seed)
            groups = rng.randint(1, 2)
            nx = rng.randint(1, 3)
            n = nx + 2 * groups
            costs = [_rand_fraction(rng, positive=True) for _ in range(nx)]
            costs += [Fraction(0)] * (2 * groups)

            tableau = _Tableau()
            cols = [tableau.add_column(_to_mpq(c)) for c in costs]
            eq_rows = []
            for g in range(groups):
                a, b = nx + 2 * g, nx + 2 * g + 1
                tableau.add_eq_row_with_basic(
                    {cols[a]: mpq(1), cols[b]: mpq(1)}, mpq(1), cols[a]
                )
                row = [Fraction(0)] * n
                row[a] = row[b] = Fraction(1)
                eq_rows.append((row, Fraction(1)))

            ge_rows = []
            for _ in range(rng.randint(1, 4)):
                row = [Fraction(0)] * n
                for j in range(nx):
                    if rng.random() < 0.7:
                        row[j] = _rand_fraction(rng, positive=True)
                if all(v == 0 for v in row[:nx]):
                    row[rng.randrange(nx)] = Fraction(1)
                share = nx + rng.randrange(2 * groups)
                row[share] = Fraction(-1)
                ge_rows.append((row, Fraction(0)))
                coeffs = {cols[j]: _to_mpq(a) for j, a in enumerate(row) if a != 0}
                tableau.add_ge_row(coeffs, _to_mpq(0))
            tableau.dual_simplex()

            point = [_to_fraction(tableau.value_of(c)) for c in cols]
            for row, b in eq_rows:
                assert sum(a * v for a, v in zip(row, point)) == b, seed
            for row, b in ge_rows:
                assert sum(a * v for a, v in zip(row, point)) >= b, seed
            got = _to_fraction(tableau.objective())
            assert got == _enumerate_optimum(costs, ge_rows, eq_rows), seed

    def test_drop_then_readd_is_stable(self):
        """Dropping a slack row keeps the solution; re-adding it is harmless."""
        rng = random.Random(7)
        costs = [Fraction(2), Fraction(1), Fraction(3)]
        ge_rows = [
            ([Fraction(1), Fraction(1), Fraction(0)], Fraction(2)),
            ([Fraction(0), Fraction(1), Fraction(1)], Fraction(1)),
            ([Fraction(1), Fraction(0), Fraction(2)], Fraction(1)),
        ]
        tableau = _Tableau()
        cols = [tableau.add_column(_to_mpq(c)) for c in costs]
        surpluses = []
        stored = []
        for row, b in ge_rows:
            coeffs = {cols[j]: _to_mpq(a) for j, a in enumerate(row) if a != 0}
            stored.append((dict(coeffs), _to_mpq(b)))
            surpluses.append(tableau.add_ge_row(coeffs, _to_mpq(b)))
        tableau.dual_simplex()
        before = _to_fraction(tableau.objective())
        point_before = [_to_fraction(tableau.value_of(c)) for c in cols]

        slack = [
            s
            for s, (row, b) in zip(surpluses, ge_rows)
            if sum(a * v for a, v in zip(row, point_before)) > b
        ]
        dropped = tableau.drop_slack_rows(lambda j: j in slack)
        assert set(dropped) <= set(slack)
        assert _to_fraction(tableau.objective()) == before
        assert [_to_fraction(tableau.value_of(c)) for c in cols] == point_before

        for s, (coeffs, b) in zip(surpluses, stored):
            if s in dropped:
                tableau.add_ge_row(coeffs, b)
        tableau.dual_simplex()
        assert _to_fraction(tableau.objective()) == before
        del rng


class TestTableauGuards:
    def test_eq_row_requires_unit_coefficient(self):
        tableau = _Tableau()
        a = tableau.add_column(mpq(0))
        with pytest.raises(SolverError):
            tableau.add_eq_row_with_basic({a: mpq(2)}, mpq(1), a)

    def test_eq_row_requires_fresh_basic(self):
        tableau = _Tableau()
        a = tableau.add_column(mpq(0))
        b = tableau.add_column(mpq(0))
        tableau.add_eq_row_with_basic({a: mpq(1)}, mpq(1), a)
        with pytest.raises(SolverError):
            tableau.add_eq_row_with_basic({a: mpq(1), b: mpq(1)}, mpq(1), a)

    def test_eq_row_rejects_costed_basic(self):
        tableau = _Tableau()
        a = tableau.add_column(mpq(3))
        with pytest.raises(SolverError):
            tableau.add_eq_row_with_basic({a: mpq(1)}, mpq(1), a)

    def test_zero_pivot_rejected(self):
        tableau = _Tableau()
        a = tableau.add_column(mpq(0))
        b = tableau.add_column(mpq(1))
        tableau.add_eq_row_with_basic({a: mpq(1)}, mpq(1), a)
        with pytest.raises(SolverError):
            tableau.pivot(0, b)

    def test_infeasible_program_raises(self):
        # x >= 1 together with -x >= 0 cannot hold for x >= 0.
        tableau = _Tableau()
        a = tableau.add_column(mpq(1))
        tableau.add_ge_row({a: mpq(1)}, mpq(1))
        tableau.add_ge_row({a: mpq(-1)}, mpq(1))
        with pytest.raises(SolverError):
            tableau.dual_simplex()


class TestSolveTreeBcr:
    def test_triangle_value(self):
        inst = make_instance(
            ["a", "b", "c"],
            [("a", "b", 1), ("b", "c", 1), ("a", "c", 1)],
            [("a", "b"), ("b", "c")],
        )
        value, sol = solve_tree_bcr(inst)
        assert value == Fraction(2)
        assert sol.root == "a"
        assert verify_tree_bcr(inst, sol).feasible
        assert tree_cost(inst, sol) == value

    def test_two_terminals_match_shortest_path(self, corpus):
        """With two terminals the relaxation is a shortest path."""
        for seed, inst, _sol in corpus[:8]:
            verts = sorted(inst.vertices)
            u, v = verts[0], verts[-1]
            dist, _pred = shortest_paths(inst, u)
            value, sol = solve_tree_bcr(inst, terminals={u, v}, r0=u)
            assert value == dist[v], seed
            assert tree_cost(inst, sol) == value, seed

    def test_explicit_root(self):
        inst = make_instance(
            ["a", "b"], [("a", "b", 5)], [("a", "b")]
        )
        value, sol = solve_tree_bcr(inst, r0="b")
        assert value == Fraction(5)
        assert sol.root == "b"

    def test_unknown_terminal_rejected(self):
        inst = make_instance(["a", "b"], [("a", "b", 1)], [("a", "b")])
        with pytest.raises(ValueError):
            solve_tree_bcr(inst, terminals={"a", "zzz"})

    def test_non_terminal_root_rejected(self):
        inst = make_instance(
            ["a", "b", "m"], [("a", "m", 1), ("m", "b", 1)], [("a", "b")]
        )
        with pytest.raises(ValueError):
            solve_tree_bcr(inst, r0="m")

    def test_no_terminals(self):
        inst = make_instance(["a", "b"], [("a", "b", 1)], [])
        value, sol = solve_tree_bcr(inst)
        assert value == 0
        assert sol.x == {}

    def test_var_cap(self):
        inst = make_instance(
            ["a", "b", "c"],
            [("a", "b", 1), ("b", "c", 1), ("a", "c", 1)],
            [("a", "c")],
        )
        with pytest.raises(SizeExceeded):
            solve_tree_bcr(inst, var_cap=3)


class TestSolveForestBcr:
    def test_disjoint_pairs_cost_two(self):
        inst = make_instance(
            ["a", "b", "c", "d"],
            [("a", "b", 1), ("b", "c", 1), ("c", "d", 1)],
            [("a", "b"), ("c", "d")],
        )
        value, sol = solve_forest_bcr(inst)
        assert value == Fraction(2)
        assert verify_primal(inst, sol).feasible
        assert cost(inst, sol) == value

    def test_empty_demand(self):
        inst = make_instance(["a", "b"], [("a", "b", 1)], [])
        value, sol = solve_forest_bcr(inst)
        assert value == 0
        assert sol.x == {} and sol.z == {}

    def test_lower_bound_family_optimum(self):
        # The generated fractional solution costs 2q and is optimal here.
        for q in (1, 2):
            inst, sol = gen_lower_bound(q)
            value, opt = solve_forest_bcr(inst)
            assert value == 2 * q, q
            assert value <= cost(inst, sol), q
            assert verify_primal(inst, opt).feasible, q

    def test_lower_bound_two_tree_value(self):
        inst, _sol = gen_lower_bound(2)
        value, _tree = solve_tree_bcr(inst, terminals=terminals(inst))
        assert value == Fraction(5)

    def test_optimum_at_most_any_feasible_solution(self, corpus):
        for seed, inst, sol in corpus[:6]:
            if len(inst.vertices) > 8:
                continue
            value, _opt = solve_forest_bcr(inst)
            assert value <= cost(inst, sol), seed

    def test_var_cap(self):
        inst, _sol = gen_lower_bound(2)
        with pytest.raises(SizeExceeded):
            solve_forest_bcr(inst, var_cap=10)

    def test_iteration_cap_carries_partial_result(self):
        inst = make_instance(
            ["a", "b", "c"],
            [("a", "b", 1), ("b", "c", 1), ("a", "c", 1)],
            [("a", "b"), ("b", "c"), ("a", "c")],
        )
        true_value, _opt = solve_forest_bcr(inst)
        with pytest.raises(IterationCapExceeded) as excinfo:
            solve_forest_bcr(inst, iteration_cap=1)
        assert excinfo.value.value <= true_value
        assert excinfo.value.solution is not None

    def test_random_instance_solution_is_certified(self):
        inst, _sol = gen_random_halfintegral(3, 7, 3, 2)
        value, opt = solve_forest_bcr(inst)
        verdict = verify_primal(inst, opt)
        assert verdict.feasible
        assert cost(inst, opt) == value
