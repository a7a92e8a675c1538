"""Exact desk-scale optimizer for the cut relaxations via cutting planes.

Variables live only at terminal roots (rerouting shows non-terminal roots
never help).  The solver keeps a small restricted LP: the per-pair coverage
equalities plus the cut rows separated so far.  Each round the restricted
optimum is separated exactly — one min cut per (root, pair endpoint) — and
the most violated cut per (root, pair) enters the tableau, which a dual
simplex repairs in place; slack cut rows are dropped between rounds, with a
re-add counter that eventually pins oscillating rows.  All arithmetic is
rational, so the final value is exact and the final solution passes full
separation by construction.

The single-root relaxation is solved the same way with unit-demand cuts and
no coverage variables.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable

from gmpy2 import mpq

from .errors import IterationCapExceeded, SizeExceeded, SolverError
from .flows import FlowNetwork, max_flow
from .model import Arc, Instance, VertexId, edge_key
from .model import terminals as terminals_of
from .solution import BcrSolution, TreeBcrSolution, verify_primal

_ZERO = mpq(0)
_STALL_LIMIT = 30


class _Tableau:
    """Sparse exact simplex tableau driven by dual pivots only.

    Rows are kept basis-canonical: each row's basic column appears with
    coefficient one in that row alone, and reduced costs stay nonnegative, so
    after new rows arrive with negative right-hand sides the dual simplex
    restores optimality without any feasibility phase.
    """

    def __init__(self) -> None:
        self.cost: list[mpq] = []
        self.red: list[mpq] = []
        self.retired: set[int] = set()
        self.rows: list[dict[int, mpq]] = []
        self.rhs: list[mpq] = []
        self.basis: list[int] = []
        self.basic_row: dict[int, int] = {}
        self.pivots = 0

    def add_column(self, cost: mpq) -> int:
        self.cost.append(cost)
        self.red.append(cost)
        return len(self.cost) - 1

    def add_eq_row_with_basic(self, coeffs: dict[int, mpq], rhs: mpq, basic: int) -> None:
        """Append an equality row whose designated column is already canonical."""
        if coeffs.get(basic) != 1:
            raise SolverError("designated basic column must carry coefficient one")
        if basic in self.basic_row or self.red[basic] != 0:
            raise SolverError("designated basic column is not fresh")
        for other in range(len(self.rows)):
            if basic in self.rows[other]:
                raise SolverError("designated basic column appears elsewhere")
        self.rows.append(dict(coeffs))
        self.rhs.append(rhs)
        self.basis.append(basic)
        self.basic_row[basic] = len(self.rows) - 1

    def add_ge_row(self, coeffs: dict[int, mpq], rhs: mpq) -> int:
        """Append constraint coeffs . v >= rhs; returns its surplus column.

        Stored negated so the fresh surplus column is basic; the row is then
        reduced through the current basis, typically leaving a negative
        right-hand side for the dual simplex.
        """
        surplus = self.add_column(_ZERO)
        row = {j: -a for j, a in coeffs.items() if a != 0}
        row[surplus] = mpq(1)
        value = -rhs
        for j in [j for j in row if j in self.basic_row]:
            factor = row[j]
            if factor == 0:
                continue
            i = self.basic_row[j]
            for k, v in self.rows[i].items():
                updated = row.get(k, _ZERO) - factor * v
                if updated == 0:
                    row.pop(k, None)
                else:
                    row[k] = updated
            value -= factor * self.rhs[i]
        self.rows.append(row)
        self.rhs.append(value)
        self.basis.append(surplus)
        self.basic_row[surplus] = len(self.rows) - 1
        return surplus

    def pivot(self, i: int, j: int) -> None:
        row = self.rows[i]
        pivot_value = row.get(j, _ZERO)
        if pivot_value == 0:
            raise SolverError("zero pivot")
        inverse = 1 / pivot_value
        new_row = {k: v * inverse for k, v in row.items() if v != 0}
        self.rows[i] = new_row
        self.rhs[i] *= inverse
        items = list(new_row.items())
        rows = self.rows
        rhs = self.rhs
        rhs_i = rhs[i]
        for t in range(len(rows)):
            if t == i:
                continue
            other = rows[t]
            factor = other.get(j)
            if not factor:
                continue
            get = other.get
            pop = other.pop
            for k, v in items:
                updated = get(k, _ZERO) - factor * v
                if updated:
                    other[k] = updated
                else:
                    pop(k, None)
            rhs[t] -= factor * rhs_i
        factor = self.red[j]
        if factor != 0:
            red = self.red
            for k, v in items:
                red[k] -= factor * v
        old = self.basis[i]
        del self.basic_row[old]
        self.basis[i] = j
        self.basic_row[j] = i
        self.pivots += 1

    def objective(self) -> mpq:
        total = _ZERO
        for i, j in enumerate(self.basis):
            if self.cost[j] != 0:
                total += self.cost[j] * self.rhs[i]
        return total

    def dual_simplex(self, pivot_cap: int = 200_000) -> None:
        bland = False
        stall = 0
        last = self.objective()
        while True:
            negatives = [i for i in range(len(self.rows)) if self.rhs[i] < 0]
            if not negatives:
                return
            if bland:
                i = min(negatives, key=lambda t: self.basis[t])
            else:
                i = min(negatives, key=lambda t: (self.rhs[t], self.basis[t]))
            row = self.rows[i]
            best_j = -1
            best_ratio: mpq | None = None
            for j, a in row.items():
                if j == self.basis[i] or a >= 0 or j in self.retired:
                    continue
                ratio = self.red[j] / (-a)
                if best_ratio is None or ratio < best_ratio or (
                    ratio == best_ratio and j < best_j
                ):
                    best_ratio = ratio
                    best_j = j
            if best_ratio is None:
                raise SolverError("restricted LP became infeasible")
            self.pivot(i, best_j)
            if self.pivots > pivot_cap:
                raise SolverError("pivot cap exhausted")
            current = self.objective()
            if current == last:
                stall += 1
                if stall > _STALL_LIMIT:
                    bland = True
            else:
                stall = 0
                last = current

    def drop_slack_rows(self, droppable: Callable[[int], bool]) -> list[int]:
        """Remove rows whose basic surplus column passes the filter with slack.

        Each surplus column lives in exactly one original constraint, so a
        row where one is basic can be deleted wholesale; the column is
        retired.  Returns the retired columns.
        """
        keep_rows = []
        keep_rhs = []
        keep_basis = []
        dropped: list[int] = []
        for i in range(len(self.rows)):
            j = self.basis[i]
            if self.rhs[i] > 0 and droppable(j):
                dropped.append(j)
                self.retired.add(j)
                continue
            keep_rows.append(self.rows[i])
            keep_rhs.append(self.rhs[i])
            keep_basis.append(j)
        if dropped:
            self.rows = keep_rows
            self.rhs = keep_rhs
            self.basis = keep_basis
            self.basic_row = {j: i for i, j in enumerate(self.basis)}
        return dropped

    def value_of(self, j: int) -> mpq:
        i = self.basic_row.get(j)
        return self.rhs[i] if i is not None else _ZERO


def _to_mpq(value: Fraction | int) -> mpq:
    f = Fraction(value)
    return mpq(f.numerator, f.denominator)


def _to_fraction(value: mpq) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


CutKey = Hashable


class _CuttingPlanes:
    """Round loop shared by both relaxations."""

    def __init__(self, tableau: _Tableau) -> None:
        self.tableau = tableau
        self.active: dict[CutKey, int] = {}
        self.surplus_key: dict[int, CutKey] = {}
        self.times_added: dict[CutKey, int] = {}
        self.permanent: set[CutKey] = set()

    def run(
        self,
        separate: Callable[[], list[tuple[CutKey, dict[int, mpq], mpq]]],
        iteration_cap: int,
        describe: Callable[[], tuple],
    ) -> None:
        rounds = 0
        while True:
            rounds += 1
            if rounds > iteration_cap:
                value, solution = describe()
                raise IterationCapExceeded(
                    f"no separated optimum within {iteration_cap} rounds",
                    value=value,
                    solution=solution,
                )
            self.tableau.dual_simplex()
            dropped = self.tableau.drop_slack_rows(
                lambda j: j in self.surplus_key
                and self.surplus_key[j] not in self.permanent
            )
            for j in dropped:
                del self.active[self.surplus_key[j]]
                del self.surplus_key[j]
            violated = separate()
            if not violated:
                return
            for key, coeffs, rhs in violated:
                if key in self.active:
                    continue
                count = self.times_added.get(key, 0) + 1
                self.times_added[key] = count
                if count >= 3:
                    self.permanent.add(key)
                surplus = self.tableau.add_ge_row(coeffs, rhs)
                self.active[key] = surplus
                self.surplus_key[surplus] = key


def solve_forest_bcr(
    inst: Instance,
    iteration_cap: int = 500,
    var_cap: int = 2500,
) -> tuple[Fraction, BcrSolution]:
    """Exact optimum of the multi-root cut relaxation with terminal roots.

    Returns the optimal value and an optimal solution that passes full
    separation (and the primal verifier).  Raises SizeExceeded beyond the
    variable cap and IterationCapExceeded past the round cap, the latter
    carrying the current lower bound and restricted solution.
    """
    roots = sorted(terminals_of(inst))
    if not roots:
        return Fraction(0), BcrSolution({}, {})
    arcs: list[Arc] = []
    for (u, v) in sorted(inst.edges):
        arcs.append(Arc(u, v))
        arcs.append(Arc(v, u))
    total_vars = len(roots) * (len(arcs) + len(inst.pairs))
    if total_vars > var_cap:
        raise SizeExceeded(f"{total_vars} variables exceed the cap {var_cap}")

    tableau = _Tableau()
    x_col: dict[tuple[VertexId, Arc], int] = {}
    for r in roots:
        for arc in arcs:
            cost = _to_mpq(inst.edges[edge_key(arc.tail, arc.head)])
            x_col[(r, arc)] = tableau.add_column(cost)
    z_col: dict[tuple[VertexId, int], int] = {}
    for r in roots:
        for i in range(len(inst.pairs)):
            z_col[(r, i)] = tableau.add_column(_ZERO)
    for i in range(len(inst.pairs)):
        coeffs = {z_col[(r, i)]: mpq(1) for r in roots}
        tableau.add_eq_row_with_basic(coeffs, mpq(1), z_col[(roots[0], i)])

    def current_solution() -> BcrSolution:
        x = {
            key: _to_fraction(tableau.value_of(col))
            for key, col in x_col.items()
            if tableau.value_of(col) != 0
        }
        z = {
            key: _to_fraction(tableau.value_of(col))
            for key, col in z_col.items()
            if tableau.value_of(col) != 0
        }
        return BcrSolution(x, z)

    def cut_coeffs(root: VertexId, pair_index: int, cut: frozenset[VertexId]) -> dict[int, mpq]:
        coeffs: dict[int, mpq] = {}
        for (u, v) in inst.edges:
            if u in cut and v not in cut:
                coeffs[x_col[(root, Arc(u, v))]] = mpq(1)
            elif v in cut and u not in cut:
                coeffs[x_col[(root, Arc(v, u))]] = mpq(1)
        coeffs[z_col[(root, pair_index)]] = mpq(-1)
        return coeffs

    def separate() -> list[tuple[CutKey, dict[int, mpq], mpq]]:
        cuts = []
        for r in roots:
            net = FlowNetwork()
            for arc in arcs:
                value = tableau.value_of(x_col[(r, arc)])
                if value > 0:
                    net.add_arc(arc.tail, arc.head, _to_fraction(value))
            for i, pair in enumerate(inst.pairs):
                need = _to_fraction(tableau.value_of(z_col[(r, i)]))
                if need <= 0:
                    continue
                best: tuple[Fraction, frozenset[VertexId]] | None = None
                for p in pair:
                    if p == r:
                        continue
                    result = max_flow(net, [p], [r])
                    if result.value < need:
                        gap = need - result.value
                        if best is None or gap > best[0]:
                            best = (gap, result.min_cut_side)
                if best is not None:
                    key = (r, i, best[1])
                    cuts.append((key, cut_coeffs(r, i, best[1]), _ZERO))
        return cuts

    loop = _CuttingPlanes(tableau)
    loop.run(
        separate,
        iteration_cap,
        lambda: (_to_fraction(tableau.objective()), current_solution()),
    )
    solution = current_solution()
    verdict = verify_primal(inst, solution)
    if not verdict.feasible:
        raise SolverError(f"separated optimum fails verification: {verdict.violation}")
    return _to_fraction(tableau.objective()), solution


def solve_tree_bcr(
    inst: Instance,
    terminals: frozenset[VertexId] | set[VertexId] | None = None,
    r0: VertexId | None = None,
    iteration_cap: int = 500,
    var_cap: int = 2500,
) -> tuple[Fraction, TreeBcrSolution]:
    """Exact optimum of the single-root cut relaxation.

    Terminals default to the pair endpoints and the root to the smallest
    terminal.  Every terminal must end up separated from the root by value
    one.
    """
    if terminals is None:
        terminals = terminals_of(inst)
    terms = sorted(terminals)
    if not terms:
        return Fraction(0), TreeBcrSolution(r0 or min(inst.vertices), {})
    for t in terms:
        if t not in inst.vertices:
            raise ValueError(f"terminal {t!r} is not a vertex")
    if r0 is None:
        r0 = terms[0]
    if r0 not in terms:
        raise ValueError(f"root {r0!r} is not a terminal")
    arcs: list[Arc] = []
    for (u, v) in sorted(inst.edges):
        arcs.append(Arc(u, v))
        arcs.append(Arc(v, u))
    if len(arcs) > var_cap:
        raise SizeExceeded(f"{len(arcs)} variables exceed the cap {var_cap}")

    tableau = _Tableau()
    x_col = {}
    for arc in arcs:
        cost = _to_mpq(inst.edges[edge_key(arc.tail, arc.head)])
        x_col[arc] = tableau.add_column(cost)

    def current_solution() -> TreeBcrSolution:
        x = {
            arc: _to_fraction(tableau.value_of(col))
            for arc, col in x_col.items()
            if tableau.value_of(col) != 0
        }
        return TreeBcrSolution(r0, x)

    def separate() -> list[tuple[CutKey, dict[int, mpq], mpq]]:
        net = FlowNetwork()
        for arc, col in x_col.items():
            value = tableau.value_of(col)
            if value > 0:
                net.add_arc(arc.tail, arc.head, _to_fraction(value))
        cuts = []
        for t in terms:
            if t == r0:
                continue
            result = max_flow(net, [t], [r0])
            if result.value < 1:
                cut = result.min_cut_side
                coeffs: dict[int, mpq] = {}
                for (u, v) in inst.edges:
                    if u in cut and v not in cut:
                        coeffs[x_col[Arc(u, v)]] = mpq(1)
                    elif v in cut and u not in cut:
                        coeffs[x_col[Arc(v, u)]] = mpq(1)
                cuts.append(((t, cut), coeffs, mpq(1)))
        return cuts

    loop = _CuttingPlanes(tableau)
    loop.run(
        separate,
        iteration_cap,
        lambda: (_to_fraction(tableau.objective()), current_solution()),
    )
    return _to_fraction(tableau.objective()), current_solution()
