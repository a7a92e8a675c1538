"""Turning a multi-root solution into an equal-cost single-root solution.

When all demand pairs fall into one connected component of the demand graph,
the connectivity requirement is that of a Steiner tree on the component's
terminals, and the multi-root cut relaxation can be reshaped into the
single-root one without changing cost.  A spanning tree of the demand
component, oriented away from the chosen root, gives a topological order of
the terminals.  For every source vertex w, prefix maxima of its coverages
along that order define supplies that a single flow carries to w; reversing
the flow re-points w's arcs so that, summed over all w, the arc values
separate every terminal from the root by a full unit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import FlowShortfall, InfeasibleInput, LimitInfeasible, NotSteinerTree
from .flows import FlowNetwork, max_flow
from .model import Arc, Instance, VertexId, demand_graph, terminals
from .solution import BcrSolution, TreeBcrSolution


@dataclass(frozen=True)
class TransformState:
    """Spanning arborescence of the demand component and its vertex order.

    ``order`` lists the terminals topologically: every arborescence arc goes
    from an earlier to a later position.
    """

    root: VertexId
    arborescence: tuple[Arc, ...]
    order: tuple[VertexId, ...]

    def position(self, vertex: VertexId) -> int:
        return self.order.index(vertex)


def build_arborescence(inst: Instance, r0: VertexId) -> TransformState:
    """Breadth-first spanning tree of the demand component, away from r0.

    The demand component must be the only nontrivial one; its edges are the
    demand pairs, explored in input order, which fixes the tree and the
    topological numbering deterministically.
    """
    dg = demand_graph(inst)
    nontrivial = dg.nontrivial()
    if len(nontrivial) != 1:
        raise NotSteinerTree(
            f"need exactly one nontrivial demand component, found {len(nontrivial)}"
        )
    component = set(nontrivial[0])
    if r0 not in component:
        raise NotSteinerTree(f"root {r0!r} is outside the demand component")
    adjacency: dict[VertexId, list[VertexId]] = {v: [] for v in component}
    for (s, t) in inst.pairs:
        adjacency[s].append(t)
        adjacency[t].append(s)
    order = [r0]
    arcs: list[Arc] = []
    seen = {r0}
    frontier = 0
    while frontier < len(order):
        current = order[frontier]
        frontier += 1
        for other in adjacency[current]:
            if other not in seen:
                seen.add(other)
                order.append(other)
                arcs.append(Arc(current, other))
    if seen != component:
        raise NotSteinerTree("demand component is not connected by its pairs")
    return TransformState(r0, tuple(arcs), tuple(order))


def supply_profile(
    sol: BcrSolution, inst: Instance, w: VertexId, state: TransformState
) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Prefix maxima of w's coverages along the order, and their increments.

    The i-th maximum is the largest coverage w gives to any pair touching the
    first i+1 terminals; increments are the nonnegative first differences.
    """
    z_w = {i: v for (r, i), v in sol.z.items() if r == w and v > 0}
    touched: dict[VertexId, list[int]] = {}
    for index, (s, t) in enumerate(inst.pairs):
        touched.setdefault(s, []).append(index)
        touched.setdefault(t, []).append(index)
    maxima: list[Fraction] = []
    current = Fraction(0)
    for vertex in state.order:
        for index in touched.get(vertex, ()):
            value = z_w.get(index, Fraction(0))
            if value > current:
                current = value
        maxima.append(current)
    increments = [maxima[0]]
    for i in range(1, len(maxima)):
        increments.append(maxima[i] - maxima[i - 1])
    return tuple(maxima), tuple(increments)


def reorient_source(
    sol: BcrSolution, inst: Instance, w: VertexId, state: TransformState
) -> dict[Arc, Fraction]:
    """Re-point w's arc values toward w's duties by one reversed flow.

    A super source supplies each terminal other than w with its increment;
    the flow must fully arrive at w inside w's own arc capacities, or the
    input solution was infeasible.  Reversing the flow yields the adjusted
    arc values for w.
    """
    x_w = {arc: v for (r, arc), v in sol.x.items() if r == w and v > 0}
    _maxima, increments = supply_profile(sol, inst, w, state)
    demand = Fraction(0)
    net = FlowNetwork()
    for arc, value in x_w.items():
        net.add_arc(("v", arc.tail), ("v", arc.head), value)
    for position, vertex in enumerate(state.order):
        if vertex != w and increments[position] > 0:
            net.add_arc(("s",), ("v", vertex), increments[position])
            demand += increments[position]
    if demand == 0:
        return x_w
    try:
        result = max_flow(net, [("s",)], [("v", w)], limit=demand)
    except LimitInfeasible as exc:
        raise FlowShortfall(
            f"source {w}: only part of the supply {demand} reaches it; input infeasible"
        ) from exc
    adjusted = dict(x_w)
    for (tail, head), amount in result.flow.items():
        if tail == ("s",) or head == ("s",):
            continue
        arc = Arc(tail[1], head[1])
        adjusted[arc] = adjusted.get(arc, Fraction(0)) - amount
        rev = arc.reversed()
        adjusted[rev] = adjusted.get(rev, Fraction(0)) + amount
    for arc, value in adjusted.items():
        if value < 0:
            raise InfeasibleInput(f"source {w}: arc {arc} overdrawn while reorienting")
    return {arc: v for arc, v in adjusted.items() if v > 0}


def to_tree_bcr(
    sol: BcrSolution, inst: Instance, r0: VertexId | None = None
) -> TreeBcrSolution:
    """Aggregate every source's reoriented values into a single-root solution.

    The result is feasible for the Steiner tree requirement on the demand
    component's terminals with root r0 (default: smallest terminal) and costs
    exactly what the input does.
    """
    if r0 is None:
        r0 = min(terminals(inst))
    state = build_arborescence(inst, r0)
    sources = sorted({r for (r, _key) in sol.x} | {r for (r, _key) in sol.z})
    total: dict[Arc, Fraction] = {}
    for w in sources:
        for arc, value in reorient_source(sol, inst, w, state).items():
            total[arc] = total.get(arc, Fraction(0)) + value
    return TreeBcrSolution.from_sparse(r0, total)
