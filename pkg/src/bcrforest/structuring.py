"""Solution restructuring: root rerouting, splitting off, and reduction.

Three cost-safe rewrites prepare a feasible solution for contraction-based
rounding:

* :func:`reroute_steiner_roots` moves every non-terminal root's mass onto a
  terminal by reversing a flow toward the old root, preserving cost exactly.
* :func:`well_structure` then splits off wedges ``u -> v -> w`` into direct
  arcs ``u -> w`` wherever that keeps the solution feasible, at the largest
  safe amount each time, until no positive split remains.
* :func:`fully_reduce` lowers every arc value to the least amount the cut
  constraints still support, removing slack mass.

All three preserve feasibility and never increase cost on metrically closed
instances; splitting off requires the shortcut edge to exist and is skipped
otherwise.

A split of size ``eps`` on (root r; u, v, w) lowers exactly two families of
cut values: cuts containing v but not r, u, w (they lose the arc v -> w), and
cuts containing u and w but not r, v (they lose u -> v).  Both families must
keep value at least the root's coverage of every pair they separate, so the
safe amount is the minimum slack over both, additionally capped by the two
arc values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import InfeasibleInput, LimitInfeasible, SolverError
from .flows import FlowNetwork, max_flow, min_cut_value
from .model import Arc, Instance, VertexId, edge_key, terminals
from .solution import BcrSolution


@dataclass(frozen=True)
class StructuringReport:
    """What :func:`well_structure` did: rerouted roots and applied splits."""

    rerouted_roots: tuple[VertexId, ...]
    splits: tuple[tuple[VertexId, VertexId, VertexId, VertexId, Fraction], ...]

    @property
    def split_count(self) -> int:
        return len(self.splits)


def _root_network(sol: BcrSolution, root: VertexId) -> FlowNetwork:
    net = FlowNetwork()
    for (r, arc), value in sol.x.items():
        if r == root and value > 0:
            net.add_arc(arc.tail, arc.head, value)
    return net


def _positive_pairs(sol: BcrSolution, root: VertexId) -> list[tuple[int, Fraction]]:
    out = [(i, v) for (r, i), v in sol.z.items() if r == root and v > 0]
    out.sort()
    return out


def reroute_steiner_roots(inst: Instance, sol: BcrSolution) -> BcrSolution:
    """Move each non-terminal root's mass onto a terminal it covers.

    For a non-terminal root r, take its most-covered pair (ties to the
    smallest pair index), let v be the smaller-labelled endpoint, and push a
    flow of that coverage from v to r inside the root's own arc values.
    Reversing the flow makes v a root that serves every pair r served, so all
    of r's x and z move to v.  Cost is unchanged because reversed arcs cost
    the same.  Raises InfeasibleInput when the flow cannot reach the coverage
    value, which certifies the input solution was infeasible.
    """
    terms = terminals(inst)
    out = sol.copy()
    for root in sorted({r for (r, _i) in out.z}):
        if root in terms:
            continue
        pairs = _positive_pairs(out, root)
        if not pairs:
            continue
        best_index, best_value = max(pairs, key=lambda item: (item[1], -item[0]))
        v = min(inst.pairs[best_index])
        net = _root_network(out, root)
        try:
            result = max_flow(net, [v], [root], limit=best_value)
        except LimitInfeasible as exc:
            raise InfeasibleInput(
                f"root {root}: cannot route {best_value} from {v}; solution infeasible"
            ) from exc
        x_bar: dict[Arc, Fraction] = {
            arc: value for (r, arc), value in out.x.items() if r == root
        }
        for (tail, head), amount in result.flow.items():
            arc = Arc(tail, head)
            x_bar[arc] = x_bar.get(arc, Fraction(0)) - amount
            rev = arc.reversed()
            x_bar[rev] = x_bar.get(rev, Fraction(0)) + amount
        for key in [k for k in out.x if k[0] == root]:
            del out.x[key]
        for arc, value in x_bar.items():
            if value < 0:
                raise InfeasibleInput(f"root {root}: arc {arc} overdrawn while rerouting")
            if value > 0:
                key = (v, arc)
                out.x[key] = out.x.get(key, Fraction(0)) + value
        for key in [k for k in out.z if k[0] == root]:
            zkey = (v, key[1])
            out.z[zkey] = out.z.get(zkey, Fraction(0)) + out.z[key]
            del out.z[key]
    return out


def split_candidates(
    inst: Instance, sol: BcrSolution, root: VertexId
) -> Iterator[tuple[VertexId, VertexId, VertexId]]:
    """Wedges (u, v, w) at a root, in canonical order, with shortcuts present.

    A wedge needs positive values on u -> v and v -> w, distinct u and w, and
    an instance edge between u and w to carry the split mass.
    """
    into: dict[VertexId, list[VertexId]] = {}
    out_of: dict[VertexId, list[VertexId]] = {}
    for (r, arc), value in sol.x.items():
        if r == root and value > 0:
            into.setdefault(arc.head, []).append(arc.tail)
            out_of.setdefault(arc.tail, []).append(arc.head)
    for v in sorted(set(into) & set(out_of)):
        for u in sorted(into[v]):
            for w in sorted(out_of[v]):
                if u != w and edge_key(u, w) in inst.edges:
                    yield (u, v, w)


def split_epsilon(
    inst: Instance,
    sol: BcrSolution,
    root: VertexId,
    u: VertexId,
    v: VertexId,
    w: VertexId,
    net: FlowNetwork | None = None,
) -> Fraction:
    """Largest feasibility-preserving split amount for wedge (u, v, w) at root.

    Capped by both wedge arc values and by the slack of every cut either
    family loses: for each pair the root covers and each usable endpoint t,
    family one is cut apart by {v, t} versus {root, u, w}, family two by
    {u, w, t} versus {root, v}.
    """
    if net is None:
        net = _root_network(sol, root)
    eps = min(
        sol.x.get((root, Arc(u, v)), Fraction(0)),
        sol.x.get((root, Arc(v, w)), Fraction(0)),
    )
    if eps <= 0:
        return Fraction(0)
    for pair_index, need in _positive_pairs(sol, root):
        endpoints = inst.pairs[pair_index]
        if v != root:
            for t in endpoints:
                if t in (root, u, w):
                    continue
                slack = min_cut_value(net, {v, t}, {root, u, w}) - need
                eps = min(eps, slack)
                if eps <= 0:
                    return max(eps, Fraction(0))
        if u != root and w != root:
            for t in endpoints:
                if t in (root, v):
                    continue
                slack = min_cut_value(net, {u, w, t}, {root, v}) - need
                eps = min(eps, slack)
                if eps <= 0:
                    return max(eps, Fraction(0))
    return max(eps, Fraction(0))


def _apply_split(
    sol: BcrSolution, root: VertexId, u: VertexId, v: VertexId, w: VertexId, eps: Fraction
) -> None:
    for arc in (Arc(u, v), Arc(v, w)):
        key = (root, arc)
        left = sol.x[key] - eps
        if left < 0:
            raise SolverError(f"split at {root} overdraws {arc}")
        if left == 0:
            del sol.x[key]
        else:
            sol.x[key] = left
    key = (root, Arc(u, w))
    sol.x[key] = sol.x.get(key, Fraction(0)) + eps


def well_structure(inst: Instance, sol: BcrSolution) -> tuple[BcrSolution, StructuringReport]:
    """Reroute non-terminal roots, then split off wedges to a fixed point.

    Roots are processed in sorted order; at each root the first wedge (in
    canonical order) with a positive safe amount is split by that full
    amount, and the scan restarts until no wedge at the root can move.  The
    returned report lists the rerouted roots and every applied split.
    """
    terms = terminals(inst)
    rerouted = tuple(
        sorted(r for r in {root for (root, _i) in sol.z} if r not in terms)
    )
    out = reroute_steiner_roots(inst, sol)
    splits: list[tuple[VertexId, VertexId, VertexId, VertexId, Fraction]] = []
    arc_bound = len(inst.edges) * 2
    cap = max(1, len(inst.vertices) * arc_bound * arc_bound)
    for root in sorted({r for (r, _a) in out.x}):
        while True:
            net = _root_network(out, root)
            applied = False
            for (u, v, w) in split_candidates(inst, out, root):
                eps = split_epsilon(inst, out, root, u, v, w, net=net)
                if eps > 0:
                    _apply_split(out, root, u, v, w, eps)
                    splits.append((root, u, v, w, eps))
                    applied = True
                    break
            if not applied:
                break
            if len(splits) > cap:
                raise SolverError("splitting off failed to reach a fixed point")
    return out, StructuringReport(rerouted, tuple(splits))


def audit_well_structured(
    inst: Instance, sol: BcrSolution
) -> list[tuple[VertexId, VertexId, VertexId, VertexId, Fraction]]:
    """Wedges that could still be split; empty means well structured."""
    found = []
    for root in sorted({r for (r, _a) in sol.x}):
        net = _root_network(sol, root)
        for (u, v, w) in split_candidates(inst, sol, root):
            eps = split_epsilon(inst, sol, root, u, v, w, net=net)
            if eps > 0:
                found.append((root, u, v, w, eps))
    return found


def reduction_delta(
    inst: Instance,
    sol: BcrSolution,
    root: VertexId,
    arc: Arc,
    net: FlowNetwork | None = None,
) -> Fraction:
    """Largest feasibility-preserving decrease of one arc value at one root.

    Lowering arc a -> b only hurts cuts containing a but not b or the root,
    so the decrease is capped by the least slack of such a cut over every
    pair the root covers and every usable pair endpoint t, the cut being the
    minimum one separating {t, a} from {root, b}.  With the tail equal to the
    root no constrained cut is affected and the whole value can go.
    """
    cap = sol.x.get((root, arc), Fraction(0))
    if cap <= 0:
        return Fraction(0)
    if arc.tail == root:
        return cap
    if net is None:
        net = _root_network(sol, root)
    delta = cap
    for pair_index, need in _positive_pairs(sol, root):
        for t in inst.pairs[pair_index]:
            if t in (root, arc.head):
                continue
            slack = min_cut_value(net, {t, arc.tail}, {root, arc.head}) - need
            delta = min(delta, slack)
            if delta <= 0:
                return max(delta, Fraction(0))
    return max(delta, Fraction(0))


def fully_reduce(inst: Instance, sol: BcrSolution) -> BcrSolution:
    """Lower every arc value to the least amount feasibility still needs.

    Scans (root, arc) entries in sorted order, applying each entry's largest
    safe decrease against the current values, and repeats until a full pass
    changes nothing.
    """
    out = sol.copy()
    changed = True
    passes = 0
    while changed:
        changed = False
        passes += 1
        if passes > len(out.x) + 2:
            raise SolverError("reduction failed to reach a fixed point")
        for root in sorted({r for (r, _a) in out.x}):
            net = _root_network(out, root)
            for arc in sorted(a for (r, a) in out.x if r == root):
                key = (root, arc)
                if key not in out.x:
                    continue
                delta = reduction_delta(inst, out, root, arc, net=net)
                if delta > 0:
                    left = out.x[key] - delta
                    if left == 0:
                        del out.x[key]
                    else:
                        out.x[key] = left
                    changed = True
                    net = _root_network(out, root)
    return out


def audit_fully_reduced(
    inst: Instance, sol: BcrSolution
) -> list[tuple[VertexId, Arc, Fraction]]:
    """Arc entries that could still be lowered; empty means fully reduced."""
    found = []
    for root in sorted({r for (r, _a) in sol.x}):
        net = _root_network(sol, root)
        for arc in sorted(a for (r, a) in sol.x if r == root):
            delta = reduction_delta(inst, sol, root, arc, net=net)
            if delta > 0:
                found.append((root, arc, delta))
    return found
