"""Exact densest-subgraph search and projection-multigraph diagnostics.

The density of a vertex set W (at least two vertices) under a solution's arc
values is the mass induced inside W divided by |W| - 1.  A globally maximum
set is found exactly by anchoring two vertices that must belong to the set
and running a discrete-Newton iteration: at a threshold density, deciding
whether some anchored superset beats the threshold reduces to one min cut in
a selection gadget, and each improvement raises the threshold to an achieved
density, so the loop ends after finitely many exact steps.  Anchors range
over the support edges, because a minimum-cardinality maximizer carries
positive mass on some inside edge.

The projection multigraph of a half-integral solution gives each edge an
integer multiplicity (twice the summed mass in both directions over all
roots); degree counts against it classify vertices as nonsupport, low-degree
(one or two incident edge copies) or high-degree (three or more).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import NoSupport, NotHalfIntegral, TooLarge, TooSmall
from .flows import FlowNetwork, max_flow
from .model import EdgeKey, Instance, VertexId, edge_key
from .solution import BcrSolution

NONSUPPORT = "nonsupport"
LOW_DEGREE = "low_degree"
HIGH_DEGREE = "high_degree"


@dataclass(frozen=True)
class DensityResult:
    """A maximum-density vertex set with its density and certifying anchor."""

    W: frozenset[VertexId]
    density: Fraction
    anchor: tuple[VertexId, VertexId] | None


def edge_mass(sol: BcrSolution) -> dict[EdgeKey, Fraction]:
    """Per-edge mass: all roots, both directions, positive entries only."""
    out: dict[EdgeKey, Fraction] = {}
    for (_root, arc), value in sol.x.items():
        if value > 0:
            key = edge_key(arc.tail, arc.head)
            out[key] = out.get(key, Fraction(0)) + value
    return {k: v for k, v in out.items() if v > 0}


def density_of(sol: BcrSolution, W: frozenset[VertexId] | set[VertexId]) -> Fraction:
    """Induced mass of W divided by |W| - 1."""
    if len(W) < 2:
        raise TooSmall("density needs at least two vertices")
    inside = Fraction(0)
    for (u, v), mass in edge_mass(sol).items():
        if u in W and v in W:
            inside += mass
    return inside / (len(W) - 1)


def _mincut_best_superset(
    mass: dict[EdgeKey, Fraction],
    support: list[VertexId],
    u: VertexId,
    v: VertexId,
    gamma: Fraction,
) -> tuple[Fraction, frozenset[VertexId]]:
    """Minimize gamma*(|U|-1) - mass(E[U]) over U containing u and v.

    Selection gadget: the source feeds every edge object with its mass; an
    edge object escapes into the sink side unless both endpoints are kept
    with it, endpoints other than the anchors paying gamma to the sink.  The
    minimum cut therefore keeps exactly the mass-profitable vertex sets, and
    the residual-reachable side is the smallest minimizer.
    """
    total = sum(mass.values(), Fraction(0))
    infinite = total + gamma * len(support) + 1
    net = FlowNetwork()
    for (a, b), m in mass.items():
        enode = ("e", a, b)
        net.add_arc(("s",), enode, m)
        for endpoint in (a, b):
            if endpoint not in (u, v):
                net.add_arc(enode, ("v", endpoint), infinite)
    for p in support:
        if p not in (u, v):
            net.add_arc(("v", p), ("t",), gamma)
    result = max_flow(net, [("s",)], [("t",)])
    chosen = {u, v}
    for node in result.min_cut_side:
        if isinstance(node, tuple) and node[0] == "v":
            chosen.add(node[1])
    h = gamma * (len(chosen) - 1) - sum(
        m for (a, b), m in mass.items() if a in chosen and b in chosen
    )
    return h, frozenset(chosen)


def densest_subgraph(sol: BcrSolution, inst: Instance | None = None) -> DensityResult:
    """Globally maximum-density vertex set, exactly.

    Starts from the full support set and, for every support edge taken as an
    anchor, repeatedly asks the selection gadget whether some anchored set
    beats the current best density; every yes replaces the best by the
    witness set's exact density.  When no anchor can improve, the best is a
    global maximum.
    """
    del inst
    mass = edge_mass(sol)
    if not mass:
        raise NoSupport("solution has no positive arc values")
    support = sorted({p for key in mass for p in key})
    best_set = frozenset(support)
    best = (
        sum(mass.values(), Fraction(0)) / (len(support) - 1)
        if len(support) > 1
        else Fraction(0)
    )
    best_anchor = min(mass)
    for (u, v) in sorted(mass):
        while True:
            h, chosen = _mincut_best_superset(mass, support, u, v, best)
            if h >= 0:
                break
            best_set = chosen
            best = density_of(sol, chosen)
            best_anchor = (u, v)
    return DensityResult(best_set, best, best_anchor)


def densest_subgraph_bruteforce(
    sol: BcrSolution, inst: Instance | None = None
) -> DensityResult:
    """Exhaustive maximum over all support subsets of size at least two.

    Ties prefer fewer vertices, then the lexicographically smallest sorted
    label tuple.  Guarded to small supports.
    """
    del inst
    mass = edge_mass(sol)
    if not mass:
        raise NoSupport("solution has no positive arc values")
    support = sorted({p for key in mass for p in key})
    if len(support) > 16:
        raise TooLarge(f"brute force limited to 16 support vertices, got {len(support)}")
    best_density: Fraction | None = None
    best_set: frozenset[VertexId] = frozenset()
    # Sizes ascend and combinations are lexicographic, so strict improvement
    # keeps the smallest, lexicographically first maximizer.
    for size in range(2, len(support) + 1):
        for subset in combinations(support, size):
            w = set(subset)
            inside = sum(m for (a, b), m in mass.items() if a in w and b in w)
            density = Fraction(inside) / (size - 1)
            if best_density is None or density > best_density:
                best_density = density
                best_set = frozenset(subset)
    assert best_density is not None
    return DensityResult(best_set, best_density, None)


@dataclass(frozen=True)
class ProjectionMultigraph:
    """Integer edge multiplicities of a half-integral solution's mass."""

    multiplicities: dict[EdgeKey, int]
    degrees: dict[VertexId, int]

    def support_vertices(self) -> list[VertexId]:
        return sorted(v for v, d in self.degrees.items() if d >= 1)


def projection_multigraph(
    sol: BcrSolution, inst: Instance | None = None
) -> ProjectionMultigraph:
    """Edge multiplicities 2 * (mass in both directions), integer-checked.

    With an instance given, the degree map covers all its vertices so
    isolated ones classify as nonsupport; otherwise only arc endpoints
    appear.
    """
    multiplicities: dict[EdgeKey, int] = {}
    for key, mass in edge_mass(sol).items():
        doubled = 2 * mass
        if doubled.denominator != 1:
            raise NotHalfIntegral(f"edge {key} carries non-half-integral mass {mass}")
        multiplicities[key] = int(doubled)
    degrees: dict[VertexId, int] = {}
    if inst is not None:
        degrees = {v: 0 for v in inst.vertices}
    for (a, b), count in multiplicities.items():
        degrees[a] = degrees.get(a, 0) + count
        degrees[b] = degrees.get(b, 0) + count
    return ProjectionMultigraph(multiplicities, degrees)


def classify_vertices(pm: ProjectionMultigraph) -> dict[VertexId, str]:
    """Nonsupport (degree 0), low (1 or 2) or high (3 and up) per vertex."""
    out = {}
    for vertex, degree in pm.degrees.items():
        if degree == 0:
            out[vertex] = NONSUPPORT
        elif degree >= 3:
            out[vertex] = HIGH_DEGREE
        else:
            out[vertex] = LOW_DEGREE
    return out


def structure_violations(pm: ProjectionMultigraph) -> list[tuple[VertexId, str]]:
    """Support vertices breaking the structure law; empty means compliant.

    The law for well-structured fully-reduced half-integral solutions: every
    support vertex has degree at least two, and has an incident parallel
    edge, or is high-degree, or neighbours a high-degree vertex.
    """
    classes = classify_vertices(pm)
    neighbors: dict[VertexId, set[VertexId]] = {}
    parallel: dict[VertexId, bool] = {}
    for (a, b), count in pm.multiplicities.items():
        neighbors.setdefault(a, set()).add(b)
        neighbors.setdefault(b, set()).add(a)
        if count >= 2:
            parallel[a] = True
            parallel[b] = True
    violations = []
    for v in pm.support_vertices():
        if pm.degrees[v] < 2:
            violations.append((v, "degree below two"))
            continue
        if parallel.get(v, False):
            continue
        if classes[v] == HIGH_DEGREE:
            continue
        if any(classes[w] == HIGH_DEGREE for w in neighbors.get(v, ())):
            continue
        violations.append((v, "no parallel edge and no high-degree vertex nearby"))
    return violations
