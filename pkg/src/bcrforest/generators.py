"""Instance and solution generators: certified families and a random corpus.

Four constructions:

* :func:`gen_lower_bound` — the 3q-vertex family whose fractional optimum
  (cost 2q) sits a factor (3q-1)/2q below the forced spanning tree, showing
  the relaxation's gap approaches 3/2.
* :func:`gen_gadget` — a 19-vertex unit-cost instance whose demand can be
  written with two different pair lists describing the same components; the
  two write-ups have different fractional optima (12 versus 13), each
  certified here by an explicit dual.
* :func:`gen_figure1` — the small worked example used across the rounding
  pipeline's tests.
* :func:`gen_random_halfintegral` — seeded random instances with feasible
  half-integral solutions built by averaging two integral tree solutions.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import GenerationFailed
from .model import Arc, Instance, VertexId, demand_graph, make_instance
from .solution import BcrSolution, DualCertificate, YEntry

HALF = Fraction(1, 2)


# --- gap family ------------------------------------------------------------


def gen_lower_bound(q: int) -> tuple[Instance, BcrSolution]:
    """Three-layer family s_i - v_j - t_i with pairs {s_i,t_i} and {v_i,v_i+1}.

    All 2q^2 edges are unit cost.  The returned fractional solution routes
    1/q through every middle vertex for each t_i and costs 2q, while any
    feasible edge set must span all 3q vertices and cost 3q-1.
    """
    if q < 1:
        raise ValueError("q must be positive")
    s = [f"s{i}" for i in range(1, q + 1)]
    v = [f"v{i}" for i in range(1, q + 1)]
    t = [f"t{i}" for i in range(1, q + 1)]
    edges = [(si, vj, 1) for si in s for vj in v]
    edges += [(vi, tj, 1) for vi in v for tj in t]
    pairs = [(s[i], t[i]) for i in range(q)]
    pairs += [(v[i], v[i + 1]) for i in range(q - 1)]
    inst = make_instance(s + v + t, edges, pairs)
    share = Fraction(1, q)
    x = {}
    for i in range(q):
        for j in range(q):
            x[(t[i], Arc(s[i], v[j]))] = share
            x[(t[i], Arc(v[j], t[i]))] = share
    z = {}
    for i in range(q):
        z[(t[i], i)] = Fraction(1)
    for i in range(q - 1):
        for j in range(q):
            z[(t[j], q + i)] = share
    return inst, BcrSolution.from_sparse(x, z)


# --- worked example --------------------------------------------------------


def gen_figure1() -> tuple[Instance, BcrSolution]:
    """Eight-vertex worked example: three pairs, two interior vertices.

    Unit costs; the half-integral solution covers the c-pair from c2 through
    both interior vertices, the b-pair from both its endpoints, and splits
    the a-pair between those roots.  Cost 5.
    """
    verts = ["a1", "a2", "b1", "b2", "c1", "c2", "s1", "s2"]
    edges = [
        (u, v, 1)
        for (u, v) in [
            ("a1", "s1"), ("c1", "s1"), ("s1", "c2"),
            ("c1", "s2"), ("s2", "c2"), ("a2", "s2"),
            ("b1", "b2"), ("a1", "b1"), ("a2", "b2"),
        ]
    ]
    pairs = [("a1", "a2"), ("b1", "b2"), ("c1", "c2")]
    inst = make_instance(verts, edges, pairs)
    x: dict[tuple[VertexId, Arc], Fraction] = {}
    for (tail, head) in [
        ("a1", "s1"), ("c1", "s1"), ("s1", "c2"),
        ("c1", "s2"), ("s2", "c2"), ("a2", "s2"),
    ]:
        x[("c2", Arc(tail, head))] = HALF
    x[("b1", Arc("b2", "b1"))] = HALF
    for (tail, head) in [("a1", "b1"), ("b1", "b2"), ("a2", "b2")]:
        x[("b2", Arc(tail, head))] = HALF
    z = {
        ("c2", 2): Fraction(1),
        ("b1", 1): HALF,
        ("b2", 1): HALF,
        ("c2", 0): HALF,
        ("b2", 0): HALF,
    }
    return inst, BcrSolution.from_sparse(x, z)


# --- two-representation gadget --------------------------------------------

_GADGET_VERTICES = [
    "a1", "a2", "a3",
    "b1", "b2", "c1", "c2", "d1", "d2", "e1", "e2",
    "s1", "s2", "s3", "s4", "s5", "s6", "s7", "s8",
]

_GADGET_EDGES = [
    ("a1", "s1"), ("a1", "s2"),
    ("s1", "b1"), ("s1", "b2"), ("s2", "c1"), ("s2", "c2"),
    ("s3", "b1"), ("s3", "b2"), ("s4", "c1"), ("s4", "c2"),
    ("a2", "s3"), ("a2", "s4"), ("a2", "s5"), ("a2", "s6"),
    ("s5", "d1"), ("s5", "d2"), ("s6", "e1"), ("s6", "e2"),
    ("s7", "d1"), ("s7", "d2"), ("s8", "e1"), ("s8", "e2"),
    ("a3", "s7"), ("a3", "s8"),
]

# Mirror-symmetric halves around the a2 row, and the interior vertices
# serving each outer pair.
_TOP_HALF = ("b1", "b2", "c1", "c2", "s1", "s2", "s3", "s4")
_BOTTOM_HALF = ("d1", "d2", "e1", "e2", "s5", "s6", "s7", "s8")
_GROUP_INTERIOR = {
    "b": ("s1", "s3"),
    "c": ("s2", "s4"),
    "d": ("s5", "s7"),
    "e": ("s6", "s8"),
}
_S_BOTTOM = frozenset(("a2", "a3") + _BOTTOM_HALF)
_S_LOW = frozenset(("a3",) + _BOTTOM_HALF)
_S_TOP_A = frozenset(("a1", "a2") + _TOP_HALF)
_S_TOP_B = frozenset(("a1",) + _TOP_HALF)


def _gadget_instance(rep: str) -> Instance:
    if rep == "p1":
        a_pairs = [("a1", "a2"), ("a2", "a3")]
    elif rep == "p2":
        a_pairs = [("a1", "a2"), ("a1", "a3")]
    else:
        raise ValueError(f"representation must be 'p1' or 'p2', got {rep!r}")
    pairs = a_pairs + [("b1", "b2"), ("c1", "c2"), ("d1", "d2"), ("e1", "e2")]
    edges = [(u, v, 1) for (u, v) in _GADGET_EDGES]
    return make_instance(_GADGET_VERTICES, edges, pairs)


def _arcs_half(x: dict, root: VertexId, chain: list[tuple[str, str]]) -> None:
    for (tail, head) in chain:
        x[(root, Arc(tail, head))] = HALF


def _gadget_primal_p1() -> BcrSolution:
    x: dict[tuple[VertexId, Arc], Fraction] = {}
    _arcs_half(x, "b1", [("a1", "s1"), ("b2", "s1"), ("s1", "b1"),
                         ("s3", "b1"), ("b2", "s3"), ("a2", "s3")])
    _arcs_half(x, "c2", [("a1", "s2"), ("c1", "s2"), ("s2", "c2"),
                         ("c1", "s4"), ("s4", "c2"), ("a2", "s4")])
    _arcs_half(x, "d1", [("a2", "s5"), ("d2", "s5"), ("s5", "d1"),
                         ("s7", "d1"), ("d2", "s7"), ("a3", "s7")])
    _arcs_half(x, "e2", [("a2", "s6"), ("e1", "s6"), ("s6", "e2"),
                         ("e1", "s8"), ("s8", "e2"), ("a3", "s8")])
    z = {
        ("b1", 2): Fraction(1), ("c2", 3): Fraction(1),
        ("d1", 4): Fraction(1), ("e2", 5): Fraction(1),
        ("b1", 0): HALF, ("c2", 0): HALF,
        ("d1", 1): HALF, ("e2", 1): HALF,
    }
    return BcrSolution.from_sparse(x, z)


def _gadget_primal_p2() -> BcrSolution:
    x: dict[tuple[VertexId, Arc], Fraction] = {}
    _arcs_half(x, "b1", [("b2", "s1"), ("s1", "b1")])
    _arcs_half(x, "c2", [("c1", "s2"), ("s2", "c2")])
    _arcs_half(x, "d1", [("a1", "s1"), ("s1", "b2"), ("b2", "s3"), ("s3", "a2"),
                         ("b1", "s3"),
                         ("a2", "s5"), ("d2", "s5"), ("s5", "d1"),
                         ("s7", "d1"), ("d2", "s7"), ("a3", "s7")])
    _arcs_half(x, "e2", [("a1", "s2"), ("s2", "c1"), ("c1", "s4"), ("s4", "a2"),
                         ("c2", "s4"),
                         ("a2", "s6"), ("e1", "s6"), ("s6", "e2"),
                         ("e1", "s8"), ("s8", "e2"), ("a3", "s8")])
    z = {
        ("b1", 2): HALF, ("d1", 2): HALF,
        ("c2", 3): HALF, ("e2", 3): HALF,
        ("d1", 0): HALF, ("e2", 0): HALF,
        ("d1", 1): HALF, ("e2", 1): HALF,
        ("d1", 4): Fraction(1), ("e2", 5): Fraction(1),
    }
    return BcrSolution.from_sparse(x, z)


def _outer_group_entries(pairs: list[tuple[str, str]]) -> list[YEntry]:
    """Two unit cut sets per root for each outer pair {g1,g2}.

    A root inside the pair uses its mate alone and the mate together with the
    pair's two interior vertices; all other roots use the two singletons.
    """
    entries = []
    all_vertices = _GADGET_VERTICES
    for index, (g1, g2) in enumerate(pairs):
        group = g1[0]
        if group == "a":
            continue
        interior = _GROUP_INTERIOR[group]
        for root in all_vertices:
            if root == g1:
                sets = [frozenset((g2,)), frozenset((g2,) + interior)]
            elif root == g2:
                sets = [frozenset((g1,)), frozenset((g1,) + interior)]
            else:
                sets = [frozenset((g1,)), frozenset((g2,))]
            for cut in sets:
                entries.append(YEntry(root, index, cut, Fraction(1)))
    return entries


def _gadget_dual_p1(inst: Instance) -> DualCertificate:
    everything = frozenset(_GADGET_VERTICES)
    entries = _outer_group_entries(list(inst.pairs))
    # Pair {a1,a2} has index 0 and pair {a2,a3} index 1.
    for root in _GADGET_VERTICES:
        if root == "a1":
            p12 = [everything - {"a1"}, _S_BOTTOM]
            p23 = [frozenset(("a3",)), _S_LOW]
        elif root == "a2":
            p12 = [frozenset(("a1",)), _S_TOP_B]
            p23 = [frozenset(("a3",)), _S_LOW]
        elif root == "a3":
            p12 = [frozenset(("a1",)), _S_TOP_B]
            p23 = [everything - {"a3"}, _S_TOP_A]
        elif root in _TOP_HALF:
            p12 = [frozenset(("a1",)), _S_BOTTOM]
            p23 = [frozenset(("a3",)), _S_LOW]
        else:
            p12 = [frozenset(("a1",)), _S_TOP_B]
            p23 = [frozenset(("a3",)), _S_TOP_A]
        for cut in p12:
            entries.append(YEntry(root, 0, cut, Fraction(1)))
        for cut in p23:
            entries.append(YEntry(root, 1, cut, Fraction(1)))
    alpha = tuple(Fraction(2) for _ in inst.pairs)
    return DualCertificate(alpha, tuple(entries))


def _gadget_dual_p2(inst: Instance) -> DualCertificate:
    everything = frozenset(_GADGET_VERTICES)
    entries = _outer_group_entries(list(inst.pairs))
    # Pair {a1,a3} has index 1 and carries value 5; pair {a1,a2} carries 0.
    for root in _GADGET_VERTICES:
        if root == "a1":
            sets = [everything - {"a1"}, _S_BOTTOM,
                    frozenset(("a3", "s7", "s8")), frozenset(("a3",)), _S_LOW]
        elif root == "a2":
            sets = [frozenset(("a1",)), _S_TOP_B, frozenset(("a3",)),
                    frozenset(("a3", "s7", "s8")), _S_LOW]
        elif root == "a3":
            sets = [everything - {"a3"}, _S_TOP_A,
                    frozenset(("a1", "s1", "s2")), frozenset(("a1",)), _S_TOP_B]
        elif root in _TOP_HALF:
            sets = [frozenset(("a1",)), _S_BOTTOM,
                    frozenset(("a3", "s7", "s8")), frozenset(("a3",)), _S_LOW]
        else:
            sets = [frozenset(("a3",)), _S_TOP_A,
                    frozenset(("a1", "s1", "s2")), frozenset(("a1",)), _S_TOP_B]
        for cut in sets:
            entries.append(YEntry(root, 1, cut, Fraction(1)))
    alpha = [Fraction(2) for _ in inst.pairs]
    alpha[0] = Fraction(0)
    alpha[1] = Fraction(5)
    return DualCertificate(tuple(alpha), tuple(entries))


def gen_gadget(rep: str) -> tuple[Instance, BcrSolution, DualCertificate]:
    """The 19-vertex instance under one of its two demand write-ups.

    Both write-ups ('p1' and 'p2') describe the same demand components, but
    their fractional optima differ: 12 and 13, each certified by the returned
    dual.
    """
    inst = _gadget_instance(rep)
    if rep == "p1":
        return inst, _gadget_primal_p1(), _gadget_dual_p1(inst)
    return inst, _gadget_primal_p2(), _gadget_dual_p2(inst)


# --- random corpus ---------------------------------------------------------


def integral_tree_solution(inst: Instance, rng: random.Random) -> BcrSolution:
    """Integral feasible solution from one random spanning tree.

    Each nontrivial demand component picks a random terminal as root, keeps
    the minimal subtree spanning its terminals, orients it toward the root,
    and sets the root's arcs to one with full coverage of the component's
    pairs.
    """
    keys = sorted(inst.edges)
    rng.shuffle(keys)
    parent = {v: v for v in inst.vertices}

    def find(v: VertexId) -> VertexId:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    adjacency: dict[VertexId, list[VertexId]] = {v: [] for v in inst.vertices}
    for (u, v) in keys:
        if find(u) != find(v):
            parent[find(u)] = find(v)
            adjacency[u].append(v)
            adjacency[v].append(u)

    dg = demand_graph(inst)
    x: dict[tuple[VertexId, Arc], Fraction] = {}
    z: dict[tuple[VertexId, int], Fraction] = {}
    for component in dg.nontrivial():
        members = set(component)
        pair_indices = [
            i for i, (s, t) in enumerate(inst.pairs) if s in members
        ]
        root = rng.choice(sorted(members))
        up: dict[VertexId, VertexId] = {}
        order = [root]
        seen = {root}
        i = 0
        while i < len(order):
            current = order[i]
            i += 1
            for other in sorted(adjacency[current]):
                if other not in seen:
                    seen.add(other)
                    up[other] = current
                    order.append(other)
        used: set[VertexId] = set()
        for terminal in members:
            node = terminal
            while node != root and node not in used:
                used.add(node)
                node = up[node]
        for node in used:
            x[(root, Arc(node, up[node]))] = Fraction(1)
        for index in pair_indices:
            z[(root, index)] = Fraction(1)
    return BcrSolution.from_sparse(x, z)


def _average(a: BcrSolution, b: BcrSolution) -> BcrSolution:
    x: dict[tuple[VertexId, Arc], Fraction] = {}
    for source in (a.x, b.x):
        for key, value in source.items():
            x[key] = x.get(key, Fraction(0)) + value * HALF
    z: dict[tuple[VertexId, int], Fraction] = {}
    for source in (a.z, b.z):
        for key, value in source.items():
            z[key] = z.get(key, Fraction(0)) + value * HALF
    return BcrSolution.from_sparse(x, z)


def gen_random_halfintegral(
    seed: int,
    n: int,
    edge_density: int,
    pair_count: int,
    single_component: bool = False,
) -> tuple[Instance, BcrSolution]:
    """Seeded random connected instance with a feasible half-integral solution.

    The graph is a random spanning tree plus ``edge_density`` extra edges,
    integer costs 1..10.  The solution averages two independent integral tree
    solutions, so it is feasible and half-integral by construction.  With
    ``single_component`` the pairs chain random terminals into one demand
    component.
    """
    if n < 4:
        raise ValueError("need at least four vertices")
    if pair_count < 1:
        raise ValueError("need at least one pair")
    rng = random.Random(seed)
    vertices = [f"u{i}" for i in range(n)]
    present: set[tuple[str, str]] = set()
    edges: list[tuple[str, str, int]] = []
    for i in range(1, n):
        j = rng.randrange(i)
        key = tuple(sorted((vertices[i], vertices[j])))
        present.add(key)
        edges.append((key[0], key[1], rng.randint(1, 10)))
    attempts = 0
    added = 0
    while added < edge_density:
        attempts += 1
        if attempts > 50 * (edge_density + 1):
            raise GenerationFailed("could not place the requested extra edges")
        u, v = rng.sample(vertices, 2)
        key = tuple(sorted((u, v)))
        if key in present:
            continue
        present.add(key)
        edges.append((key[0], key[1], rng.randint(1, 10)))
        added += 1
    pairs: list[tuple[str, str]] = []
    if single_component:
        terminals = rng.sample(vertices, min(pair_count + 1, n))
        for i in range(len(terminals) - 1):
            pairs.append((terminals[i], terminals[i + 1]))
        while len(pairs) < pair_count:
            s, t = rng.sample(terminals, 2)
            pairs.append((s, t))
    else:
        while len(pairs) < pair_count:
            s, t = rng.sample(vertices, 2)
            pairs.append((s, t))
    inst = make_instance(vertices, edges, pairs)
    first = integral_tree_solution(inst, rng)
    second = integral_tree_solution(inst, rng)
    return inst, _average(first, second)
