"""Problem instances: an undirected graph with edge costs and demand pairs.

Vertices are plain string labels.  Edges are stored undirected under a sorted
endpoint key and collapse to the minimum cost when given twice.  Demand pairs
are kept as an ordered tuple; pair identity throughout the package is the index
into that tuple, so duplicate pairs remain distinct objects.

Text form::

    # comment
    vertices a b c
    edge a b 3/2
    pair a c
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import FormatError, InstanceError
from .rationals import format_rational, parse_rational

VertexId = str


class Arc(NamedTuple):
    """A directed copy of an undirected edge."""

    tail: VertexId
    head: VertexId

    def reversed(self) -> "Arc":
        return Arc(self.head, self.tail)


EdgeKey = tuple[VertexId, VertexId]
Pair = tuple[VertexId, VertexId]


def edge_key(u: VertexId, v: VertexId) -> EdgeKey:
    """Canonical undirected key: endpoints in sorted order."""
    if u == v:
        raise InstanceError(f"self-loop edge at {u!r}")
    return (u, v) if u < v else (v, u)


@dataclass
class Instance:
    """An instance: vertices, undirected edge costs, ordered demand pairs."""

    vertices: tuple[VertexId, ...]
    edges: dict[EdgeKey, Fraction]
    pairs: tuple[Pair, ...]
    vertex_set: frozenset[VertexId] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.vertex_set = frozenset(self.vertices)

    def cost(self, u: VertexId, v: VertexId) -> Fraction:
        return self.edges[edge_key(u, v)]

    def has_edge(self, u: VertexId, v: VertexId) -> bool:
        return edge_key(u, v) in self.edges

    def arcs(self) -> list[Arc]:
        """Both orientations of every edge, deterministically ordered."""
        out = []
        for (u, v) in sorted(self.edges):
            out.append(Arc(u, v))
            out.append(Arc(v, u))
        return out

    def neighbors(self) -> dict[VertexId, list[VertexId]]:
        """Adjacency lists in sorted order."""
        adj: dict[VertexId, list[VertexId]] = {v: [] for v in self.vertices}
        for (u, v) in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for v in adj:
            adj[v].sort()
        return adj


def make_instance(
    vertices: Iterable[VertexId],
    edges: Iterable[tuple[VertexId, VertexId, Fraction | int]],
    pairs: Iterable[tuple[VertexId, VertexId]],
) -> Instance:
    """Validate and build an instance; parallel edges collapse to min cost."""
    vseq: list[VertexId] = []
    seen: set[VertexId] = set()
    for v in vertices:
        if v in seen:
            raise InstanceError(f"duplicate vertex {v!r}")
        seen.add(v)
        vseq.append(v)
    emap: dict[EdgeKey, Fraction] = {}
    for (u, v, c) in edges:
        if u not in seen or v not in seen:
            raise InstanceError(f"edge {u!r}-{v!r} uses an undeclared vertex")
        cost = Fraction(c)
        if cost <= 0:
            raise InstanceError(f"edge {u!r}-{v!r} has nonpositive cost {cost}")
        key = edge_key(u, v)
        if key in emap:
            emap[key] = min(emap[key], cost)
        else:
            emap[key] = cost
    pseq: list[Pair] = []
    for (s, t) in pairs:
        if s not in seen or t not in seen:
            raise InstanceError(f"pair {s!r}-{t!r} uses an undeclared vertex")
        if s == t:
            raise InstanceError(f"pair {s!r}-{t!r} is degenerate")
        pseq.append((s, t))
    return Instance(tuple(vseq), emap, tuple(pseq))


def terminals(inst: Instance) -> frozenset[VertexId]:
    """All pair endpoints."""
    out: set[VertexId] = set()
    for (s, t) in inst.pairs:
        out.add(s)
        out.add(t)
    return frozenset(out)


@dataclass(frozen=True)
class DemandGraph:
    """Connected components of the graph with one edge per demand pair.

    ``components`` covers every vertex of the instance; singleton components
    are the vertices not named by any pair.  ``pair_component[i]`` is the index
    into ``components`` of the component containing pair i.
    """

    components: tuple[frozenset[VertexId], ...]
    pair_component: tuple[int, ...]

    def nontrivial(self) -> tuple[frozenset[VertexId], ...]:
        return tuple(c for c in self.components if len(c) > 1)


def demand_graph(inst: Instance) -> DemandGraph:
    """Group vertices by the demand pairs (union-find over pair endpoints)."""
    parent: dict[VertexId, VertexId] = {v: v for v in inst.vertices}

    def find(v: VertexId) -> VertexId:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for (s, t) in inst.pairs:
        rs, rt = find(s), find(t)
        if rs != rt:
            parent[rs] = rt
    groups: dict[VertexId, set[VertexId]] = {}
    for v in inst.vertices:
        groups.setdefault(find(v), set()).add(v)
    components = tuple(sorted((frozenset(g) for g in groups.values()), key=lambda c: min(c)))
    lookup: dict[VertexId, int] = {}
    for i, comp in enumerate(components):
        for v in comp:
            lookup[v] = i
    pair_component = tuple(lookup[s] for (s, _t) in inst.pairs)
    return DemandGraph(components, pair_component)


def same_representation(a: Instance, b: Instance) -> bool:
    """Same graph, same costs, and the same partition into demand components.

    Two pair sets represent the same connectivity requirement exactly when
    they induce the same nontrivial demand components.
    """
    if set(a.vertices) != set(b.vertices) or a.edges != b.edges:
        return False
    comp_a = set(demand_graph(a).nontrivial())
    comp_b = set(demand_graph(b).nontrivial())
    return comp_a == comp_b


def shortest_paths(inst: Instance, source: VertexId) -> tuple[dict[VertexId, Fraction], dict[VertexId, VertexId]]:
    """Dijkstra from source: exact distances and a deterministic predecessor map."""
    adj = inst.neighbors()
    dist: dict[VertexId, Fraction] = {source: Fraction(0)}
    pred: dict[VertexId, VertexId] = {}
    done: set[VertexId] = set()
    heap: list[tuple[Fraction, VertexId]] = [(Fraction(0), source)]
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        for w in adj[v]:
            nd = d + inst.cost(v, w)
            if w not in dist or nd < dist[w]:
                dist[w] = nd
                pred[w] = v
                heapq.heappush(heap, (nd, w))
    return dist, pred


def metric_closure(inst: Instance) -> tuple[Instance, dict[EdgeKey, tuple[EdgeKey, ...]]]:
    """Complete graph under shortest-path costs, with witness paths.

    Returns the closure instance (same vertices and pairs) and, for every
    closure edge, the edge sequence of one shortest path in the input graph.
    Requires a connected input.
    """
    witness: dict[EdgeKey, tuple[EdgeKey, ...]] = {}
    closure_edges: dict[EdgeKey, Fraction] = {}
    order = sorted(inst.vertices)
    for source in order:
        dist, pred = shortest_paths(inst, source)
        if len(dist) != len(inst.vertices):
            raise InstanceError("metric closure requires a connected graph")
        for target in order:
            if target <= source:
                continue
            key = edge_key(source, target)
            closure_edges[key] = dist[target]
            path: list[EdgeKey] = []
            v = target
            while v != source:
                path.append(edge_key(pred[v], v))
                v = pred[v]
            witness[key] = tuple(reversed(path))
    closed = Instance(inst.vertices, closure_edges, inst.pairs)
    return closed, witness


def parse_instance(text: str) -> Instance:
    """Parse the instance text form."""
    vertices: list[VertexId] = []
    edges: list[tuple[VertexId, VertexId, Fraction]] = []
    pairs: list[tuple[VertexId, VertexId]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "vertices":
            vertices.extend(tokens[1:])
        elif kind == "edge":
            if len(tokens) != 4:
                raise FormatError(f"line {lineno}: edge needs two endpoints and a cost")
            edges.append((tokens[1], tokens[2], parse_rational(tokens[3])))
        elif kind == "pair":
            if len(tokens) != 3:
                raise FormatError(f"line {lineno}: pair needs two endpoints")
            pairs.append((tokens[1], tokens[2]))
        else:
            raise FormatError(f"line {lineno}: unknown directive {kind!r}")
    return make_instance(vertices, edges, pairs)


def format_instance(inst: Instance) -> str:
    """Canonical instance text: vertices, sorted edges, pairs in index order."""
    lines = ["vertices " + " ".join(inst.vertices)]
    for (u, v) in sorted(inst.edges):
        lines.append(f"edge {u} {v} {format_rational(inst.edges[(u, v)])}")
    for (s, t) in inst.pairs:
        lines.append(f"pair {s} {t}")
    return "\n".join(lines) + "\n"
