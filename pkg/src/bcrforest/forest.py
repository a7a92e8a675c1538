"""Integral forests: feasibility checking, pruning, and exact small optima.

A forest here is just a set of instance edges; it is feasible when every
demand pair is connected by them.  Pruning removes redundant edges greedily
from the most expensive down.  The exhaustive optimum exists for desk-scale
instances as a testing oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import FormatError, InstanceError, TooLarge, UnknownEdge
from .model import EdgeKey, Instance, VertexId, edge_key
from .solution import Verdict


@dataclass(frozen=True)
class UnconnectedPair:
    """Witness: the edge set leaves this demand pair in separate components."""

    pair_index: int
    s: VertexId
    t: VertexId

    def __str__(self) -> str:
        return f"pair {self.pair_index}: no path between {self.s} and {self.t}"


class _UnionFind:
    def __init__(self, items: Iterable[VertexId]) -> None:
        self.parent = {v: v for v in items}

    def find(self, v: VertexId) -> VertexId:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def union(self, a: VertexId, b: VertexId) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _validate_edges(edges: Iterable[EdgeKey], inst: Instance) -> list[EdgeKey]:
    out = []
    for key in edges:
        key = edge_key(*key)
        if key not in inst.edges:
            raise UnknownEdge(f"edge set uses missing edge {key}")
        out.append(key)
    return out


def check_forest(edges: Iterable[EdgeKey], inst: Instance) -> Verdict:
    """Feasible when every demand pair is connected by the edge set."""
    uf = _UnionFind(inst.vertices)
    for (u, v) in _validate_edges(edges, inst):
        uf.union(u, v)
    for i, (s, t) in enumerate(inst.pairs):
        if uf.find(s) != uf.find(t):
            return Verdict(False, UnconnectedPair(i, s, t))
    return Verdict(True)


def forest_cost(edges: Iterable[EdgeKey], inst: Instance) -> Fraction:
    total = Fraction(0)
    for key in _validate_edges(set(edges), inst):
        total += inst.edges[key]
    return total


def prune(edges: Iterable[EdgeKey], inst: Instance) -> frozenset[EdgeKey]:
    """Drop edges whose removal keeps all pairs connected, priciest first.

    Ties between equal-cost edges resolve by reversed label order, making the
    outcome deterministic.
    """
    kept = set(_validate_edges(set(edges), inst))
    order = sorted(kept, key=lambda k: (inst.edges[k], k), reverse=True)
    for key in order:
        if check_forest(kept - {key}, inst).feasible:
            kept.discard(key)
    return frozenset(kept)


def brute_force_opt(inst: Instance, edge_cap: int = 20) -> tuple[Fraction, frozenset[EdgeKey]]:
    """Cheapest feasible edge set by exhaustive branch and bound.

    Branches on edges in label order, skipping any branch whose partial cost
    already meets the best found, so the first minimum in lexicographic
    branch order wins ties.  Guarded to at most ``edge_cap`` edges.
    """
    keys = sorted(inst.edges)
    if len(keys) > edge_cap:
        raise TooLarge(f"exhaustive search limited to {edge_cap} edges, got {len(keys)}")
    if check_forest((), inst).feasible:
        return Fraction(0), frozenset()
    best_cost: Fraction | None = None
    best_set: frozenset[EdgeKey] = frozenset()
    chosen: list[EdgeKey] = []

    def recurse(index: int, cost_so_far: Fraction) -> None:
        nonlocal best_cost, best_set
        if best_cost is not None and cost_so_far >= best_cost:
            return
        if index == len(keys):
            if check_forest(chosen, inst).feasible:
                best_cost = cost_so_far
                best_set = frozenset(chosen)
            return
        key = keys[index]
        chosen.append(key)
        recurse(index + 1, cost_so_far + inst.edges[key])
        chosen.pop()
        recurse(index + 1, cost_so_far)

    recurse(0, Fraction(0))
    if best_cost is None:
        raise InstanceError("no feasible edge set exists (disconnected demand)")
    return best_cost, best_set


def parse_forest(inst: Instance, text: str) -> frozenset[EdgeKey]:
    """Parse 'edge u v' lines against an instance."""
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] != "edge" or len(tokens) != 3:
            raise FormatError(f"line {lineno}: expected 'edge u v'")
        key = edge_key(tokens[1], tokens[2])
        if key not in inst.edges:
            raise UnknownEdge(f"line {lineno}: no edge {tokens[1]}-{tokens[2]}")
        edges.add(key)
    return frozenset(edges)


def format_forest(edges: Iterable[EdgeKey]) -> str:
    lines = [f"edge {u} {v}" for (u, v) in sorted(set(edges))]
    return "\n".join(lines) + ("\n" if lines else "")
