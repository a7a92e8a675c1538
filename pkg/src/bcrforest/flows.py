"""Exact max-flow / min-cut on rational capacities.

Shortest-augmenting-path (BFS) search over an explicit residual map.  All
capacities and flow values are Fractions, so half-integral inputs yield
half-integral flows and cuts are certified exactly.  Multiple sources and
sinks are supported directly: BFS starts from every source and stops at the
first sink, which is equivalent to the usual super-node construction.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable

from .errors import LimitInfeasible

Node = Hashable


class FlowNetwork:
    """Directed capacities; parallel arcs are summed on insertion."""

    def __init__(self) -> None:
        self.cap: dict[Node, dict[Node, Fraction]] = {}
        self._sorted_adj: dict[Node, list[Node]] | None = None

    def add_arc(self, tail: Node, head: Node, capacity: Fraction | int) -> None:
        cap = Fraction(capacity)
        if cap < 0:
            raise ValueError(f"negative capacity on arc {tail!r}->{head!r}")
        if tail == head:
            raise ValueError(f"self-loop arc at {tail!r}")
        self.cap.setdefault(tail, {})
        self.cap.setdefault(head, {})
        self.cap[tail][head] = self.cap[tail].get(head, Fraction(0)) + cap
        self._sorted_adj = None

    def nodes(self) -> list[Node]:
        return sorted(self.cap)

    def adjacency(self) -> dict[Node, list[Node]]:
        """Sorted neighbour lists over the union of forward and reverse arcs."""
        if self._sorted_adj is None:
            nbr: dict[Node, set[Node]] = {v: set() for v in self.cap}
            for u, heads in self.cap.items():
                for v in heads:
                    nbr[u].add(v)
                    nbr[v].add(u)
            self._sorted_adj = {v: sorted(ws) for v, ws in nbr.items()}
        return self._sorted_adj


@dataclass(frozen=True)
class FlowResult:
    """Value, positive net flow per arc, and the source side of a min cut.

    ``min_cut_side`` is the set of nodes reachable from the sources in the
    final residual network; when no ``limit`` stopped the search early this is
    the inclusion-minimal minimum cut.
    """

    value: Fraction
    flow: dict[tuple[Node, Node], Fraction]
    min_cut_side: frozenset[Node]


def max_flow(
    net: FlowNetwork,
    sources: Iterable[Node],
    sinks: Iterable[Node],
    limit: Fraction | None = None,
) -> FlowResult:
    """Maximum (or limited) flow from the sources to the sinks.

    With ``limit`` set, augmentation stops once that value is shipped and
    LimitInfeasible is raised if the network cannot carry it.
    """
    src = sorted(set(sources))
    snk = frozenset(sinks)
    if not src or not snk:
        raise ValueError("sources and sinks must be nonempty")
    if any(s in snk for s in src):
        raise ValueError("a node cannot be both source and sink")
    if limit is not None and limit < 0:
        raise ValueError("limit must be nonnegative")

    residual: dict[Node, dict[Node, Fraction]] = {}
    for u, heads in net.cap.items():
        ru = residual.setdefault(u, {})
        for v, c in heads.items():
            ru[v] = ru.get(v, Fraction(0)) + c
            residual.setdefault(v, {}).setdefault(u, Fraction(0))
    adj = net.adjacency()
    known = set(residual)
    total = Fraction(0)

    while limit is None or total < limit:
        parent: dict[Node, Node | None] = {}
        queue: deque[Node] = deque()
        for s in src:
            if s in known:
                parent[s] = None
                queue.append(s)
        hit: Node | None = None
        while queue and hit is None:
            v = queue.popleft()
            rv = residual[v]
            for w in adj[v]:
                if w in parent or rv[w] <= 0:
                    continue
                parent[w] = v
                if w in snk:
                    hit = w
                    break
                queue.append(w)
        if hit is None:
            break
        bottleneck: Fraction | None = None
        w = hit
        while parent[w] is not None:
            v = parent[w]
            r = residual[v][w]
            if bottleneck is None or r < bottleneck:
                bottleneck = r
            w = v
        assert bottleneck is not None and bottleneck > 0
        if limit is not None:
            bottleneck = min(bottleneck, limit - total)
        w = hit
        while parent[w] is not None:
            v = parent[w]
            residual[v][w] -= bottleneck
            residual[w][v] += bottleneck
            w = v
        total += bottleneck

    if limit is not None and total < limit:
        raise LimitInfeasible(f"requested flow {limit}, network carries only {total}")

    # Sources beyond the network's arcs still sit on the cut's source side.
    reachable: set[Node] = set(src)
    queue = deque(s for s in src if s in known)
    while queue:
        v = queue.popleft()
        rv = residual[v]
        for w in adj[v]:
            if w not in reachable and rv[w] > 0:
                reachable.add(w)
                queue.append(w)

    flow: dict[tuple[Node, Node], Fraction] = {}
    for u, heads in net.cap.items():
        for v, c in heads.items():
            net_flow = c - residual[u][v]
            if net_flow > 0:
                flow[(u, v)] = net_flow
    return FlowResult(total, flow, frozenset(reachable))


def min_cut_value(net: FlowNetwork, sources: Iterable[Node], sinks: Iterable[Node]) -> Fraction:
    """Value of a minimum cut separating the sources from the sinks."""
    return max_flow(net, sources, sinks).value
