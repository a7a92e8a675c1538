"""LP solutions and certificates, with exact verification.

A :class:`BcrSolution` holds the per-root arc values ``x[(root, arc)]`` and the
per-root pair coverages ``z[(root, pair_index)]`` of the cut relaxation on
bidirected arcs.  Feasibility is checked by separation: for every root that
covers a pair, each pair endpoint must be separated from the root by cuts of
value at least the coverage, which a single exact min-cut per endpoint decides.

Dual certificates assign a value ``alpha`` per pair and a family of cut sets
per (root, pair); verification checks the arc loads and the per-root coverage
sums and reports the certified value (the alpha total) when feasible.

Text forms::

    x <root> <tail> <head> <value>
    z <root> <s> <t> <value>

    alpha <s> <t> <value>
    y <root> <s> <t> <value> : <u1> <u2> ...

    root <r0>
    x <tail> <head> <value>

Pairs are addressed by endpoints in the text form but by index internally;
repeated endpoint-equal lines are assigned to successive duplicate pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import FormatError, InstanceError
from .flows import FlowNetwork, max_flow
from .model import Arc, EdgeKey, Instance, VertexId, edge_key
from .rationals import format_rational, is_half_integral_value, parse_rational

XKey = tuple[VertexId, Arc]
ZKey = tuple[VertexId, int]


@dataclass
class BcrSolution:
    """Sparse per-root solution of the bidirected cut relaxation."""

    x: dict[XKey, Fraction]
    z: dict[ZKey, Fraction]

    @staticmethod
    def from_sparse(
        x: Mapping[XKey, Fraction | int] | Iterable[tuple[XKey, Fraction | int]],
        z: Mapping[ZKey, Fraction | int] | Iterable[tuple[ZKey, Fraction | int]],
    ) -> "BcrSolution":
        """Build a solution, normalising values and dropping exact zeros."""
        xi = x.items() if isinstance(x, Mapping) else x
        zi = z.items() if isinstance(z, Mapping) else z
        xmap = {}
        for (root, arc), value in xi:
            v = Fraction(value)
            if v != 0:
                xmap[(root, Arc(*arc))] = v
        zmap = {}
        for key, value in zi:
            v = Fraction(value)
            if v != 0:
                zmap[key] = v
        return BcrSolution(xmap, zmap)

    def roots(self) -> list[VertexId]:
        """Roots carrying any x or z mass, sorted."""
        out = {r for (r, _a) in self.x}
        out.update(r for (r, _i) in self.z)
        return sorted(out)

    def x_by_root(self, root: VertexId) -> dict[Arc, Fraction]:
        return {arc: v for (r, arc), v in self.x.items() if r == root}

    def z_by_root(self, root: VertexId) -> dict[int, Fraction]:
        return {i: v for (r, i), v in self.z.items() if r == root}

    def copy(self) -> "BcrSolution":
        return BcrSolution(dict(self.x), dict(self.z))


@dataclass
class TreeBcrSolution:
    """Single-root arc solution of the rooted cut relaxation."""

    root: VertexId
    x: dict[Arc, Fraction]

    @staticmethod
    def from_sparse(root: VertexId, x: Mapping[Arc, Fraction | int]) -> "TreeBcrSolution":
        return TreeBcrSolution(root, {Arc(*a): Fraction(v) for a, v in x.items() if v != 0})


@dataclass(frozen=True)
class YEntry:
    """One dual cut set: value charged to (root, pair) on the boundary of cut_set."""

    root: VertexId
    pair_index: int
    cut_set: frozenset[VertexId]
    value: Fraction


@dataclass
class DualCertificate:
    """Per-pair values alpha and the supporting cut sets."""

    alpha: tuple[Fraction, ...]
    entries: tuple[YEntry, ...]

    def value(self) -> Fraction:
        return sum(self.alpha, Fraction(0))


# --- verdicts -------------------------------------------------------------


@dataclass(frozen=True)
class NegativeValue:
    kind: str
    key: object
    value: Fraction

    def __str__(self) -> str:
        return f"negative {self.kind} value {format_rational(self.value)} at {self.key}"


@dataclass(frozen=True)
class BadZSum:
    pair_index: int
    total: Fraction

    def __str__(self) -> str:
        return (
            f"pair {self.pair_index}: root shares sum to "
            f"{format_rational(self.total)}, not 1"
        )


@dataclass(frozen=True)
class ViolatedCut:
    root: VertexId
    pair_index: int
    cut_set: frozenset[VertexId]
    cut_value: Fraction
    required: Fraction

    def __str__(self) -> str:
        members = " ".join(sorted(self.cut_set))
        return (
            f"cut {{{members}}} leaves only {format_rational(self.cut_value)} "
            f"toward root {self.root} for pair {self.pair_index}, "
            f"needs {format_rational(self.required)}"
        )


@dataclass(frozen=True)
class EdgeOverload:
    root: VertexId
    arc: Arc
    load: Fraction
    capacity: Fraction

    def __str__(self) -> str:
        return (
            f"root {self.root}: cut charges on arc {self.arc.tail}->{self.arc.head} "
            f"total {format_rational(self.load)}, above cost "
            f"{format_rational(self.capacity)}"
        )


@dataclass(frozen=True)
class AlphaUncovered:
    pair_index: int
    root: VertexId
    covered: Fraction
    required: Fraction

    def __str__(self) -> str:
        return (
            f"pair {self.pair_index}, root {self.root}: cut charges cover only "
            f"{format_rational(self.covered)} of alpha "
            f"{format_rational(self.required)}"
        )


@dataclass(frozen=True)
class Verdict:
    """Outcome of a verification: feasible, or a first witness of failure."""

    feasible: bool
    violation: object | None = None
    value: Fraction | None = None

    def describe(self) -> str:
        if self.feasible:
            if self.value is not None:
                return f"feasible (value {format_rational(self.value)})"
            return "feasible"
        return f"infeasible: {self.violation}"


# --- primal ----------------------------------------------------------------


def cost(inst: Instance, sol: BcrSolution) -> Fraction:
    """Total edge cost carried by x."""
    total = Fraction(0)
    for (_root, arc), value in sol.x.items():
        key = edge_key(arc.tail, arc.head)
        if key not in inst.edges:
            raise InstanceError(f"solution uses missing edge {key}")
        total += inst.edges[key] * value
    return total


def root_network(inst: Instance, sol: BcrSolution, root: VertexId) -> FlowNetwork:
    """Flow network whose capacities are the root's arc values."""
    net = FlowNetwork()
    for (r, arc), value in sol.x.items():
        if r == root:
            if edge_key(arc.tail, arc.head) not in inst.edges:
                raise InstanceError(f"solution uses missing edge {arc}")
            net.add_arc(arc.tail, arc.head, value)
    return net


def verify_primal(inst: Instance, sol: BcrSolution) -> Verdict:
    """Exact feasibility check of a BcrSolution against its instance.

    Checks nonnegativity, that every pair's coverages sum to one, and that for
    every root covering a pair both pair endpoints have min-cut separation at
    least the coverage.  The first failure is returned as a witness; violated
    cuts are inclusion-minimal (residual-reachable side).
    """
    for key, value in sorted(sol.x.items()):
        root, arc = key
        if root not in inst.vertex_set:
            raise InstanceError(f"x root {root!r} is not a vertex")
        if edge_key(arc.tail, arc.head) not in inst.edges:
            raise InstanceError(f"solution uses missing edge {arc}")
        if value < 0:
            return Verdict(False, NegativeValue("x", key, value))
    for key, value in sorted(sol.z.items()):
        if value < 0:
            return Verdict(False, NegativeValue("z", key, value))
        root, pair_index = key
        if root not in inst.vertex_set:
            raise InstanceError(f"z root {root!r} is not a vertex")
        if not 0 <= pair_index < len(inst.pairs):
            raise InstanceError(f"z pair index {pair_index} out of range")

    totals = [Fraction(0)] * len(inst.pairs)
    for (root, pair_index), value in sol.z.items():
        totals[pair_index] += value
    for i, total in enumerate(totals):
        if total != 1:
            return Verdict(False, BadZSum(i, total))

    by_root: dict[VertexId, list[tuple[int, Fraction]]] = {}
    for (root, pair_index), value in sol.z.items():
        if value > 0:
            by_root.setdefault(root, []).append((pair_index, value))
    for root in sorted(by_root):
        net = root_network(inst, sol, root)
        for pair_index, need in sorted(by_root[root]):
            for endpoint in inst.pairs[pair_index]:
                if endpoint == root:
                    continue
                result = max_flow(net, [endpoint], [root])
                if result.value < need:
                    return Verdict(
                        False,
                        ViolatedCut(root, pair_index, result.min_cut_side, result.value, need),
                    )
    return Verdict(True)


def verify_tree_bcr(inst: Instance, sol: TreeBcrSolution) -> Verdict:
    """Feasibility of a single-root solution: unit separation for each terminal."""
    from .model import terminals as terminals_of

    if sol.root not in inst.vertex_set:
        raise InstanceError(f"root {sol.root!r} is not a vertex")
    for arc, value in sorted(sol.x.items()):
        if value < 0:
            return Verdict(False, NegativeValue("x", arc, value))
        if edge_key(arc.tail, arc.head) not in inst.edges:
            raise InstanceError(f"solution uses missing edge {arc}")
    net = FlowNetwork()
    for arc, value in sol.x.items():
        net.add_arc(arc.tail, arc.head, value)
    for t in sorted(terminals_of(inst)):
        if t == sol.root:
            continue
        result = max_flow(net, [t], [sol.root])
        if result.value < 1:
            return Verdict(
                False, ViolatedCut(sol.root, -1, result.min_cut_side, result.value, Fraction(1))
            )
    return Verdict(True)


def tree_cost(inst: Instance, sol: TreeBcrSolution) -> Fraction:
    total = Fraction(0)
    for arc, value in sol.x.items():
        key = edge_key(arc.tail, arc.head)
        if key not in inst.edges:
            raise InstanceError(f"solution uses missing edge {arc}")
        total += inst.edges[key] * value
    return total


# --- dual ------------------------------------------------------------------


def _entry_boundary(inst: Instance, cut_set: frozenset[VertexId]) -> list[Arc]:
    """Arcs leaving the cut set, against the instance's edges."""
    out = []
    for (u, v) in inst.edges:
        if u in cut_set and v not in cut_set:
            out.append(Arc(u, v))
        elif v in cut_set and u not in cut_set:
            out.append(Arc(v, u))
    return out


def verify_dual(inst: Instance, cert: DualCertificate) -> Verdict:
    """Exact feasibility of a dual certificate; reports the alpha total.

    Checks nonnegativity, the structural entry requirements, that no (root,
    arc) load exceeds the arc's cost, and that for every pair and every root
    the entry values covering the pair sum to at least alpha.
    """
    if len(cert.alpha) != len(inst.pairs):
        raise InstanceError("alpha vector does not match the pair count")
    for i, a in enumerate(cert.alpha):
        if a < 0:
            return Verdict(False, NegativeValue("alpha", i, a))
    for entry in cert.entries:
        if entry.value < 0:
            return Verdict(False, NegativeValue("y", entry, entry.value))
        if not 0 <= entry.pair_index < len(inst.pairs):
            raise InstanceError(f"y entry pair index {entry.pair_index} out of range")
        if entry.root not in inst.vertex_set:
            raise InstanceError(f"y entry root {entry.root!r} is not a vertex")
        if entry.root in entry.cut_set:
            raise InstanceError(f"y entry cut set contains its root {entry.root!r}")
        if not entry.cut_set <= inst.vertex_set:
            raise InstanceError("y entry cut set leaves the vertex set")
        if not entry.cut_set & set(inst.pairs[entry.pair_index]):
            raise InstanceError("y entry cut set misses its pair")

    load: dict[tuple[VertexId, Arc], Fraction] = {}
    for entry in cert.entries:
        if entry.value == 0:
            continue
        for arc in _entry_boundary(inst, entry.cut_set):
            key = (entry.root, arc)
            load[key] = load.get(key, Fraction(0)) + entry.value
    for (root, arc) in sorted(load):
        capacity = inst.edges[edge_key(arc.tail, arc.head)]
        if load[(root, arc)] > capacity:
            return Verdict(False, EdgeOverload(root, arc, load[(root, arc)], capacity))

    covered: dict[tuple[int, VertexId], Fraction] = {}
    for entry in cert.entries:
        key = (entry.pair_index, entry.root)
        covered[key] = covered.get(key, Fraction(0)) + entry.value
    for i, a in enumerate(cert.alpha):
        if a == 0:
            continue
        for root in sorted(inst.vertex_set):
            got = covered.get((i, root), Fraction(0))
            if got < a:
                return Verdict(False, AlphaUncovered(i, root, got, a))
    return Verdict(True, value=cert.value())


# --- projections and structure --------------------------------------------


def undirected_projection(sol: BcrSolution) -> dict[EdgeKey, Fraction]:
    """Per-edge mass summed over all roots and both directions."""
    out: dict[EdgeKey, Fraction] = {}
    for (_root, arc), value in sol.x.items():
        key = edge_key(arc.tail, arc.head)
        out[key] = out.get(key, Fraction(0)) + value
    return out


def is_half_integral(sol: BcrSolution) -> bool:
    """True when every x and z value is a multiple of one half."""
    return all(is_half_integral_value(v) for v in sol.x.values()) and all(
        is_half_integral_value(v) for v in sol.z.values()
    )


# --- text forms ------------------------------------------------------------


def _pair_indices_by_endpoints(inst: Instance) -> dict[frozenset[VertexId], list[int]]:
    table: dict[frozenset[VertexId], list[int]] = {}
    for i, (s, t) in enumerate(inst.pairs):
        table.setdefault(frozenset((s, t)), []).append(i)
    return table


class _PairResolver:
    """Assign endpoint-addressed lines to pair indices, duplicates in order."""

    def __init__(self, inst: Instance) -> None:
        self._table = _pair_indices_by_endpoints(inst)
        self._seen: dict[tuple[object, frozenset[VertexId]], int] = {}

    def resolve(self, scope: object, s: VertexId, t: VertexId) -> int:
        key = frozenset((s, t))
        matches = self._table.get(key)
        if not matches:
            raise FormatError(f"no pair with endpoints {s} {t}")
        slot = self._seen.get((scope, key), 0)
        if slot >= len(matches):
            raise FormatError(f"more lines for pair {s} {t} than duplicate pairs exist")
        self._seen[(scope, key)] = slot + 1
        return matches[slot]


def parse_solution(inst: Instance, text: str) -> BcrSolution:
    """Parse the x/z text form against an instance."""
    x: dict[XKey, Fraction] = {}
    z: dict[ZKey, Fraction] = {}
    resolver = _PairResolver(inst)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "x":
            if len(tokens) != 5:
                raise FormatError(f"line {lineno}: x needs root, tail, head, value")
            root, tail, head = tokens[1], tokens[2], tokens[3]
            if root not in inst.vertex_set or tail not in inst.vertex_set or head not in inst.vertex_set:
                raise InstanceError(f"line {lineno}: unknown vertex")
            if edge_key(tail, head) not in inst.edges:
                raise InstanceError(f"line {lineno}: no edge {tail}-{head}")
            value = parse_rational(tokens[4])
            key = (root, Arc(tail, head))
            if value != 0:
                x[key] = x.get(key, Fraction(0)) + value
        elif tokens[0] == "z":
            if len(tokens) != 5:
                raise FormatError(f"line {lineno}: z needs root, two endpoints, value")
            root = tokens[1]
            if root not in inst.vertex_set:
                raise InstanceError(f"line {lineno}: unknown root {root!r}")
            index = resolver.resolve(root, tokens[2], tokens[3])
            value = parse_rational(tokens[4])
            if value != 0:
                z[(root, index)] = z.get((root, index), Fraction(0)) + value
        else:
            raise FormatError(f"line {lineno}: unknown directive {tokens[0]!r}")
    return BcrSolution(x, z)


def format_solution(inst: Instance, sol: BcrSolution) -> str:
    """Canonical x/z text: sorted x lines, then z lines in pair-index order."""
    lines = []
    for (root, arc) in sorted(sol.x):
        value = sol.x[(root, arc)]
        if value != 0:
            lines.append(f"x {root} {arc.tail} {arc.head} {format_rational(value)}")
    for (root, index) in sorted(sol.z, key=lambda k: (k[1], k[0])):
        value = sol.z[(root, index)]
        if value != 0:
            s, t = inst.pairs[index]
            lines.append(f"z {root} {s} {t} {format_rational(value)}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_tree_solution(inst: Instance, text: str) -> TreeBcrSolution:
    """Parse the rooted text form (root line plus x lines)."""
    root: VertexId | None = None
    x: dict[Arc, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "root":
            if len(tokens) != 2:
                raise FormatError(f"line {lineno}: root needs one vertex")
            if root is not None:
                raise FormatError(f"line {lineno}: repeated root line")
            root = tokens[1]
            if root not in inst.vertex_set:
                raise InstanceError(f"line {lineno}: unknown root {root!r}")
        elif tokens[0] == "x":
            if len(tokens) != 4:
                raise FormatError(f"line {lineno}: x needs tail, head, value")
            tail, head = tokens[1], tokens[2]
            if tail not in inst.vertex_set or head not in inst.vertex_set:
                raise InstanceError(f"line {lineno}: unknown vertex")
            if edge_key(tail, head) not in inst.edges:
                raise InstanceError(f"line {lineno}: no edge {tail}-{head}")
            value = parse_rational(tokens[3])
            arc = Arc(tail, head)
            if value != 0:
                x[arc] = x.get(arc, Fraction(0)) + value
        else:
            raise FormatError(f"line {lineno}: unknown directive {tokens[0]!r}")
    if root is None:
        raise FormatError("tree solution lacks a root line")
    return TreeBcrSolution(root, x)


def format_tree_solution(sol: TreeBcrSolution) -> str:
    lines = [f"root {sol.root}"]
    for arc in sorted(sol.x):
        value = sol.x[arc]
        if value != 0:
            lines.append(f"x {arc.tail} {arc.head} {format_rational(value)}")
    return "\n".join(lines) + "\n"


def _unique_pair_index(
    table: dict[frozenset[VertexId], list[int]], s: VertexId, t: VertexId, lineno: int
) -> int:
    matches = table.get(frozenset((s, t)))
    if not matches:
        raise FormatError(f"line {lineno}: no pair with endpoints {s} {t}")
    if len(matches) > 1:
        raise FormatError(
            f"line {lineno}: endpoints {s} {t} name several duplicate pairs; "
            "y lines cannot address duplicates"
        )
    return matches[0]


def parse_dual(inst: Instance, text: str) -> DualCertificate:
    """Parse the alpha/y text form against an instance.

    A pair may be charged by any number of y lines.  Duplicate pairs are
    unaddressable by y lines (the endpoint form cannot distinguish them) and
    are rejected; alpha lines fall to successive duplicates in file order.
    """
    alpha = [Fraction(0)] * len(inst.pairs)
    alpha_resolver = _PairResolver(inst)
    pair_table = _pair_indices_by_endpoints(inst)
    entries: list[YEntry] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "alpha":
            if len(tokens) != 4:
                raise FormatError(f"line {lineno}: alpha needs two endpoints and a value")
            index = alpha_resolver.resolve(None, tokens[1], tokens[2])
            alpha[index] = parse_rational(tokens[3])
        elif tokens[0] == "y":
            if ":" not in tokens:
                raise FormatError(f"line {lineno}: y needs a ':' before the cut set")
            sep = tokens.index(":")
            head, members = tokens[:sep], tokens[sep + 1 :]
            if len(head) != 5:
                raise FormatError(f"line {lineno}: y needs root, endpoints, value, ':' and a cut set")
            root = head[1]
            if root not in inst.vertex_set:
                raise InstanceError(f"line {lineno}: unknown root {root!r}")
            index = _unique_pair_index(pair_table, head[2], head[3], lineno)
            value = parse_rational(head[4])
            cut = frozenset(members)
            if not members:
                raise FormatError(f"line {lineno}: empty cut set")
            entries.append(YEntry(root, index, cut, value))
        else:
            raise FormatError(f"line {lineno}: unknown directive {tokens[0]!r}")
    return DualCertificate(tuple(alpha), tuple(entries))


def format_dual(inst: Instance, cert: DualCertificate) -> str:
    """Canonical alpha/y text in pair-index, then root order.

    Certificates charging a duplicate-endpoint pair cannot be rendered (the
    endpoint-addressed y form cannot tell duplicates apart).
    """
    pair_table = _pair_indices_by_endpoints(inst)
    for entry in cert.entries:
        s, t = inst.pairs[entry.pair_index]
        if len(pair_table[frozenset((s, t))]) > 1:
            raise FormatError(
                f"pair {s} {t} has duplicates; its y entries have no text form"
            )
    lines = []
    for i, a in enumerate(cert.alpha):
        s, t = inst.pairs[i]
        lines.append(f"alpha {s} {t} {format_rational(a)}")
    ordered = sorted(
        cert.entries, key=lambda e: (e.root, e.pair_index, sorted(e.cut_set), e.value)
    )
    for entry in ordered:
        s, t = inst.pairs[entry.pair_index]
        members = " ".join(sorted(entry.cut_set))
        lines.append(
            f"y {entry.root} {s} {t} {format_rational(entry.value)} : {members}"
        )
    return "\n".join(lines) + "\n"
