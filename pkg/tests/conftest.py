"""Shared fixtures and oracle helpers for the suite.

The ``corpus`` fixture is a small seeded collection of random half-integral
instances used by the structural tests; the acceptance suite runs its own,
larger sweep.  Oracle helpers here are deliberately independent of the
library's algorithms (enumeration instead of flows, exhaustive subsets
instead of parametric search) so each check has two routes to the answer.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from bcrforest.generators import gen_random_halfintegral
from bcrforest.model import Arc, Instance, VertexId
from bcrforest.solution import BcrSolution, TreeBcrSolution


@pytest.fixture(scope="session")
def corpus() -> list[tuple[int, Instance, BcrSolution]]:
    """Thirty seeded instances, n in [6, 12], varying pair counts."""
    members = []
    for seed in range(1, 31):
        n = 6 + seed % 7
        pairs = 2 + seed % 3
        inst, sol = gen_random_halfintegral(seed, n, 3, pairs)
        members.append((seed, inst, sol))
    return members


@pytest.fixture(scope="session")
def single_component_corpus() -> list[tuple[int, Instance, BcrSolution]]:
    """Instances whose demands form one nontrivial component."""
    members = []
    for seed in range(100, 120):
        n = 6 + seed % 5
        inst, sol = gen_random_halfintegral(seed, n, 3, 3, single_component=True)
        members.append((seed, inst, sol))
    return members


def enumerate_min_cut(
    capacities: dict[tuple[object, object], Fraction],
    sources: frozenset,
    sinks: frozenset,
) -> Fraction:
    """Minimum directed cut value by exhaustive enumeration of vertex sides."""
    nodes = set()
    for (u, v) in capacities:
        nodes.add(u)
        nodes.add(v)
    nodes |= sources | sinks
    free = sorted(nodes - sources - sinks, key=repr)
    best: Fraction | None = None
    for bits in itertools.product((False, True), repeat=len(free)):
        side = set(sources)
        side.update(v for v, keep in zip(free, bits) if keep)
        value = sum(
            (c for (u, v), c in capacities.items() if u in side and v not in side),
            Fraction(0),
        )
        if best is None or value < best:
            best = value
    assert best is not None
    return best


def tree_as_forest_solution(inst: Instance, tree: TreeBcrSolution) -> BcrSolution:
    """Lift a single-root solution to the multi-root form (all shares at r0)."""
    x = {(tree.root, arc): value for arc, value in tree.x.items()}
    z = {(tree.root, i): Fraction(1) for i in range(len(inst.pairs))}
    return BcrSolution(x, z)


def connectivity_requirement(inst: Instance, side: frozenset[VertexId]) -> bool:
    """True when some demand pair is split by the vertex set ``side``."""
    for (s, t) in inst.pairs:
        if (s in side) != (t in side):
            return True
    return False
